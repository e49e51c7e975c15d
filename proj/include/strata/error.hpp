#pragma once

#include <stdexcept>
#include <string>

namespace strata {

// Numeric values are shared with the C API (strata_status_t).
enum class ErrorCode : int {
  DegenerateInput = 1,
  RootFindingFailure = 2,
  PathThroughSingularity = 3,
  QuadratureFailure = 4,
  StepFailure = 5,
  AmbiguousDirection = 6,
  StructureAmbiguous = 7,
  GeneralPositionViolated = 8,
  InconsistentDiagram = 9,
  BudgetExceeded = 10,
  InvalidDiagonal = 11,
  Overflow = 12,
  NotRepresentable = 13,
  ArrangementDegeneracy = 14,
  NoSignChange = 15,
  PreconditionViolated = 16,
  InvalidArgument = 17,
  Io = 18,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Input errors map to CLI exit code 2, numeric failures to 3.
  bool is_input_error() const noexcept {
    return code_ == ErrorCode::DegenerateInput || code_ == ErrorCode::InvalidArgument ||
           code_ == ErrorCode::PreconditionViolated || code_ == ErrorCode::Io;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace strata
