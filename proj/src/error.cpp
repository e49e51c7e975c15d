#include "strata/error.hpp"

namespace strata {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::RootFindingFailure: return "RootFindingFailure";
    case ErrorCode::PathThroughSingularity: return "PathThroughSingularity";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::AmbiguousDirection: return "AmbiguousDirection";
    case ErrorCode::StructureAmbiguous: return "StructureAmbiguous";
    case ErrorCode::GeneralPositionViolated: return "GeneralPositionViolated";
    case ErrorCode::InconsistentDiagram: return "InconsistentDiagram";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidDiagonal: return "InvalidDiagonal";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::ArrangementDegeneracy: return "ArrangementDegeneracy";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace strata
