#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strata/network.hpp"

namespace strata::sc {

using Family = qd::Family;
enum class Selector { Horizontal, Vertical, Both };

/// Two-parameter affine slice c(t, s) = base + t * dir1 + s * dir2 of the coefficient space.
/// Directions are real vectors (Re a0, Im a0, Re a1, Im a1, ...).
struct SliceSpec {
  Family family = Family::SimplePole;
  int k = 2;  // numerator degree; the polynomial degree for the polynomial family
  std::vector<Complex> base;
  std::vector<double> dir1, dir2;
  double t_min = -0.5, t_max = 0.5;
  double s_min = -0.5, s_max = 0.5;
  int nx = 21, ny = 21;
  Selector orientations = Selector::Both;
  int threads = 0;  // 0: hardware concurrency
  bool refine = true;
  double wall_tolerance = 1e-8;  // |dt| of refined wall points
  tr::TraceConfig trace;         // not part of the text format

  std::vector<Complex> coefficients(double t, double s) const;
  double t_at(int i) const;
  double s_at(int j) const;
};

/// Throws InvalidArgument with a description of the first problem.
void validate(const SliceSpec& spec);
/// Flat `key = value` text; '#' starts a comment.
SliceSpec parse_slice_spec(const std::string& text);
std::string format_slice_spec(const SliceSpec& spec);

inline constexpr const char* kSingular = "SINGULAR";
inline constexpr const char* kFailed = "FAILED";
inline constexpr const char* kWall = "WALL";
/// Note on a signature label whose structure has a pole-zero connection.
inline constexpr const char* kPoleZeroNote = "pole-zero connection";

struct CellLabel {
  std::string label;  // Γ signature, WALL, SINGULAR or FAILED
  std::string note;   // error text for FAILED, or kPoleZeroNote
};

struct Cell {
  int i = 0, j = 0;
  double t = 0.0, s = 0.0;
  CellLabel h, v;
};

enum class WallKind { Short, PoleZero };

struct WallPoint {
  Orientation orientation = Orientation::Horizontal;
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  // grid edge
  double u = 0.0;                      // position along the edge, in [0, 1]
  double t = 0.0, s = 0.0;             // slice coordinates
  WallKind kind = WallKind::Short;
  int zero_a = -1, zero_b = -1;        // zero indices at u (zero_b = -1 for pole-zero)
  Complex period;                      // sign-normalized vanishing period
  double residual = 0.0;               // |Im P| (horizontal) or |Re P| (vertical)
  bool confirmed = false;              // the trace detector agrees
};

struct UnresolvedEdge {
  Orientation orientation = Orientation::Horizontal;
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;
  std::string reason;
};

struct WallMap {
  SliceSpec spec;
  std::vector<Cell> cells;  // row-major: index j * nx + i
  std::vector<WallPoint> walls;
  std::vector<UnresolvedEdge> unresolved;
  int failed_cells = 0;
  const Cell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * spec.nx + i]; }
};

/// Builds the differential for a coefficient vector of the spec's family.
qd::QuadDiff make_differential(Family family, int k, const std::vector<Complex>& coeffs);
/// Cell label for one orientation; never throws.
CellLabel classify(Family family, int k, const std::vector<Complex>& coeffs, Orientation o,
                   const tr::TraceConfig& config = {});

WallMap scan_slice(const SliceSpec& spec);

struct RefineOptions {
  double tolerance = 1e-8;     // |dt|
  int samples = 16;            // initial sign-change search
  double max_residual = 1e-6;  // accepted |Im P| (|Re P|) at t*
  double confirm_tolerance = 1e-5;
  tr::TraceConfig trace;  // capture_tolerance is replaced by confirm_tolerance
};

/// Differential along a parameter edge, u in [0, 1].
using EdgeFamily = std::function<qd::QuadDiff(double)>;

/// All period sign changes along the edge, refined by bisection.
std::vector<WallPoint> refine_edge(const EdgeFamily& qd_at, Orientation o, const RefineOptions& opt = {});

/// Single wall on an edge whose end signatures differ: the best confirmed short wall.
/// PreconditionViolated when the end signatures agree, NoSignChange when no period
/// component changes sign.
WallPoint wall_refine(const EdgeFamily& qd_at, Orientation o, const RefineOptions& opt = {});

}  // namespace strata::sc
