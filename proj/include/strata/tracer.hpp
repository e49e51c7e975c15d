#pragma once

#include <vector>

#include "strata/qdcore.hpp"

namespace strata::tr {

struct TraceConfig {
  double step_tolerance = 1e-9;      // embedded-pair local error per unit length
  long max_steps = 1'000'000;
  double escape_factor = 1e3;        // R_escape = escape_factor * max(1, max|zero|)
  int escape_extensions = 3;         // R *= 10 while the exit angle is ambiguous
  double capture_radius = 1e-4;      // relative to the diameter
  double capture_tolerance = 1e-7;   // |Im P| <= tol |P| to accept a connection
  double start_offset = 1e-3;        // relative to the separation of the start point
  double step_cap = 0.05;            // h <= step_cap * distance to critical set
  qd::PeriodOptions quadrature;       // period evaluations for endpoint keys and widths
};

enum class Termination { Escape, HitsCritical, Budget };

const char* termination_name(Termination t);

struct Trajectory {
  Orientation orientation = Orientation::Horizontal;
  int start_id = -1;
  int start_dir = -1;
  Complex launch;  // unit launch direction
  std::vector<Complex> points;
  Termination termination = Termination::Budget;
  int sector = -1;   // Escape
  int end_id = -1;   // HitsCritical
  int end_dir = -1;  // launch index at end_id matching the approach direction
  Complex period;    // integral of e^{-i phi} sqrt(q) along the trajectory so far (to the end point)
  double max_phase_error = 0.0;
  long steps = 0;
};

/// Launch directions at a critical point: mu + 2 of them for a zero of order mu, one for
/// the simple pole. Sorted by increasing angle starting from the smallest non-negative one.
std::vector<Complex> initial_directions(const qd::QuadDiff& qd, int critical_id, Orientation o);

/// Angles of the principal directions at infinity.
std::vector<double> principal_angles(const qd::QuadDiff& qd, Orientation o);

/// Sector index of an escape angle; AmbiguousDirection near a sector boundary.
int principal_direction_of(const qd::QuadDiff& qd, double angle, Orientation o);

Trajectory trace(const qd::QuadDiff& qd, int critical_id, int direction_index, Orientation o,
                 const TraceConfig& config = {});

/// Escaping end of a trajectory at infinity, ordered counterclockwise.
struct Endpoint {
  int trajectory = -1;
  int sector = -1;
  double key = 0.0;  // Im of the flat coordinate in the sector's chart
};

/// Boundary arc at infinity from endpoint `from` to `to` (indices into endpoints).
struct Arc {
  int from = -1;
  int to = -1;
};

struct Strip {
  int end_a = -1, end_b = -1;  // sectors of the two ends
  Arc arc_a, arc_b;
  std::vector<int> boundary_critical;
  bool has_pole = false;
  double width = 0.0;
  double width_mismatch = 0.0;  // |width at end a - width at end b|
  std::vector<int> trajectories;
};

struct HalfPlane {
  int sector_from = -1, sector_to = -1;
  Arc arc;
  std::vector<int> trajectories;
};

struct Connection {
  int a = -1, b = -1;  // critical ids
  Complex period;
  int trajectory = -1;
};

struct TrajectoryStructure {
  explicit TrajectoryStructure(qd::QuadDiff q) : qd(std::move(q)) {}

  qd::QuadDiff qd;
  Orientation orientation = Orientation::Horizontal;
  int num_sectors = 0;
  std::vector<Trajectory> trajectories;  // one per edge of the critical graph
  std::vector<Endpoint> endpoints;       // sorted ccw
  std::vector<HalfPlane> half_planes;
  std::vector<Strip> strips;
  std::vector<Connection> shorts;            // zero to zero
  std::vector<Connection> pole_connections;  // pole to zero
  int pole_endpoint = -1;                    // endpoint index of the pole trajectory if it escapes
  double max_phase_error = 0.0;
};

TrajectoryStructure build_structure(const qd::QuadDiff& qd, Orientation o, const TraceConfig& config = {});

struct ShortTrajectory {
  int a = -1, b = -1;
  Complex period;
};

/// Zero-to-zero connections, using `tol` as the capture tolerance.
std::vector<ShortTrajectory> find_short_trajectories(const qd::QuadDiff& qd, Orientation o, double tol = 1e-7,
                                                     const TraceConfig& config = {});

}  // namespace strata::tr
