#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "strata/error.hpp"

namespace strata {

using Complex = std::complex<double>;

enum class Orientation { Horizontal, Vertical };

inline const char* orientation_tag(Orientation o) { return o == Orientation::Horizontal ? "h" : "v"; }

namespace qd {

/// Monic polynomial z^n + c[n-1] z^{n-1} + ... + c[0], coefficients stored low to high
/// including the leading 1.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial monic(std::span<const Complex> lower_coeffs);
  static Polynomial from_roots(std::span<const Complex> roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Complex>& coefficients() const { return c_; }

  Complex operator()(Complex z) const;
  /// Value and first derivative by Horner.
  void eval_with_derivative(Complex z, Complex& p, Complex& dp) const;
  /// Taylor coefficients at z0: p(z) = sum_j t[j] (z - z0)^j.
  std::vector<Complex> taylor_at(Complex z0) const;

 private:
  std::vector<Complex> c_;
};

struct Root {
  Complex location;
  int multiplicity = 1;
};

struct RootOptions {
  int max_iterations = 600;
  int max_restarts = 8;
  double cluster_tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
};

/// Aberth-Ehrlich simultaneous iteration with clustering of coincident roots.
/// Throws RootFindingFailure when no restart converges.
std::vector<Root> roots(const Polynomial& p, const RootOptions& options = {});
std::vector<Root> roots(std::span<const Complex> lower_coeffs, const RootOptions& options = {});

enum class Family { SimplePole, Polynomial };

struct CriticalPoint {
  Complex z;
  int order = 1;  // zero multiplicity, or -1 for the simple pole
  bool is_pole() const { return order < 0; }
};

/// Local form q(z) ~ c (z - z0)^order near a critical point.
struct LocalForm {
  Complex c;
  int order;
};

/// The differential (z^k + a_{k-1} z^{k-1} + ... + a_0)/z dz^2, or the polynomial
/// differential (z^d + ... + a_0) dz^2 when family() == Family::Polynomial.
class QuadDiff {
 public:
  /// Throws DegenerateInput if k < 2, coeffs.size() != k or a_0 == 0.
  static QuadDiff make(int k, std::vector<Complex> coeffs);
  /// Monic polynomial differential of degree coeffs.size() >= 1.
  static QuadDiff make_polynomial(std::vector<Complex> coeffs);

  Family family() const { return family_; }
  bool has_pole() const { return family_ == Family::SimplePole; }
  int k() const { return k_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const Polynomial& numerator() const { return numerator_; }
  const std::vector<Root>& zeros() const { return zeros_; }

  int pole_infinity_order() const { return has_pole() ? k_ + 3 : k_ + 4; }
  int num_principal_directions() const { return pole_infinity_order() - 2; }
  bool has_multiple_zero() const;

  Complex q(Complex z) const;

  /// Zeros in order followed by the origin when the family has the pole.
  const std::vector<CriticalPoint>& critical_points() const { return critical_; }
  int pole_id() const { return has_pole() ? static_cast<int>(zeros_.size()) : -1; }
  LocalForm local_form(int critical_id) const;

  double distance_to_critical(Complex z) const;
  /// Distance from critical point id to the nearest other critical point.
  double separation(int critical_id) const;
  double min_separation() const;
  /// Diameter of the zero set together with the origin.
  double diameter() const { return diameter_; }
  double scale() const { return scale_; }
  /// Radius inside which a sample counts as hitting a critical point.
  double eps_crit() const { return 1e-6 * diameter_; }

 private:
  QuadDiff() = default;
  void finish();

  Family family_ = Family::SimplePole;
  int k_ = 0;
  std::vector<Complex> coeffs_;
  Polynomial numerator_;
  std::vector<Root> zeros_;
  std::vector<CriticalPoint> critical_;
  double diameter_ = 0.0;
  double scale_ = 1.0;
};

/// Piecewise-linear path; consecutive waypoints must be distinct.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Complex> waypoints);
  static Path segment(Complex a, Complex b) { return Path({a, b}); }

  const std::vector<Complex>& waypoints() const { return w_; }
  Complex front() const { return w_.front(); }
  Complex back() const { return w_.back(); }
  Path reversed() const;
  Path conjugated() const;
  /// this followed by other; other.front() must equal back().
  Path concat(const Path& other) const;

 private:
  std::vector<Complex> w_;
};

/// Square root of q closest in argument to `hint`.
Complex sqrt_near(Complex q_value, Complex hint);

/// Branch-continued square root of q at each waypoint of the path. When the path starts
/// at a critical point, `initial_branch` is used as a direction hint for the first
/// regular sample.
std::vector<Complex> sqrt_q_along(const QuadDiff& qd, const Path& path, Complex initial_branch);

struct PeriodOptions {
  double abs_tolerance = 1e-9;
  double rel_tolerance = 1e-12;  // takes over when the integral is large
  long max_evaluations = 2'000'000;
};

struct PeriodResult {
  Complex value;
  double error_estimate = 0.0;
  Complex end_branch;  // sqrt(q) at the final waypoint (0 if it is critical)
  long evaluations = 0;
};

/// Integral of sqrt(q) dz along the path. Endpoints may be critical points; interior
/// waypoints and segments must stay away from them.
PeriodResult period(const QuadDiff& qd, const Path& path, Complex initial_branch,
                    const PeriodOptions& options = {});

/// Fixed-rule integral of sqrt(q) over a short regular segment; `branch_at_a` fixes the
/// branch. Used by the tracer for per-step increments.
Complex short_segment_integral(const QuadDiff& qd, Complex a, Complex b, Complex branch_at_a,
                               Complex* branch_at_b = nullptr);

/// Integral of sqrt(q) from a regular point z (branch given) to the critical point id.
Complex integral_to_critical(const QuadDiff& qd, Complex z, Complex branch_at_z, int critical_id);

}  // namespace qd
}  // namespace strata
