#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "strata/qdcore.hpp"

namespace strata::qd {

// ---------------------------------------------------------------------------
// QuadDiff

QuadDiff QuadDiff::make(int k, std::vector<Complex> coeffs) {
  if (k < 2) fail(ErrorCode::DegenerateInput, "k must be >= 2");
  if (static_cast<int>(coeffs.size()) != k)
    fail(ErrorCode::DegenerateInput, "expected " + std::to_string(k) + " coefficients");
  if (coeffs[0] == Complex(0.0, 0.0))
    fail(ErrorCode::DegenerateInput, "a_0 = 0 cancels the simple pole at the origin");
  QuadDiff qd;
  qd.family_ = Family::SimplePole;
  qd.k_ = k;
  qd.coeffs_ = std::move(coeffs);
  qd.finish();
  return qd;
}

QuadDiff QuadDiff::make_polynomial(std::vector<Complex> coeffs) {
  if (coeffs.empty()) fail(ErrorCode::DegenerateInput, "polynomial differential needs degree >= 1");
  QuadDiff qd;
  qd.family_ = Family::Polynomial;
  qd.k_ = static_cast<int>(coeffs.size());
  qd.coeffs_ = std::move(coeffs);
  qd.finish();
  return qd;
}

void QuadDiff::finish() {
  for (Complex c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      fail(ErrorCode::DegenerateInput, "non-finite coefficient");
  numerator_ = Polynomial::monic(coeffs_);
  zeros_ = roots(numerator_);
  critical_.clear();
  for (const auto& r : zeros_) critical_.push_back({r.location, r.multiplicity});
  if (has_pole()) critical_.push_back({0.0, -1});
  diameter_ = 0.0;
  std::vector<Complex> pts;
  for (const auto& r : zeros_) pts.push_back(r.location);
  pts.push_back(0.0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) diameter_ = std::max(diameter_, std::abs(pts[i] - pts[j]));
  if (diameter_ == 0.0) diameter_ = 1.0;  // single zero at the origin (polynomial family)
  scale_ = 1.0;
  for (const auto& r : zeros_) scale_ = std::max(scale_, std::abs(r.location));
}

bool QuadDiff::has_multiple_zero() const {
  return std::any_of(zeros_.begin(), zeros_.end(), [](const Root& r) { return r.multiplicity > 1; });
}

Complex QuadDiff::q(Complex z) const {
  Complex p = numerator_(z);
  return has_pole() ? p / z : p;
}

LocalForm QuadDiff::local_form(int id) const {
  if (id < 0 || id >= static_cast<int>(critical_.size())) fail(ErrorCode::InvalidArgument, "bad critical point id");
  const auto& cp = critical_[id];
  if (cp.is_pole()) return {coeffs_[0], -1};
  auto t = numerator_.taylor_at(cp.z);
  Complex c = t[cp.order];
  if (has_pole()) c /= cp.z;
  return {c, cp.order};
}

double QuadDiff::distance_to_critical(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : critical_) d = std::min(d, std::abs(z - c.z));
  return d;
}

double QuadDiff::separation(int id) const {
  double d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(critical_.size()); ++j)
    if (j != id) d = std::min(d, std::abs(critical_[j].z - critical_[id].z));
  if (!std::isfinite(d)) d = diameter_;
  return d;
}

double QuadDiff::min_separation() const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(critical_.size()); ++i) d = std::min(d, separation(i));
  return d;
}

// ---------------------------------------------------------------------------
// Path

Path::Path(std::vector<Complex> waypoints) : w_(std::move(waypoints)) {
  if (w_.empty()) fail(ErrorCode::InvalidArgument, "path needs at least one waypoint");
  for (std::size_t i = 1; i < w_.size(); ++i)
    if (w_[i] == w_[i - 1]) fail(ErrorCode::InvalidArgument, "consecutive waypoints coincide");
}

Path Path::reversed() const {
  Path p;
  p.w_.assign(w_.rbegin(), w_.rend());
  return p;
}

Path Path::conjugated() const {
  Path p;
  for (Complex z : w_) p.w_.push_back(std::conj(z));
  return p;
}

Path Path::concat(const Path& other) const {
  if (other.w_.front() != w_.back()) fail(ErrorCode::InvalidArgument, "concat: paths do not meet");
  Path p = *this;
  p.w_.insert(p.w_.end(), other.w_.begin() + 1, other.w_.end());
  return p;
}

// ---------------------------------------------------------------------------
// Branch tracking and quadrature

Complex sqrt_near(Complex q_value, Complex hint) {
  Complex s = std::sqrt(q_value);
  if (s.real() * hint.real() + s.imag() * hint.imag() < 0.0) s = -s;
  return s;
}

namespace {

struct GaussRule {
  std::vector<double> x, w;  // on [0, 1]
};

GaussRule make_gauss(int n) {
  GaussRule g;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    g.x.push_back(0.5 * (1.0 - x));
    g.w.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return g;
}

const GaussRule& gauss10() {
  static const GaussRule g = make_gauss(10);
  return g;
}
const GaussRule& gauss20() {
  static const GaussRule g = make_gauss(20);
  return g;
}

int critical_at(const QuadDiff& qd, Complex z) {
  const auto& cps = qd.critical_points();
  for (int i = 0; i < static_cast<int>(cps.size()); ++i)
    if (std::abs(z - cps[i].z) <= qd.eps_crit()) return i;
  return -1;
}

// Integrand sampler: x(t) for t in [0,1], integrand value, branch continuation from a
// reference value.
struct PieceResult {
  Complex value;
  double error = 0.0;
  Complex branch_inner;  // branch at the regular end nearest the piece start
  Complex branch_outer;  // branch at the regular end of the piece (t = 1)
};

class Integrator {
 public:
  Integrator(const QuadDiff& qd, const PeriodOptions& opt) : qd_(qd), opt_(opt) {}

  long evaluations() const { return evals_; }

  Complex sqrt_q(Complex z, Complex hint) {
    if (++evals_ > opt_.max_evaluations) fail(ErrorCode::QuadratureFailure, "evaluation budget exhausted");
    return sqrt_near(qd_.q(z), hint);
  }

  // Regular straight piece a -> b with branch fixed at a.
  PieceResult regular(Complex a, Complex b, Complex s_a, int depth = 0) {
    const Complex d = b - a;
    auto rule = [&](const GaussRule& g) {
      Complex acc = 0.0, last = s_a;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        Complex s = sqrt_q(a + g.x[i] * d, s_a);
        acc += g.w[i] * s;
        last = s;
      }
      (void)last;
      return acc * d;
    };
    Complex i20 = rule(gauss20());
    Complex i10 = rule(gauss10());
    double err = std::abs(i20 - i10);
    if (err > std::max(1e-3 * opt_.abs_tolerance, opt_.rel_tolerance * std::abs(i20)) && depth < 30) {
      Complex mid = a + 0.5 * d;
      PieceResult left = regular(a, mid, s_a, depth + 1);
      PieceResult right = regular(mid, b, left.branch_outer, depth + 1);
      return {left.value + right.value, left.error + right.error, s_a, right.branch_outer};
    }
    Complex s_b = sqrt_q(b, s_a);
    return {i20, err, s_a, s_b};
  }

  // Piece from the critical point c to x = c + delta via z = c + u^2 delta. The branch is
  // anchored at x (u = 1). Returns the integral in the direction c -> x.
  PieceResult singular(Complex c, Complex x, Complex s_x, double u0 = 0.0, double u1 = 1.0, int depth = 0) {
    const Complex delta = x - c;
    auto rule = [&](const GaussRule& g) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        double u = u0 + (u1 - u0) * g.x[i];
        Complex s = sqrt_q(c + u * u * delta, s_x);
        acc += g.w[i] * s * (2.0 * u);
      }
      return acc * delta * (u1 - u0);
    };
    Complex i20 = rule(gauss20());
    Complex i10 = rule(gauss10());
    double err = std::abs(i20 - i10);
    if (err > std::max(1e-3 * opt_.abs_tolerance, opt_.rel_tolerance * std::abs(i20)) && depth < 30) {
      double um = 0.5 * (u0 + u1);
      PieceResult lo = singular(c, x, s_x, u0, um, depth + 1);
      PieceResult hi = singular(c, x, s_x, um, u1, depth + 1);
      return {lo.value + hi.value, lo.error + hi.error, s_x, s_x};
    }
    return {i20, err, s_x, s_x};
  }

 private:
  const QuadDiff& qd_;
  PeriodOptions opt_;
  long evals_ = 0;
};

struct SegmentWalk {
  Complex integral;     // in canonical direction, with the canonical walk's own sign
  double error = 0.0;
  Complex first_branch;  // branch at the regular sample nearest the canonical start
  Complex last_branch;   // branch at the regular sample nearest the canonical end
  bool start_critical = false, end_critical = false;
};

// Walk the segment a -> b (already canonical) with an arbitrary initial sign.
SegmentWalk walk_segment(const QuadDiff& qd, Integrator& in, Complex a, Complex b, Complex hint) {
  SegmentWalk w;
  const int ca = critical_at(qd, a), cb = critical_at(qd, b);
  w.start_critical = ca >= 0;
  w.end_critical = cb >= 0;
  const double len = std::abs(b - a);
  const Complex dir = (b - a) / len;
  Complex x0 = a, x1 = b;
  double s0 = 0.0, s1 = len;
  if (ca >= 0) {
    x0 = qd.critical_points()[ca].z;
    s0 = std::min(0.5 * len, 0.25 * qd.separation(ca));
  }
  if (cb >= 0) {
    x1 = qd.critical_points()[cb].z;
    s1 = len - std::min(0.5 * len, 0.25 * qd.separation(cb));
  }
  std::vector<PieceResult> pieces;
  Complex branch;
  Complex pos = a + s0 * dir;
  if (qd.distance_to_critical(pos) <= qd.eps_crit())
    fail(ErrorCode::PathThroughSingularity, "segment starts on a critical point");
  branch = in.sqrt_q(pos, hint);
  w.first_branch = branch;
  if (ca >= 0) pieces.push_back(in.singular(x0, pos, branch));
  double t = s0;
  while (t < s1) {
    double dist = qd.distance_to_critical(pos);
    if (dist <= qd.eps_crit()) fail(ErrorCode::PathThroughSingularity, "path passes through a critical point");
    double step = std::min(s1 - t, 0.25 * dist);
    Complex next = (t + step >= s1) ? a + s1 * dir : pos + step * dir;
    PieceResult pr = in.regular(pos, next, branch);
    pieces.push_back(pr);
    branch = pr.branch_outer;
    pos = next;
    t += step;
    if (t + 1e-15 * len >= s1) break;
  }
  w.last_branch = branch;
  if (cb >= 0) {
    PieceResult pr = in.singular(x1, pos, branch);
    pr.value = -pr.value;
    pieces.push_back(pr);
  }
  w.integral = 0.0;
  for (const auto& p : pieces) {
    w.integral += p.value;
    w.error += p.error;
  }
  return w;
}

bool canonical_order(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Complex sum_by_magnitude(std::vector<Complex> v) {
  std::vector<double> re, im;
  for (Complex z : v) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  auto by_abs = [](double x, double y) { return std::abs(x) < std::abs(y); };
  std::sort(re.begin(), re.end(), by_abs);
  std::sort(im.begin(), im.end(), by_abs);
  double r = 0.0, i = 0.0;
  for (double x : re) r += x;
  for (double x : im) i += x;
  return {r, i};
}

struct PathWalk {
  PeriodResult result;
  std::vector<Complex> waypoint_branches;
};

PathWalk walk_path(const QuadDiff& qd, const Path& path, Complex initial_branch, const PeriodOptions& opt) {
  PathWalk out;
  Integrator in(qd, opt);
  const auto& w = path.waypoints();
  Complex incoming = initial_branch;
  bool incoming_is_hint = critical_at(qd, w.front()) >= 0;
  if (!incoming_is_hint) {
    Complex q0 = qd.q(w.front());
    Complex sq = initial_branch * initial_branch;
    if (std::abs(sq - q0) > 1e-9 * std::max(std::abs(q0), 1e-300))
      fail(ErrorCode::InvalidArgument, "initial branch does not square to q at the first waypoint");
  }
  out.waypoint_branches.push_back(incoming_is_hint ? Complex(0.0) : initial_branch);
  std::vector<Complex> parts;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    Complex a = w[i], b = w[i + 1];
    if (i > 0 && critical_at(qd, a) >= 0)
      fail(ErrorCode::PathThroughSingularity, "interior waypoint on a critical point");
    bool forward = canonical_order(a, b);
    Complex ca = forward ? a : b, cb = forward ? b : a;
    SegmentWalk sw = walk_segment(qd, in, ca, cb, forward ? incoming : Complex(1.0));
    Complex near_a = forward ? sw.first_branch : sw.last_branch;
    Complex near_b = forward ? sw.last_branch : sw.first_branch;
    double sign = (near_a.real() * incoming.real() + near_a.imag() * incoming.imag()) >= 0.0 ? 1.0 : -1.0;
    // A critical start with a hint is aligned above; the same rule applies.
    Complex value = forward ? sign * sw.integral : -sign * sw.integral;
    parts.push_back(value);
    error += sw.error;
    bool b_critical = forward ? sw.end_critical : sw.start_critical;
    incoming = b_critical ? Complex(0.0) : sign * near_b;
    out.waypoint_branches.push_back(incoming);
  }
  double magnitude = 0.0;
  for (Complex p : parts) magnitude += std::abs(p);
  if (error > std::max(opt.abs_tolerance, opt.rel_tolerance * magnitude))
    fail(ErrorCode::QuadratureFailure, "error target not met");
  out.result.value = sum_by_magnitude(parts);
  out.result.error_estimate = error;
  out.result.end_branch = incoming;
  out.result.evaluations = in.evaluations();
  return out;
}

}  // namespace

std::vector<Complex> sqrt_q_along(const QuadDiff& qd, const Path& path, Complex initial_branch) {
  for (Complex z : path.waypoints())
    if (qd.distance_to_critical(z) <= qd.eps_crit())
      fail(ErrorCode::PathThroughSingularity, "waypoint on a critical point");
  if (path.waypoints().size() == 1) return {initial_branch};
  return walk_path(qd, path, initial_branch, {}).waypoint_branches;
}

PeriodResult period(const QuadDiff& qd, const Path& path, Complex initial_branch, const PeriodOptions& options) {
  if (path.waypoints().size() == 1) return {0.0, 0.0, initial_branch, 0};
  return walk_path(qd, path, initial_branch, options).result;
}

Complex short_segment_integral(const QuadDiff& qd, Complex a, Complex b, Complex branch_at_a, Complex* branch_at_b) {
  const auto& g = gauss10();
  const Complex d = b - a;
  Complex acc = 0.0, last = branch_at_a;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    last = sqrt_near(qd.q(a + g.x[i] * d), last);
    acc += g.w[i] * last;
  }
  if (branch_at_b) *branch_at_b = sqrt_near(qd.q(b), last);
  return acc * d;
}

Complex integral_to_critical(const QuadDiff& qd, Complex z, Complex branch_at_z, int critical_id) {
  Complex c = qd.critical_points().at(critical_id).z;
  const double sep = qd.separation(critical_id);
  PeriodOptions opt;
  Integrator in(qd, opt);
  if (std::abs(z - c) <= 0.25 * sep) {
    PieceResult pr = in.singular(c, z, branch_at_z);
    return -pr.value;
  }
  return period(qd, Path({z, c}), branch_at_z, opt).value;
}

}  // namespace strata::qd
