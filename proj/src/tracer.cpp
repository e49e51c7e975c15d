#include <algorithm>
#include <cmath>
#include <numbers>

#include "strata/tracer.hpp"

namespace strata::tr {

using qd::QuadDiff;

namespace {

constexpr double kPi = std::numbers::pi;

double phase_of(Orientation o) { return o == Orientation::Horizontal ? 0.0 : kPi / 2.0; }

// Order of q at infinity as z^e.
int growth_exponent(const QuadDiff& qd) { return qd.has_pole() ? qd.k() - 1 : qd.k(); }

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

double angle_distance(double a, double b) {
  double d = wrap_angle(a - b);
  return std::min(d, 2.0 * kPi - d);
}

std::vector<double> launch_angles(const QuadDiff& qd, int id, Orientation o) {
  auto lf = qd.local_form(id);
  const int m = lf.order + 2;
  const double base = (2.0 * phase_of(o) - std::arg(lf.c)) / m;
  std::vector<double> out;
  for (int j = 0; j < m; ++j) out.push_back(base + 2.0 * kPi * j / m);
  return out;
}

int nearest_launch(const QuadDiff& qd, int id, Orientation o, Complex from) {
  auto angles = launch_angles(qd, id, o);
  const double a = std::arg(from - qd.critical_points()[id].z);
  int best = 0;
  for (int j = 1; j < static_cast<int>(angles.size()); ++j)
    if (angle_distance(a, angles[j]) < angle_distance(a, angles[best])) best = j;
  return best;
}

// Dormand-Prince 5(4).
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

class Tracer {
 public:
  Tracer(const QuadDiff& qd, Orientation o, const TraceConfig& cfg)
      : qd_(qd), o_(o), cfg_(cfg), rot_(std::polar(1.0, -phase_of(o))) {
    const auto& cps = qd.critical_points();
    eps_cap_ = std::min(cfg.capture_radius * qd.diameter(), 0.1 * qd.min_separation());
    if (cps.size() == 1) eps_cap_ = cfg.capture_radius * qd.diameter();
  }

  Trajectory run(int id, int dir);

 private:
  // Unit Euclidean velocity along increasing Re W, W = int e^{-i phi} sqrt(q) dz.
  Complex field(Complex z, Complex& r) const {
    r = qd::sqrt_near(qd_.q(z), r);
    Complex s = rot_ * r;
    return std::conj(s) / std::abs(s);
  }

  Complex increment(Complex a, Complex b, Complex r_a, Complex* r_b) const {
    return rot_ * qd::short_segment_integral(qd_, a, b, r_a, r_b);
  }

  const QuadDiff& qd_;
  Orientation o_;
  TraceConfig cfg_;
  Complex rot_;
  double eps_cap_ = 0.0;
};

Trajectory Tracer::run(int id, int dir) {
  const auto& cps = qd_.critical_points();
  if (id < 0 || id >= static_cast<int>(cps.size())) fail(ErrorCode::InvalidArgument, "bad critical point id");
  auto angles = launch_angles(qd_, id, o_);
  if (dir < 0 || dir >= static_cast<int>(angles.size())) fail(ErrorCode::InvalidArgument, "bad direction index");

  Trajectory t;
  t.orientation = o_;
  t.start_id = id;
  t.start_dir = dir;
  t.launch = std::polar(1.0, angles[dir]);
  const Complex c0 = cps[id].z;
  const double delta = cfg_.start_offset * qd_.separation(id);

  // Start point on the level set Im W = 0 near c0.
  Complex z = c0 + delta * t.launch;
  Complex r = std::sqrt(qd_.q(z));
  if ((rot_ * r * t.launch).real() < 0.0) r = -r;
  Complex W;
  for (int pass = 0; pass < 3; ++pass) {
    W = -rot_ * qd::integral_to_critical(qd_, z, r, id);
    z -= Complex(0.0, 1.0) * W.imag() / (rot_ * r);
    r = qd::sqrt_near(qd_.q(z), r);
  }
  W = -rot_ * qd::integral_to_critical(qd_, z, r, id);
  t.points = {c0, z};

  double R = cfg_.escape_factor * std::max(1.0, qd_.scale());
  int extensions = 0;
  bool left_start = false;
  double h = cfg_.step_cap * qd_.distance_to_critical(z);
  const double tol = cfg_.step_tolerance;

  while (true) {
    if (t.steps >= cfg_.max_steps) {
      t.termination = Termination::Budget;
      t.period = W;
      return t;
    }
    const double dist = qd_.distance_to_critical(z);
    h = std::min(h, cfg_.step_cap * dist);
    if (h < 1e-14 * std::max(1.0, std::abs(z))) fail(ErrorCode::StepFailure, "step size underflow");

    Complex rr = r;
    const Complex k1 = field(z, rr);
    const Complex k2 = field(z + h * A21 * k1, rr = r);
    const Complex k3 = field(z + h * (A31 * k1 + A32 * k2), rr = r);
    const Complex k4 = field(z + h * (A41 * k1 + A42 * k2 + A43 * k3), rr = r);
    const Complex k5 = field(z + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), rr = r);
    const Complex k6 = field(z + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), rr = r);
    Complex z_new = z + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    const Complex k7 = field(z_new, rr = r);
    const double err = std::abs(h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7));
    if (err > tol * h) {
      h *= std::max(0.2, 0.9 * std::pow(tol * h / err, 0.2));
      continue;
    }

    // Project back onto the level set of Im W.
    Complex r_new;
    Complex dW = increment(z, z_new, r, &r_new);
    for (int pass = 0; pass < 2; ++pass) {
      z_new -= Complex(0.0, 1.0) * dW.imag() / (rot_ * r_new);
      dW = increment(z, z_new, r, &r_new);
    }
    if (dW.real() <= 0.0) fail(ErrorCode::StepFailure, "trajectory reversed direction");
    t.max_phase_error = std::max(t.max_phase_error, std::abs(dW.imag()) / std::abs(dW));
    W += dW;
    z = z_new;
    r = r_new;
    ++t.steps;
    t.points.push_back(z);
    const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(tol * h / err, 0.2)) : 5.0;
    h *= std::max(1.0, grow);

    if (!left_start && std::abs(z - c0) > 2.0 * delta) left_start = true;

    if (std::abs(z) > R) {
      try {
        t.sector = principal_direction_of(qd_, std::arg(z), o_);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AmbiguousDirection || extensions >= cfg_.escape_extensions) throw;
        R *= 10.0;
        ++extensions;
        continue;
      }
      t.termination = Termination::Escape;
      t.period = W;
      return t;
    }

    for (int c = 0; c < static_cast<int>(cps.size()); ++c) {
      if (c == id && !left_start) continue;
      if (std::abs(z - cps[c].z) >= eps_cap_) continue;
      const Complex tail = rot_ * qd::integral_to_critical(qd_, z, r, c);
      const Complex total = W + tail;
      if (tail.real() > 0.0 && std::abs(total.imag()) <= cfg_.capture_tolerance * std::abs(total)) {
        t.end_id = c;
        t.end_dir = nearest_launch(qd_, c, o_, z);
        t.termination = Termination::HitsCritical;
        t.period = total;
        t.points.push_back(cps[c].z);
        return t;
      }
    }
  }
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Escape: return "escape";
    case Termination::HitsCritical: return "hits_critical";
    case Termination::Budget: return "budget";
  }
  return "?";
}

std::vector<Complex> initial_directions(const QuadDiff& qd, int critical_id, Orientation o) {
  std::vector<Complex> out;
  for (double a : launch_angles(qd, critical_id, o)) out.push_back(std::polar(1.0, a));
  return out;
}

std::vector<double> principal_angles(const QuadDiff& qd, Orientation o) {
  const int m = growth_exponent(qd) + 2;
  std::vector<double> out;
  for (int j = 0; j < m; ++j) out.push_back((2.0 * phase_of(o) + 2.0 * kPi * j) / m);
  return out;
}

int principal_direction_of(const QuadDiff& qd, double angle, Orientation o) {
  const int m = growth_exponent(qd) + 2;
  const double width = 2.0 * kPi / m;
  // position relative to direction 0, in units of sectors
  const double rel = wrap_angle(angle - 2.0 * phase_of(o) / m) / width;
  const double frac = rel - std::floor(rel);
  if (std::abs(frac - 0.5) * width < 1e-3) fail(ErrorCode::AmbiguousDirection, "angle on a sector boundary");
  return static_cast<int>(std::lround(rel)) % m;
}

Trajectory trace(const QuadDiff& qd, int critical_id, int direction_index, Orientation o,
                 const TraceConfig& config) {
  return Tracer(qd, o, config).run(critical_id, direction_index);
}

}  // namespace strata::tr
