#pragma once

// Independent period oracle for tests: evaluates q from the raw coefficients and
// integrates sqrt(q) over a straight segment between two critical points with the
// substitution s = sin^2(theta), which removes the square-root endpoint behavior of
// simple zeros and the simple pole. Composite Simpson rule.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;

// q(z) = (z^k + sum a_m z^m) / z, or the monic polynomial when pole == false.
inline C q_value(const std::vector<C>& a, bool pole, C z) {
  C p = 1.0;
  for (std::size_t m = a.size(); m-- > 0;) p = p * z + a[m];
  return pole ? p / z : p;
}

inline C sqrt_near(C w, C hint) {
  C r = std::sqrt(w);
  return std::abs(r - hint) <= std::abs(r + hint) ? r : -r;
}

// Integral of sqrt(q) from `from` to `to` along the straight segment. Both ends may be
// simple zeros or the pole; the branch is fixed by continuity from the first node.
inline C segment_period(const std::vector<C>& a, bool pole, C from, C to, int panels = 4000) {
  const double pi = std::acos(-1.0);
  const C d = to - from;
  const double h = (pi / 2) / panels;
  auto f = [&](double th, C& branch, bool first) {
    const double s = std::sin(th) * std::sin(th);
    const double ds = 2 * std::sin(th) * std::cos(th);
    const C w = q_value(a, pole, from + s * d);
    branch = first ? std::sqrt(w) : sqrt_near(w, branch);
    return branch * d * ds;
  };
  C branch = 0.0, acc = 0.0;
  // start just inside theta = 0 (the integrand is finite there after substitution)
  bool first = true;
  for (int i = 0; i < panels; ++i) {
    const double t0 = i * h, t1 = t0 + h;
    const double x[3] = {i == 0 ? 1e-14 : t0, 0.5 * (t0 + t1), i == panels - 1 ? t1 - 1e-14 : t1};
    C v[3];
    for (int m = 0; m < 3; ++m) {
      v[m] = f(x[m], branch, first);
      first = false;
    }
    acc += (h / 6) * (v[0] + 4.0 * v[1] + v[2]);
  }
  return acc;
}

inline std::vector<C> zeros_of(const std::vector<C>& a) {
  // Durand-Kerner on the monic numerator
  const std::size_t n = a.size();
  std::vector<C> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(C(0.4, 0.9), static_cast<double>(i)) * 1.3;
  auto p = [&](C x) {
    C r = 1.0;
    for (std::size_t m = n; m-- > 0;) r = r * x + a[m];
    return r;
  };
  for (int it = 0; it < 2000; ++it) {
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      C den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const C step = p(z[i]) / den;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-15) break;
  }
  return z;
}

}  // namespace oracle

namespace oracle {

inline double component(C p, bool horizontal) { return horizontal ? p.imag() : p.real(); }

// Smallest |Im| (|Re| for vertical) over the straight-path classes joining the zeros
// nearest to za and zb: through either side of the pole, or the direct segment.
inline double wall_residual(const std::vector<C>& a, bool pole, C za, C zb, bool horizontal) {
  const auto zs = zeros_of(a);
  auto nearest = [&](C z) {
    C best = zs[0];
    for (const C& w : zs)
      if (std::abs(w - z) < std::abs(best - z)) best = w;
    return best;
  };
  const C ra = nearest(za), rb = nearest(zb);
  if (!pole) return std::abs(component(segment_period(a, false, ra, rb), horizontal));
  const C ia = segment_period(a, true, 0.0, ra), ib = segment_period(a, true, 0.0, rb);
  return std::min(std::abs(component(ia + ib, horizontal)), std::abs(component(ia - ib, horizontal)));
}

// Pole-to-zero period component for the zero nearest to za.
inline double pole_wall_residual(const std::vector<C>& a, C za, bool horizontal) {
  const auto zs = zeros_of(a);
  C best = zs[0];
  for (const C& w : zs)
    if (std::abs(w - za) < std::abs(best - za)) best = w;
  return std::abs(component(segment_period(a, true, 0.0, best), horizontal));
}

}  // namespace oracle
