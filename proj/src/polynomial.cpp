#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "strata/qdcore.hpp"

namespace strata::qd {

Polynomial Polynomial::monic(std::span<const Complex> lower_coeffs) {
  Polynomial p;
  p.c_.assign(lower_coeffs.begin(), lower_coeffs.end());
  p.c_.push_back(1.0);
  return p;
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  Polynomial p;
  p.c_ = {1.0};
  for (Complex r : roots) {
    std::vector<Complex> next(p.c_.size() + 1, 0.0);
    for (std::size_t j = 0; j < p.c_.size(); ++j) {
      next[j + 1] += p.c_[j];
      next[j] -= r * p.c_[j];
    }
    p.c_ = std::move(next);
  }
  return p;
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

void Polynomial::eval_with_derivative(Complex z, Complex& p, Complex& dp) const {
  p = 0.0;
  dp = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
}

std::vector<Complex> Polynomial::taylor_at(Complex z0) const {
  // Repeated synthetic division by (z - z0).
  std::vector<Complex> work = c_;
  std::vector<Complex> out;
  out.reserve(work.size());
  for (std::size_t n = work.size(); n > 0; --n) {
    for (std::size_t j = n - 1; j-- > 0;) work[j] += z0 * work[j + 1];
    out.push_back(work[0]);
    work.erase(work.begin());
  }
  return out;
}

namespace {

double backward_scale(const Polynomial& p, Complex z) {
  double r = std::abs(z), acc = 0.0;
  for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it)
    acc = acc * r + std::abs(*it);
  return acc;
}

bool aberth(const Polynomial& p, std::vector<Complex>& z, int max_iterations) {
  const int n = p.degree();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < max_iterations; ++iter) {
    double max_rel = 0.0;
    bool all_small_residual = true;
    for (int i = 0; i < n; ++i) {
      Complex pv, dpv;
      p.eval_with_derivative(z[i], pv, dpv);
      const double scale = backward_scale(p, z[i]);
      if (std::abs(pv) <= 4.0 * eps * scale) continue;
      all_small_residual = false;
      Complex ratio = pv / dpv;
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      Complex corr = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) return false;
      z[i] -= corr;
      max_rel = std::max(max_rel, std::abs(corr) / std::max(1.0, std::abs(z[i])));
    }
    if (all_small_residual || max_rel < 1e-15) return true;
  }
  return false;
}

}  // namespace

std::vector<Root> roots(const Polynomial& p, const RootOptions& options) {
  const int n = p.degree();
  if (n < 1) fail(ErrorCode::InvalidArgument, "roots: degree must be >= 1");
  const auto& c = p.coefficients();
  if (n == 1) return {Root{-c[0], 1}};

  // Initial radius from the Fujiwara bound.
  double radius = 0.0;
  for (int j = 1; j <= n; ++j) radius = std::max(radius, std::pow(std::abs(c[n - j]), 1.0 / j));
  radius = std::max(radius, 1e-3);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Complex> z(n);
  bool ok = false;
  for (int attempt = 0; attempt <= options.max_restarts && !ok; ++attempt) {
    const double offset = attempt == 0 ? 0.4 : 2.0 * std::numbers::pi * unif(rng);
    const double r = attempt == 0 ? radius : radius * (0.5 + unif(rng));
    for (int j = 0; j < n; ++j) z[j] = std::polar(r, offset + 2.0 * std::numbers::pi * j / n);
    if (!aberth(p, z, options.max_iterations)) continue;
    ok = true;
    for (Complex zi : z)
      if (std::abs(p(zi)) > 1e-10 * std::max(1.0, std::pow(std::abs(zi), n))) ok = false;
  }
  if (!ok) fail(ErrorCode::RootFindingFailure, "Aberth iteration did not converge");

  // Single-linkage clustering of coincident approximations. Aberth only resolves an
  // m-fold root to about eps^(1/m), so pairs a little farther apart than the
  // tolerance are merged too when the derivative test confirms a multiple root.
  auto taylor_small = [&](Complex c, int m) {
    auto t = p.taylor_at(c);
    double scale = backward_scale(p, c);
    for (int j = 0; j < m; ++j)
      if (std::abs(t[j]) > 1e-7 * scale) return false;
    return true;
  };
  std::vector<int> label(n, -1);
  int clusters = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const double radius_factor = pass == 0 ? options.cluster_tolerance : 1e3 * options.cluster_tolerance;
    std::vector<int> next(n, -1);
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (next[i] >= 0) continue;
      next[i] = count;
      std::vector<int> stack{i}, members{i};
      while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < n; ++b) {
          if (next[b] >= 0) continue;
          bool same = pass == 1 && label[a] == label[b];
          double tol = radius_factor * std::max(1.0, std::abs(z[a]));
          if (same || std::abs(z[a] - z[b]) <= tol) {
            next[b] = count;
            stack.push_back(b);
            members.push_back(b);
          }
        }
      }
      if (pass == 1 && members.size() > 1) {
        // keep the loose merge only if the centroid behaves like an m-fold root
        Complex c = 0.0;
        for (int m : members) c += z[m];
        c /= static_cast<double>(members.size());
        std::vector<int> prior;
        for (int m : members) prior.push_back(label[m]);
        std::sort(prior.begin(), prior.end());
        prior.erase(std::unique(prior.begin(), prior.end()), prior.end());
        if (prior.size() > 1 && !taylor_small(c, static_cast<int>(members.size()))) {
          for (int m : members) next[m] = -2 - label[m];
        }
      }
      ++count;
    }
    if (pass == 1) {
      // relabel: rejected loose clusters fall back to their first-pass labels
      std::map<int, int> remap;
      for (int i = 0; i < n; ++i)
        if (!remap.count(next[i])) remap.emplace(next[i], static_cast<int>(remap.size()));
      for (int i = 0; i < n; ++i) next[i] = remap[next[i]];
      count = static_cast<int>(remap.size());
    }
    label = next;
    clusters = count;
  }
  std::vector<Root> out(clusters, Root{0.0, 0});
  for (int i = 0; i < n; ++i) {
    out[label[i]].location += z[i];
    out[label[i]].multiplicity += 1;
  }
  for (auto& r : out) r.location /= static_cast<double>(r.multiplicity);
  for (const auto& r : out)
    if (std::abs(p(r.location)) > 1e-10 * std::max(1.0, std::pow(std::abs(r.location), n)))
      fail(ErrorCode::RootFindingFailure, "clustered root fails the residual bound");
  return out;
}

std::vector<Root> roots(std::span<const Complex> lower_coeffs, const RootOptions& options) {
  return roots(Polynomial::monic(lower_coeffs), options);
}

}  // namespace strata::qd
