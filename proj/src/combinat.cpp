#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "strata/combinat.hpp"

namespace strata::cb {

namespace {

constexpr double kCoplanarTol = 1e-9;
constexpr double kWeightEps = 1e-10;

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

std::vector<Point> vertices(int n) {
  std::vector<Point> v;
  for (int i = 0; i < n; ++i) v.push_back(polygon_vertex(n, i));
  return v;
}

void check_size(int n_plus_1, std::size_t values) {
  if (n_plus_1 < 3) fail(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  if (values != static_cast<std::size_t>(n_plus_1)) fail(ErrorCode::InvalidArgument, "weight size mismatch");
}

// Affine interpolant through three lifted vertices.
Affine plane_through(Point a, Point b, Point c, double fa, double fb, double fc) {
  const double det = cross(a, b, c);
  Affine L;
  L.c1 = ((fb - fa) * (c.y - a.y) - (fc - fa) * (b.y - a.y)) / det;
  L.c2 = ((fc - fa) * (b.x - a.x) - (fb - fa) * (c.x - a.x)) / det;
  L.c0 = fa - L.c1 * a.x - L.c2 * a.y;
  return L;
}

struct HullFace {
  Affine L;
  std::vector<int> vertices;  // sorted
};

std::vector<HullFace> upper_hull(const BalancedWeight& f) {
  const int n = f.n_plus_1;
  check_size(n, f.values.size());
  const auto v = vertices(n);
  std::set<std::vector<int>> seen;
  std::vector<HullFace> faces;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        Affine L = plane_through(v[i], v[j], v[l], f.values[i], f.values[j], f.values[l]);
        std::vector<int> touch;
        bool ok = true;
        for (int m = 0; m < n && ok; ++m) {
          const double gap = L(v[m]) - f.values[m];
          if (gap < -kCoplanarTol) ok = false;
          else if (gap <= kCoplanarTol) touch.push_back(m);
        }
        if (!ok || !seen.insert(touch).second) continue;
        faces.push_back({L, touch});
      }
  return faces;
}

}  // namespace

Point polygon_vertex(int n_plus_1, int i) {
  const double a = 2.0 * std::numbers::pi * i / n_plus_1;
  return {std::cos(a), std::sin(a)};
}

bool is_balanced(const std::vector<double>& values, double tol) {
  const int n = static_cast<int>(values.size());
  if (n < 3) return false;
  double s = 0.0, mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    Point p = polygon_vertex(n, i);
    s += values[i];
    mx += values[i] * p.x;
    my += values[i] * p.y;
  }
  return std::abs(s) <= tol && std::abs(mx) <= tol && std::abs(my) <= tol;
}

BalancedWeight project_balanced(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 3) fail(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  // 1, x, y are mutually orthogonal on a regular polygon: |1|^2 = n, |x|^2 = |y|^2 = n/2.
  double s = 0.0, mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    Point p = polygon_vertex(n, i);
    s += values[i];
    mx += values[i] * p.x;
    my += values[i] * p.y;
  }
  for (int i = 0; i < n; ++i) {
    Point p = polygon_vertex(n, i);
    values[i] -= s / n + mx * p.x * 2.0 / n + my * p.y * 2.0 / n;
  }
  return {n, std::move(values)};
}

BalancedWeight random_balanced_weight(int n_plus_1, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n_plus_1);
  for (double& x : v) x = g(rng);
  return project_balanced(std::move(v));
}

BalancedWeight random_degenerate_weight(int n_plus_1, std::mt19937_64& rng) {
  std::vector<int> idx(n_plus_1);
  for (int i = 0; i < n_plus_1; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> v(n_plus_1);
  for (int i = 0; i < n_plus_1; ++i) v[idx[i]] = i < 4 ? 0.0 : -u(rng);
  return project_balanced(std::move(v));
}

DegeneracyWitness is_degenerate(const BalancedWeight& f) {
  DegeneracyWitness w;
  for (const auto& face : upper_hull(f))
    if (face.vertices.size() >= 4) {
      w.degenerate = true;
      w.L = face.L;
      w.touching = face.vertices;
      break;
    }
  return w;
}

FanFace upper_hull_subdivision(const BalancedWeight& f) {
  const int n = f.n_plus_1;
  std::set<Diagonal> ds;
  for (const auto& face : upper_hull(f)) {
    const auto& vs = face.vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      int a = vs[i], c = vs[(i + 1) % vs.size()];
      if (vs.size() >= 3 && !is_side(n, a, c)) ds.insert(normalize(a, c));
    }
  }
  FanFace ff;
  ff.n_plus_1 = n;
  ff.diagonals.assign(ds.begin(), ds.end());
  ff.codim = (n - 3) - static_cast<int>(ff.diagonals.size());
  return ff;
}

FanFace fan_face(const BalancedWeight& f) { return upper_hull_subdivision(f); }

WeightedChordDiagram weight_to_diagram(const BalancedWeight& f, Point p) {
  const int n = f.n_plus_1;
  check_size(n, f.values.size());
  const auto v = vertices(n);
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c) {
      const double len = std::hypot(v[c].x - v[a].x, v[c].y - v[a].y);
      if (std::abs(cross(v[a], v[c], p)) / len <= 1e-9)
        fail(ErrorCode::GeneralPositionViolated, "reference point lies on a line through two vertices");
    }

  WeightedChordDiagram d;
  d.n_plus_1 = n;
  for (int a = 0; a < n; ++a)
    for (int c = a + 2; c < n; ++c) {
      if (is_side(n, a, c)) continue;
      // L = L0 + t M, M vanishing on the line ac.
      const double dx = v[c].x - v[a].x, dy = v[c].y - v[a].y, len2 = dx * dx + dy * dy;
      auto L0 = [&](Point q) {
        return f.values[a] + (f.values[c] - f.values[a]) * ((q.x - v[a].x) * dx + (q.y - v[a].y) * dy) / len2;
      };
      auto M = [&](Point q) { return cross(v[a], v[c], q); };
      double t_lo = -INFINITY, t_hi = INFINITY;
      for (int m = 0; m < n; ++m) {
        if (m == a || m == c) continue;
        const double mm = M(v[m]);
        const double t = (f.values[m] - L0(v[m])) / mm;
        if (mm > 0.0) t_lo = std::max(t_lo, t);
        else t_hi = std::min(t_hi, t);
      }
      const double w = (t_hi - t_lo) * std::abs(M(p));
      if (w > kWeightEps) d.chords.push_back({a, c, w});
    }
  std::vector<Diagonal> ds;
  for (const auto& ch : d.chords) ds.push_back({ch.a, ch.c});
  if (!is_noncrossing(ds)) fail(ErrorCode::InconsistentDiagram, "majorant LP produced crossing chords");
  return d;
}

BalancedWeight diagram_to_weight(const WeightedChordDiagram& d, Point p) {
  const int n = d.n_plus_1;
  if (n < 4) fail(ErrorCode::InvalidArgument, "diagram needs at least 4 vertices");
  std::vector<Diagonal> given;
  for (const auto& ch : d.chords) {
    if (ch.a < 0 || ch.c < 0 || ch.a >= n || ch.c >= n || ch.a == ch.c || is_side(n, ch.a, ch.c))
      fail(ErrorCode::InconsistentDiagram, "chord is not a diagonal");
    if (!(ch.weight > 0.0)) fail(ErrorCode::InconsistentDiagram, "chord weight must be positive");
    given.push_back(normalize(ch.a, ch.c));
  }
  {
    auto sorted = given;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCode::InconsistentDiagram, "repeated chord");
  }
  if (!is_noncrossing(given)) fail(ErrorCode::InconsistentDiagram, "chords cross");
  const auto T = lexicographic_completion(n, given);
  const auto v = vertices(n);

  // Edge set of T including sides, to find the apex on each side of a diagonal.
  std::set<Diagonal> edges(T.begin(), T.end());
  for (int i = 0; i < n; ++i) edges.insert(normalize(i, (i + 1) % n));
  auto has = [&](int a, int b) { return edges.count(normalize(a, b)) > 0; };

  // Row per diagonal: weight = (t_hi - t_lo)|M(p)|, linear in f.
  std::vector<std::vector<double>> A;
  std::vector<double> rhs;
  for (const auto& dg : T) {
    const int a = dg.first, c = dg.second;
    int b_pos = -1, b_neg = -1;
    for (int b = 0; b < n; ++b) {
      if (b == a || b == c || !has(a, b) || !has(b, c)) continue;
      const double m = cross(v[a], v[c], v[b]);
      // nearest apex on each side (the triangle of T)
      if (m > 0.0 && (b_pos < 0 || m < cross(v[a], v[c], v[b_pos]))) b_pos = b;
      if (m < 0.0 && (b_neg < 0 || m > cross(v[a], v[c], v[b_neg]))) b_neg = b;
    }
    if (b_pos < 0 || b_neg < 0) fail(ErrorCode::InconsistentDiagram, "completion is not a triangulation");
    const double dx = v[c].x - v[a].x, dy = v[c].y - v[a].y, len2 = dx * dx + dy * dy;
    // t(b) = (f_b - L0(b)) / M(b), L0(b) = f_a + (f_c - f_a) s_b
    std::vector<double> row(n, 0.0);
    auto add_t = [&](int b, double sign) {
      const double s = ((v[b].x - v[a].x) * dx + (v[b].y - v[a].y) * dy) / len2;
      const double m = cross(v[a], v[c], v[b]);
      row[b] += sign / m;
      row[a] += sign * (-(1.0 - s)) / m;
      row[c] += sign * (-s) / m;
    };
    const double mp = std::abs(cross(v[a], v[c], p));
    add_t(b_neg, mp);
    add_t(b_pos, -mp);
    A.push_back(row);
    double w = 0.0;
    for (const auto& ch : d.chords)
      if (normalize(ch.a, ch.c) == dg) w = ch.weight;
    rhs.push_back(w);
  }
  {
    std::vector<double> r1(n, 1.0), rx(n), ry(n);
    for (int i = 0; i < n; ++i) {
      rx[i] = v[i].x;
      ry[i] = v[i].y;
    }
    A.push_back(r1);
    A.push_back(rx);
    A.push_back(ry);
    rhs.insert(rhs.end(), {0.0, 0.0, 0.0});
  }

  // Gaussian elimination with partial pivoting on the square system.
  const int N = n;
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12) fail(ErrorCode::InconsistentDiagram, "rank-deficient system");
    std::swap(A[piv], A[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r < N; ++r) {
      const double fct = A[r][col] / A[col][col];
      if (fct == 0.0) continue;
      for (int k = col; k < N; ++k) A[r][k] -= fct * A[col][k];
      rhs[r] -= fct * rhs[col];
    }
  }
  std::vector<double> f(N);
  for (int r = N - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int k = r + 1; k < N; ++k) acc -= A[r][k] * f[k];
    f[r] = acc / A[r][r];
  }
  BalancedWeight out{n, f};

  // The solution must reproduce the diagram under the forward map.
  const auto back = weight_to_diagram(out, p);
  bool same = back.chords.size() == d.chords.size();
  if (same) {
    auto sorted = d.chords;
    std::sort(sorted.begin(), sorted.end(), [](const Chord& x, const Chord& y) {
      return normalize(x.a, x.c) < normalize(y.a, y.c);
    });
    for (std::size_t i = 0; i < sorted.size() && same; ++i) {
      const auto& x = sorted[i];
      const auto& y = back.chords[i];
      if (normalize(x.a, x.c) != normalize(y.a, y.c) || std::abs(x.weight - y.weight) > 1e-8 * std::max(1.0, x.weight))
        same = false;
    }
  }
  if (!same) fail(ErrorCode::InconsistentDiagram, "solution leaves the cone of the diagram");
  return out;
}

}  // namespace strata::cb
