#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "strata/error.hpp"

namespace strata::cb {

struct Point {
  double x = 0.0, y = 0.0;
};

/// Default reference point for chord weights.
inline constexpr Point kDefaultP{0.23, 0.11};

/// Vertex i of the regular polygon with n_plus_1 vertices on the unit circle.
Point polygon_vertex(int n_plus_1, int i);

/// Diagonal (a, c) with a < c.
using Diagonal = std::pair<int, int>;

struct Chord {
  int a = 0, c = 0;
  double weight = 0.0;
};

struct BalancedWeight {
  int n_plus_1 = 0;
  std::vector<double> values;
};

struct WeightedChordDiagram {
  int n_plus_1 = 0;
  std::vector<Chord> chords;  // sorted by (a, c)
};

struct Triangulation {
  int n_plus_1 = 0;
  std::vector<Diagonal> diagonals;  // sorted
  bool operator==(const Triangulation&) const = default;
  bool operator<(const Triangulation& o) const { return diagonals < o.diagonals; }
};

struct FanFace {
  int n_plus_1 = 0;
  std::vector<Diagonal> diagonals;
  int codim = 0;  // (n - 2) - |diagonals|
};

/// Affine function L(x, y) = c0 + c1 x + c2 y.
struct Affine {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double operator()(Point p) const { return c0 + c1 * p.x + c2 * p.y; }
};

struct DegeneracyWitness {
  bool degenerate = false;
  Affine L;
  std::vector<int> touching;
};

/// Sum and first-moment residuals; balanced iff both are below tol.
bool is_balanced(const std::vector<double>& values, double tol = 1e-12);
/// Orthogonal projection onto the balanced subspace (removes the affine part).
BalancedWeight project_balanced(std::vector<double> values);
BalancedWeight random_balanced_weight(int n_plus_1, std::mt19937_64& rng);
/// Weight that is affine-degenerate on four vertices chosen from rng.
BalancedWeight random_degenerate_weight(int n_plus_1, std::mt19937_64& rng);

Diagonal normalize(int a, int c);
bool is_side(int n_plus_1, int a, int c);
bool crosses(const Diagonal& d, const Diagonal& e);
bool is_noncrossing(const std::vector<Diagonal>& ds);
bool is_complete(int n_plus_1, const std::vector<Diagonal>& ds);
/// Greedy lexicographic extension of a non-crossing set to a triangulation.
std::vector<Diagonal> lexicographic_completion(int n_plus_1, std::vector<Diagonal> ds);

/// Chord weights from the majorant LPs at reference point p.
WeightedChordDiagram weight_to_diagram(const BalancedWeight& f, Point p = kDefaultP);
/// Inverse of weight_to_diagram on the cone of the diagram's subdivision.
BalancedWeight diagram_to_weight(const WeightedChordDiagram& d, Point p = kDefaultP);

DegeneracyWitness is_degenerate(const BalancedWeight& f);
FanFace upper_hull_subdivision(const BalancedWeight& f);
FanFace fan_face(const BalancedWeight& f);

/// All triangulations of the (n+1)-gon, 3 <= n <= 12.
std::vector<Triangulation> enumerate_triangulations(int n);
Triangulation flip(const Triangulation& t, Diagonal d);
/// Catalan number c_m, m <= 30.
std::uint64_t catalan(int m);

}  // namespace strata::cb
