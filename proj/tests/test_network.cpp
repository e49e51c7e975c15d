#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "strata/network.hpp"

using namespace strata;
using namespace strata::nw;
using strata::qd::QuadDiff;

namespace {

const Complex I(0.0, 1.0);

QuadDiff cubic() { return QuadDiff::make(3, {-1.0, 0.0, 0.0}); }

AdmissibleGraph graph_of(const QuadDiff& q, Orientation o) { return build_graph(tr::build_structure(q, o)); }

int count_pole_edges(const AdmissibleGraph& g) {
  return static_cast<int>(std::count_if(g.edges.begin(), g.edges.end(), [](const GraphEdge& e) { return e.pole; }));
}

// Independent segment test: proper crossings only, exact orientation signs.
double orient(Point a, Point b, Point c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }
bool proper_cross(Point a, Point b, Point c, Point d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  const double eps = 1e-12;
  return ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps));
}

bool polylines_cross(const std::vector<Point>& p, const std::vector<Point>& q) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    for (std::size_t j = 0; j + 1 < q.size(); ++j)
      if (proper_cross(p[i], p[i + 1], q[j], q[j + 1])) return true;
  return false;
}

double shoelace(const std::vector<Point>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point a = p[i], b = p[(i + 1) % p.size()];
    s += a.x * b.y - a.y * b.x;
  }
  return 0.5 * s;
}

std::vector<Complex> random_coeffs(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  std::vector<Complex> c;
  for (int i = 0; i < k; ++i) c.push_back({u(rng), u(rng)});
  return c;
}

struct FaceCounts {
  int a = 0, b = 0, c = 0, d = 0, untyped = 0;
};

FaceCounts count_faces(const ExtendedGraph& x) {
  FaceCounts f;
  for (const auto& face : x.faces) {
    switch (face.type) {
      case 'a': ++f.a; break;
      case 'b': ++f.b; break;
      case 'c': ++f.c; break;
      case 'd': ++f.d; break;
      default: ++f.untyped;
    }
  }
  return f;
}

void check_extended(const ExtendedGraph& x) {
  const auto f = count_faces(x);
  CHECK(f.untyped == 0);
  CHECK(f.a == static_cast<int>(x.merged.polygon.size()));
  if (x.merged.has_center) {
    // the four corners at O are either rectangles or halves of a split quadrilateral
    CHECK(f.c + f.d / 2 == 4 * x.crossings + 4);
    CHECK(f.d % 2 == 0);
  } else {
    CHECK(f.c == 4 * x.crossings);
    CHECK(f.d == 0);
  }
  for (const auto& face : x.faces) {
    if (face.type == 'c') {
      CHECK(face.width > 0.0);
      CHECK(face.height > 0.0);
      // one midpoint of each color
      std::set<int> colors;
      for (int n : face.nodes)
        if (x.nodes[n].kind == NodeKind::Midpoint) colors.insert(static_cast<int>(x.merged.edges[x.nodes[n].ref].color));
      CHECK(colors.size() == 2);
    }
    if (face.type == 'b' || face.type == 'd') CHECK(face.width > 0.0);
  }
  if (x.non_star_faces == 0) {
    std::vector<Point> outline;
    for (const auto& v : x.merged.polygon) outline.push_back(v.p);
    double total = 0.0;
    for (const auto& face : x.faces) {
      std::vector<Point> poly;
      for (int n : face.nodes) poly.push_back(x.nodes[n].p);
      const double a = shoelace(poly);
      CHECK(a > 0.0);
      total += a;
    }
    CHECK(total == doctest::Approx(shoelace(outline)).epsilon(1e-9));
  }
}

}  // namespace

TEST_CASE("cubic horizontal graph") {
  const auto g = graph_of(cubic(), Orientation::Horizontal);
  CHECK(g.n_outer == 4);
  CHECK(g.has_center);
  CHECK(count_pole_edges(g) == 2);
  CHECK(g.double_support == 2);
  CHECK(check_admissible(g));
  CHECK(g.edges.size() == 3);
  CHECK(has_short(g));
  const auto d = to_chord_diagram(g);
  CHECK(d.diagram.n_plus_1 == 5);  // k + 2 with a doubly supported vertex
  CHECK(d.diagram.chords.size() == 1);
  REQUIRE(d.pole_side.has_value());
  CHECK(d.pole_side->c - d.pole_side->a == 1);
}

TEST_CASE("cubic vertical graph") {
  const auto g = graph_of(cubic(), Orientation::Vertical);
  CHECK(g.n_outer == 4);
  CHECK(count_pole_edges(g) == 2);
  CHECK(g.double_support == -1);
  CHECK(check_admissible(g));
  CHECK(has_short(g));
  const auto d = to_chord_diagram(g);
  CHECK(d.diagram.n_plus_1 == 4);  // k + 1 when the O edges end at distinct vertices
  CHECK(d.diagram.chords.empty());
  // O edges end at adjacent vertices
  std::vector<int> ends;
  for (const auto& e : g.edges)
    if (e.pole) ends.push_back(e.u.is_center() ? e.v.vertex : e.u.vertex);
  REQUIRE(ends.size() == 2);
  const int gap = (ends[0] - ends[1] + 4) % 4;
  CHECK((gap == 1 || gap == 3));
}

TEST_CASE("only the O pair gives a single chord") {
  const auto q = QuadDiff::make(2, {-1.0, 0.0});
  for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
    const auto g = graph_of(q, o);
    CHECK(g.edges.size() == 2);
    const auto d = to_chord_diagram(g);
    CHECK(d.diagram.chords.empty());
    CHECK(d.pole_side.has_value());
    CHECK(d.diagram.n_plus_1 == 3);
    CHECK_FALSE(has_short(g));  // triangle: nothing to complete
    CHECK(tr::find_short_trajectories(q, o).empty());
  }
  const auto m = merge_graphs(graph_of(q, Orientation::Horizontal), graph_of(q, Orientation::Vertical));
  CHECK(m.edges.size() == 4);
  check_extended(extend_graph(m));
}

TEST_CASE("generic perturbation is complete and short-free") {
  const auto q = QuadDiff::make(3, {-1.0, 0.1 * I, 0.0});
  for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
    const auto g = graph_of(q, o);
    CHECK(check_admissible(g));
    CHECK_FALSE(has_short(g));
    CHECK(tr::find_short_trajectories(q, o).empty());
  }
}

TEST_CASE("admissibility rejects malformed graphs") {
  AdmissibleGraph g;
  g.n_outer = 6;
  g.edges = {{{VertexRef::kCenter, 0}, {0, 0}, 1.0, true}, {{VertexRef::kCenter, 0}, {1, 0}, 1.0, true},
             {{2, 0}, {5, 0}, 0.5, false}};
  std::string why;
  CHECK(check_admissible(g, &why));

  SUBCASE("three O edges") {
    g.edges.push_back({{VertexRef::kCenter, 0}, {3, 0}, 1.0, true});
    CHECK_FALSE(check_admissible(g, &why));
  }
  SUBCASE("crossing strip edges") {
    g.edges.push_back({{1, 0}, {3, 0}, 0.5, false});
    g.edges.push_back({{2, 0}, {4, 0}, 0.5, false});
    CHECK_FALSE(check_admissible(g, &why));
  }
  SUBCASE("non-positive weight") {
    g.edges[2].weight = 0.0;
    CHECK_FALSE(check_admissible(g, &why));
  }
  SUBCASE("O edges at non-adjacent vertices") {
    g.edges[1].v = {3, 0};
    CHECK_FALSE(check_admissible(g, &why));
  }
  SUBCASE("edge along a polygon side") {
    g.edges.push_back({{3, 0}, {4, 0}, 0.5, false});
    CHECK_FALSE(check_admissible(g, &why));
  }
  SUBCASE("loop") {
    g.edges.push_back({{3, 0}, {3, 0}, 0.5, false});
    CHECK_FALSE(check_admissible(g, &why));
  }
  SUBCASE("parallel strips are allowed") {
    g.edges.push_back({{2, 0}, {5, 0}, 0.25, false});
    CHECK(check_admissible(g, &why));
    const auto d = to_chord_diagram(g);
    CHECK(d.diagram.chords.size() == 2);
    CHECK(signature(g) == "n6:o0-1:2-5");
  }
  SUBCASE("copy used without double support") {
    g.edges.push_back({{3, 1}, {5, 0}, 0.5, false});
    CHECK_FALSE(check_admissible(g, &why));
  }
}

TEST_CASE("double support splits the vertex") {
  AdmissibleGraph g;
  g.n_outer = 4;
  g.double_support = 1;
  g.edges = {{{VertexRef::kCenter, 0}, {1, 0}, 1.0, true},
             {{VertexRef::kCenter, 0}, {1, 1}, 1.0, true},
             {{1, 1}, {3, 0}, 0.7, false}};
  CHECK(check_admissible(g));
  const auto d = to_chord_diagram(g);
  CHECK(d.diagram.n_plus_1 == 5);
  REQUIRE(d.diagram.chords.size() == 1);
  CHECK(d.diagram.chords[0].a == 2);
  CHECK(d.diagram.chords[0].c == 4);
  CHECK(d.pole_side->a == 1);
  CHECK(d.pole_side->c == 2);
  CHECK(has_short(g));  // pentagon needs two diagonals
  g.edges.push_back({{0, 0}, {1, 1}, 0.2, false});
  CHECK(check_admissible(g));
  CHECK_FALSE(has_short(g));
  // the O edges must use both copies
  g.edges[1].v = {2, 0};
  CHECK_FALSE(check_admissible(g));
}

TEST_CASE("weights are preserved by the chord diagram") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 12; ++it) {
    const int k = 2 + it % 3;
    const auto q = QuadDiff::make(k, random_coeffs(rng, k));
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
      const auto s = tr::build_structure(q, o);
      const auto g = build_graph(s);
      const auto d = to_chord_diagram(g);
      std::vector<double> got, want;
      for (const auto& c : d.diagram.chords) got.push_back(c.weight);
      if (d.pole_side) got.push_back(d.pole_side->weight);
      for (const auto& st : s.strips) want.push_back(st.width);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
      // vertex count rule
      CHECK(d.diagram.n_plus_1 == (g.double_support >= 0 ? k + 2 : k + 1));
    }
  }
}

TEST_CASE("combinatorial and numeric short detection agree") {
  std::mt19937_64 rng(5);
  std::vector<QuadDiff> fixtures{cubic(), QuadDiff::make(2, {-1.0, 0.0}), QuadDiff::make(3, {-1.0, 0.1 * I, 0.0}),
                                 QuadDiff::make(4, {-1.0, 0.0, 0.0, 0.0})};
  for (int it = 0; it < 16; ++it) {
    const int k = 2 + it % 3;
    fixtures.push_back(QuadDiff::make(k, random_coeffs(rng, k)));
  }
  for (const auto& q : fixtures)
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
      const auto g = graph_of(q, o);
      CHECK(has_short(g) == !tr::find_short_trajectories(q, o).empty());
    }
}

TEST_CASE("polynomial family graph") {
  const auto q = QuadDiff::make_polynomial({-1.0, 0.0});  // z^2 - 1
  for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
    const auto g = graph_of(q, o);
    CHECK_FALSE(g.has_center);
    CHECK(g.n_outer == 4);
    CHECK(check_admissible(g));
    CHECK(has_short(g) == !tr::find_short_trajectories(q, o).empty());
  }
  const auto m = merge_graphs(graph_of(q, Orientation::Horizontal), graph_of(q, Orientation::Vertical));
  check_extended(extend_graph(m));
}

TEST_CASE("merged graph of the cubic") {
  const auto gh = graph_of(cubic(), Orientation::Horizontal);
  const auto gv = graph_of(cubic(), Orientation::Vertical);
  const auto m = merge_graphs(gh, gv);
  CHECK(m.polygon.size() == 9);  // 2(k+1) plus the horizontal copy
  // colors interlace once copies are merged
  std::vector<int> colors;
  for (const auto& v : m.polygon)
    if (v.copy == 0) colors.push_back(static_cast<int>(v.color));
  for (std::size_t i = 0; i < colors.size(); ++i) CHECK(colors[i] != colors[(i + 1) % colors.size()]);
  CHECK(m.edges.size() == gh.edges.size() + gv.edges.size());
  const auto x = extend_graph(m);
  check_extended(x);
  CHECK(x.arrangement_faces == static_cast<int>(x.centers.size()));
}

TEST_CASE("merged graphs over random differentials") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 100; ++it) {
    const int k = 2 + it % 3;
    const auto q = QuadDiff::make(k, random_coeffs(rng, k));
    const auto m = merge_graphs(graph_of(q, Orientation::Horizontal), graph_of(q, Orientation::Vertical));
    for (std::size_t i = 0; i < m.edges.size(); ++i)
      for (std::size_t j = i + 1; j < m.edges.size(); ++j)
        if (m.edges[i].color == m.edges[j].color) CHECK_FALSE(polylines_cross(m.edges[i].path, m.edges[j].path));
    // paths end where the edge says
    for (const auto& e : m.edges) {
      CHECK(std::hypot(e.path.front().x - m.position(e.a).x, e.path.front().y - m.position(e.a).y) < 1e-12);
      CHECK(std::hypot(e.path.back().x - m.position(e.b).x, e.path.back().y - m.position(e.b).y) < 1e-12);
    }
    check_extended(extend_graph(m));
  }
}

TEST_CASE("graphs are stable under small perturbations") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01;
  for (int it = 0; it < 10; ++it) {
    const int k = 2 + it % 3;
    auto c = random_coeffs(rng, k);
    const auto q = QuadDiff::make(k, c);
    for (auto& a : c) a += 1e-6 * Complex(n01(rng), n01(rng));
    const auto q2 = QuadDiff::make(k, c);
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
      const auto g1 = graph_of(q, o);
      const auto g2 = graph_of(q2, o);
      // skip samples sitting within the perturbation of a wall
      bool near_wall = false;
      for (const auto& e : g1.edges) near_wall |= e.weight < 1e-4;
      if (near_wall) continue;
      CHECK(signature(g1) == signature(g2));
      REQUIRE(g1.edges.size() == g2.edges.size());
      for (std::size_t i = 0; i < g1.edges.size(); ++i) {
        CHECK(g1.edges[i].u == g2.edges[i].u);
        CHECK(g1.edges[i].v == g2.edges[i].v);
        CHECK(g1.edges[i].weight == doctest::Approx(g2.edges[i].weight).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("build_graph rejects collided zeros") {
  // (z - 0.3)^2 (z + 2i)
  const Complex r = 0.3, s = -2.0 * I;
  const auto q2 = QuadDiff::make(3, {-r * r * s, r * r + 2.0 * r * s, -(2.0 * r + s)});
  REQUIRE(q2.has_multiple_zero());
  try {
    const auto st = tr::build_structure(q2, Orientation::Horizontal);
    CHECK_THROWS_AS(build_graph(st), Error);
  } catch (const Error&) {
    // the structure itself may already refuse
  }
}
