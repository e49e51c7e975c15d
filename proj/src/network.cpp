#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "network_detail.hpp"
#include "strata/network.hpp"

namespace strata::nw {

using geom::cross;
using geom::sub;

double outer_angle(Orientation o, int n_outer, int j) {
  const double base = o == Orientation::Horizontal ? 0.0 : std::numbers::pi;
  return (base + 2.0 * std::numbers::pi * j) / n_outer;
}

Point layout(const AdmissibleGraph& g, VertexRef v) {
  if (v.is_center()) return detail::center_of(g);
  double a = outer_angle(g.orientation, g.n_outer, v.vertex);
  if (v.vertex == g.double_support) a += v.copy == 0 ? -detail::copy_offset(g.n_outer) : detail::copy_offset(g.n_outer);
  return {std::cos(a), std::sin(a)};
}

namespace detail {

double copy_offset(int n_outer) { return std::numbers::pi / (4.0 * n_outer); }

// Outer vertices of g in ccw order, copies expanded.
std::vector<VertexRef> polygon_refs(const AdmissibleGraph& g) {
  std::vector<VertexRef> out;
  for (int j = 0; j < g.n_outer; ++j) {
    out.push_back({j, 0});
    if (j == g.double_support) out.push_back({j, 1});
  }
  return out;
}

std::vector<std::size_t> pole_edges(const AdmissibleGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].u.is_center() || g.edges[i].v.is_center()) out.push_back(i);
  return out;
}

VertexRef outer_end(const GraphEdge& e) { return e.u.is_center() ? e.v : e.u; }

std::vector<Point> center_face(const AdmissibleGraph& g) {
  const auto poles = pole_edges(g);
  if (poles.size() != 2) fail(ErrorCode::PreconditionViolated, "graph needs exactly two O edges");
  const auto refs = polygon_refs(g);
  auto pos = [&](VertexRef r) {
    double a = outer_angle(g.orientation, g.n_outer, r.vertex);
    if (r.vertex == g.double_support) a += r.copy == 0 ? -detail::copy_offset(g.n_outer) : detail::copy_offset(g.n_outer);
    return Point{std::cos(a), std::sin(a)};
  };
  const Point A = pos(outer_end(g.edges[poles[0]]));
  const Point B = pos(outer_end(g.edges[poles[1]]));
  // a point just inside the O side
  const Point mid{0.5 * (A.x + B.x), 0.5 * (A.y + B.y)};
  const Point probe{mid.x * (1.0 - 1e-6), mid.y * (1.0 - 1e-6)};
  std::vector<Point> face;
  for (const auto& r : refs) {
    const Point p = pos(r);
    bool keep = true;
    for (std::size_t i = 0; i < g.edges.size() && keep; ++i) {
      const auto& e = g.edges[i];
      if (e.u.is_center() || e.v.is_center()) continue;
      const Point a = pos(e.u), b = pos(e.v);
      const double sp = cross(sub(b, a), sub(probe, a));
      const double sv = cross(sub(b, a), sub(p, a));
      if (std::abs(sv) > 1e-12 && (sp > 0) != (sv > 0)) keep = false;
    }
    if (keep) face.push_back(p);
  }
  return face;
}

Point center_of(const AdmissibleGraph& g) {
  if (!g.has_center) fail(ErrorCode::PreconditionViolated, "graph has no vertex O");
  const auto face = center_face(g);
  Point c{0.0, 0.0};
  for (const auto& p : face) {
    c.x += p.x / face.size();
    c.y += p.y / face.size();
  }
  return c;
}

}  // namespace detail

AdmissibleGraph build_graph(const tr::TrajectoryStructure& s) {
  if (s.qd.has_multiple_zero())
    fail(ErrorCode::PreconditionViolated, "structure has collided zeros");
  for (const auto& t : s.trajectories)
    if (t.termination == tr::Termination::Budget)
      fail(ErrorCode::PreconditionViolated, "structure has unterminated trajectories");

  AdmissibleGraph g;
  g.orientation = s.orientation;
  g.n_outer = s.num_sectors;
  g.has_center = s.qd.has_pole();

  const tr::Strip* pole_strip = nullptr;
  for (const auto& st : s.strips)
    if (st.has_pole) {
      if (pole_strip) fail(ErrorCode::NotRepresentable, "more than one strip touches the pole");
      pole_strip = &st;
    }
  if (g.has_center && !pole_strip) fail(ErrorCode::NotRepresentable, "no strip touches the pole");
  if (pole_strip && pole_strip->end_a == pole_strip->end_b) {
    if (s.pole_endpoint < 0) fail(ErrorCode::NotRepresentable, "double support without an escaping pole trajectory");
    g.double_support = pole_strip->end_a;
  }

  // side of the pole slit an arc in the doubly supported sector lies on
  auto attach = [&](int sector, const tr::Arc& arc) -> VertexRef {
    if (sector != g.double_support) return {sector, 0};
    const double kp = s.endpoints[s.pole_endpoint].key;
    const double lo = std::min(s.endpoints[arc.from].key, s.endpoints[arc.to].key);
    return {sector, lo < kp ? 0 : 1};
  };

  for (const auto& st : s.strips) {
    if (st.has_pole) {
      if (g.double_support >= 0) {
        g.edges.push_back({{VertexRef::kCenter, 0}, {st.end_a, 0}, st.width, true});
        g.edges.push_back({{VertexRef::kCenter, 0}, {st.end_a, 1}, st.width, true});
      } else {
        g.edges.push_back({{VertexRef::kCenter, 0}, {st.end_a, 0}, st.width, true});
        g.edges.push_back({{VertexRef::kCenter, 0}, {st.end_b, 0}, st.width, true});
      }
    } else {
      g.edges.push_back({attach(st.end_a, st.arc_a), attach(st.end_b, st.arc_b), st.width, false});
    }
  }
  std::string why;
  if (!check_admissible(g, &why)) fail(ErrorCode::NotRepresentable, "graph is not admissible: " + why);
  return g;
}

bool check_admissible(const AdmissibleGraph& g, std::string* reason) {
  auto no = [&](const std::string& r) {
    if (reason) *reason = r;
    return false;
  };
  if (g.n_outer < 3) return no("fewer than three outer vertices");
  if (g.double_support >= g.n_outer) return no("double support index out of range");
  if (!g.has_center && g.double_support >= 0) return no("double support without vertex O");

  auto valid_ref = [&](VertexRef r) {
    if (r.is_center()) return g.has_center;
    if (r.vertex < 0 || r.vertex >= g.n_outer) return false;
    return r.copy == 0 || (r.copy == 1 && r.vertex == g.double_support);
  };
  for (const auto& e : g.edges) {
    if (!valid_ref(e.u) || !valid_ref(e.v)) return no("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) return no("non-positive edge weight");
    if (e.u == e.v) return no("loop edge");
    if (e.u.is_center() && e.v.is_center()) return no("loop at O");
  }

  const auto poles = detail::pole_edges(g);
  if (g.has_center) {
    if (poles.size() != 2) return no("O must have exactly two edges");
    const VertexRef a = detail::outer_end(g.edges[poles[0]]);
    const VertexRef b = detail::outer_end(g.edges[poles[1]]);
    if (g.double_support >= 0) {
      if (a.vertex != g.double_support || b.vertex != g.double_support || a.copy == b.copy)
        return no("O edges must end at both copies of the doubly supported vertex");
    } else {
      const int d = (a.vertex - b.vertex + g.n_outer) % g.n_outer;
      if (d != 1 && d != g.n_outer - 1) return no("O edges must end at adjacent vertices");
    }
  } else if (!poles.empty()) {
    return no("edges at O in a graph without O");
  }

  // sides of the layout polygon are not edges
  const auto refs = detail::polygon_refs(g);
  const int m = static_cast<int>(refs.size());
  auto index_of = [&](VertexRef r) {
    return static_cast<int>(std::find(refs.begin(), refs.end(), r) - refs.begin());
  };
  for (const auto& e : g.edges) {
    if (e.u.is_center() || e.v.is_center()) continue;
    const int d = (index_of(e.u) - index_of(e.v) + m) % m;
    if (d == 1 || d == m - 1) return no("edge coincides with a polygon side");
  }

  std::vector<std::pair<Point, Point>> segs;
  try {
    for (const auto& e : g.edges) segs.push_back({layout(g, e.u), layout(g, e.v)});
  } catch (const Error& err) {
    return no(err.what());
  }
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const auto& ei = g.edges[i];
      const auto& ej = g.edges[j];
      const bool same = (ei.u == ej.u && ei.v == ej.v) || (ei.u == ej.v && ei.v == ej.u);
      if (same) continue;  // parallel strips
      if (geom::segments_conflict(segs[i].first, segs[i].second, segs[j].first, segs[j].second, 1e-12))
        return no("edges intersect away from a shared vertex");
    }
  return true;
}

GammaDiagram to_chord_diagram(const AdmissibleGraph& g) {
  GammaDiagram out;
  out.labels = detail::polygon_refs(g);
  const int n = static_cast<int>(out.labels.size());
  auto index_of = [&](VertexRef r) {
    return static_cast<int>(std::find(out.labels.begin(), out.labels.end(), r) - out.labels.begin());
  };
  out.diagram.n_plus_1 = n;
  const auto poles = detail::pole_edges(g);
  if (poles.size() == 2) {
    int a = index_of(detail::outer_end(g.edges[poles[0]]));
    int b = index_of(detail::outer_end(g.edges[poles[1]]));
    if (a > b) std::swap(a, b);
    out.pole_side = cb::Chord{a, b, g.edges[poles[0]].weight};
  }
  for (const auto& e : g.edges) {
    if (e.u.is_center() || e.v.is_center()) continue;
    const auto [a, c] = cb::normalize(index_of(e.u), index_of(e.v));
    out.diagram.chords.push_back({a, c, e.weight});
  }
  std::stable_sort(out.diagram.chords.begin(), out.diagram.chords.end(),
                   [](const cb::Chord& x, const cb::Chord& y) { return std::tie(x.a, x.c) < std::tie(y.a, y.c); });
  return out;
}

namespace {

std::vector<cb::Diagonal> distinct_diagonals(const GammaDiagram& d) {
  std::set<cb::Diagonal> s;
  for (const auto& c : d.diagram.chords) s.insert({c.a, c.c});
  return {s.begin(), s.end()};
}

}  // namespace

bool has_short(const AdmissibleGraph& g) {
  const auto d = to_chord_diagram(g);
  return !cb::is_complete(d.diagram.n_plus_1, distinct_diagonals(d));
}

std::string signature(const AdmissibleGraph& g) {
  const auto d = to_chord_diagram(g);
  std::ostringstream os;
  os << "n" << d.diagram.n_plus_1;
  if (d.pole_side) os << ":o" << d.pole_side->a << "-" << d.pole_side->c;
  os << ":";
  bool first = true;
  for (const auto& [a, c] : distinct_diagonals(d)) {
    os << (first ? "" : ",") << a << "-" << c;
    first = false;
  }
  return os.str();
}

}  // namespace strata::nw
