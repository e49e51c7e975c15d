#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "network_detail.hpp"

namespace strata::nw {

using namespace geom;

namespace {

constexpr double kSnap = 1e-9;

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  return a < 0 ? a + two_pi : a;
}

bool strictly_inside(const std::vector<Point>& convex_ccw, Point x) {
  for (std::size_t i = 0; i < convex_ccw.size(); ++i) {
    const Point a = convex_ccw[i], b = convex_ccw[(i + 1) % convex_ccw.size()];
    if (cross(sub(b, a), sub(x, a)) <= 1e-12) return false;
  }
  return true;
}

// Piecewise-affine map of the polygon onto itself, fixing its boundary and sending p to o:
// triangle (p, v_i, v_{i+1}) goes to (o, v_i, v_{i+1}).
struct Warp {
  const std::vector<Point>* poly = nullptr;
  Point p, o;

  Point operator()(Point x) const {
    const auto& v = *poly;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point a = v[i], b = v[(i + 1) % v.size()];
      const double det = cross(sub(a, p), sub(b, p));
      const double l1 = cross(sub(x, p), sub(b, p)) / det;
      const double l2 = cross(sub(a, p), sub(x, p)) / det;
      const double l0 = 1.0 - l1 - l2;
      if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12) return add(add(scale(o, l0), scale(a, l1)), scale(b, l2));
    }
    return x;  // on or outside the boundary
  }

  // image of the straight segment a-b, split where it crosses the fan rays
  std::vector<Point> image(Point a, Point b) const {
    std::vector<double> ts{0.0, 1.0};
    const Point d = sub(b, a);
    for (const Point& v : *poly) {
      const Point r = sub(v, p);
      const double den = cross(d, r);
      if (std::abs(den) < 1e-15) continue;
      const double t = cross(sub(p, a), r) / den;
      const double s = cross(sub(p, a), d) / den;
      if (t > 1e-12 && t < 1.0 - 1e-12 && s > 0.0) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    std::vector<Point> out;
    for (double t : ts) {
      const Point q = (*this)(add(a, scale(d, t)));
      if (out.empty() || dist(out.back(), q) > 1e-13) out.push_back(q);
    }
    return out;
  }
};

}  // namespace

MergedGraph merge_at(const AdmissibleGraph& gh, const AdmissibleGraph& gv, std::optional<Point> center) {
  if (gh.orientation != Orientation::Horizontal || gv.orientation != Orientation::Vertical)
    fail(ErrorCode::PreconditionViolated, "merge needs a horizontal and a vertical graph");
  if (gh.n_outer != gv.n_outer || gh.has_center != gv.has_center)
    fail(ErrorCode::PreconditionViolated, "graphs come from different differentials");

  MergedGraph m;
  m.sources = {gh, gv};
  m.n_outer = gh.n_outer;
  m.has_center = gh.has_center;

  struct Slot {
    double angle;
    PolygonVertex v;
  };
  std::vector<Slot> slots;
  for (const AdmissibleGraph* g : {&gh, &gv}) {
    const Color c = g == &gh ? Color::Horizontal : Color::Vertical;
    for (const auto& r : detail::polygon_refs(*g)) {
      const Point p = layout(*g, r);
      slots.push_back({wrap_angle(std::atan2(p.y, p.x)), {p, c, r.vertex, r.copy}});
    }
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.angle < b.angle; });
  std::map<std::tuple<int, int, int>, int> index;
  for (const auto& s : slots) {
    index[{static_cast<int>(s.v.color), s.v.outer, s.v.copy}] = static_cast<int>(m.polygon.size());
    m.polygon.push_back(s.v);
  }
  // each color is warped inside its own sub-polygon so the two fans never share rays
  std::vector<Point> outline[2];
  for (const auto& v : m.polygon) outline[static_cast<int>(v.color)].push_back(v.p);

  std::vector<Point> faces[2];
  if (m.has_center) {
    faces[0] = convex_hull(detail::center_face(gh));
    faces[1] = convex_hull(detail::center_face(gv));
    std::vector<Point> region = faces[0];
    for (std::size_t i = 0; i < faces[1].size() && !region.empty(); ++i)
      region = clip_left(region, faces[1][i], faces[1][(i + 1) % faces[1].size()]);
    if (region.size() >= 3 && signed_area(region) > 1e-12) {
      m.center_region = region;
      m.center = area_centroid(region);
    } else {
      m.center = {0.0, 0.0};
    }
    if (center) m.center = *center;
  }

  for (const AdmissibleGraph* g : {&gh, &gv}) {
    const Color c = g == &gh ? Color::Horizontal : Color::Vertical;
    const int ci = static_cast<int>(c);
    Warp warp;
    warp.poly = &outline[ci];
    warp.o = m.center;
    if (m.has_center && !strictly_inside(faces[ci], m.center)) {
      m.warped[ci] = true;
      warp.p = detail::center_of(*g);
    }
    auto idx = [&](VertexRef r) { return r.is_center() ? -1 : index.at({ci, r.vertex, r.copy}); };
    for (const auto& e : g->edges) {
      ColoredEdge ce{idx(e.u), idx(e.v), c, e.weight, e.pole, {}};
      if (m.warped[ci]) {
        ce.path = warp.image(layout(*g, e.u), layout(*g, e.v));
      } else {
        ce.path = {m.position(ce.a), m.position(ce.b)};
      }
      m.edges.push_back(std::move(ce));
    }
  }
  return m;
}

MergedGraph merge_graphs(const AdmissibleGraph& gh, const AdmissibleGraph& gv) { return merge_at(gh, gv, {}); }

namespace {

struct Drawn {
  int a, b;  // polygon index or -1
  Color color;
  double weight;
  int edge;  // first colored edge
  std::vector<Point> path;
};

struct Atom {
  int a, b;
  int drawn;  // -1 for a polygon side
};

bool point_in_polygon(const std::vector<Point>& poly, Point x) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point a = poly[i], b = poly[j];
    if ((a.y > x.y) != (b.y > x.y) && x.x < (b.x - a.x) * (x.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

// Interior point of a simple polygon that is not star-shaped: centroid of an ear.
Point interior_point(const std::vector<Point>& poly) {
  const Point c = area_centroid(poly);
  if (point_in_polygon(poly, c)) return c;
  const std::size_t n = poly.size();
  double best = -1.0;
  Point pick = c;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[(i + n - 1) % n], b = poly[i], d = poly[(i + 1) % n];
    const double ar = cross(sub(b, a), sub(d, a));
    if (ar <= 0) continue;
    const Point t = scale(add(add(a, b), d), 1.0 / 3.0);
    if (point_in_polygon(poly, t) && ar > best) {
      best = ar;
      pick = t;
    }
  }
  return pick;
}

ExtendedGraph build_extended(const MergedGraph& g) {
  ExtendedGraph out;
  out.merged = g;
  const int m = static_cast<int>(g.polygon.size());
  auto& nodes = out.nodes;
  for (int i = 0; i < m; ++i) nodes.push_back({g.polygon[i].p, NodeKind::Polygon, i});
  const int pole_node = g.has_center ? m : -1;
  if (g.has_center) nodes.push_back({g.center, NodeKind::Pole, -1});
  auto node_of = [&](int idx) { return idx < 0 ? pole_node : idx; };

  // parallel strips share one drawn path
  std::vector<Drawn> drawn;
  {
    std::map<std::tuple<int, int, int>, int> seen;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
      const auto& e = g.edges[i];
      const auto key = std::make_tuple(static_cast<int>(e.color), std::min(e.a, e.b), std::max(e.a, e.b));
      auto it = seen.find(key);
      if (it != seen.end()) {
        drawn[it->second].weight += e.weight;
        continue;
      }
      seen[key] = static_cast<int>(drawn.size());
      std::vector<Point> path = e.path;
      if (path.size() < 2) path = {g.position(e.a), g.position(e.b)};
      drawn.push_back({e.a, e.b, e.color, e.weight, i, std::move(path)});
    }
  }
  const int nd = static_cast<int>(drawn.size());

  // stations along each path: (parameter, node); parameter = segment index + local t
  std::vector<std::vector<std::pair<double, int>>> stations(nd);
  for (int i = 0; i < nd; ++i) {
    const auto& path = drawn[i].path;
    const int last = static_cast<int>(path.size()) - 1;
    stations[i].push_back({0.0, node_of(drawn[i].a)});
    stations[i].push_back({static_cast<double>(last), node_of(drawn[i].b)});
    for (int k = 1; k < last; ++k) {
      stations[i].push_back({static_cast<double>(k), static_cast<int>(nodes.size())});
      nodes.push_back({path[k], NodeKind::Bend, i});
    }
  }

  auto degenerate = [](const char* what) { fail(ErrorCode::ArrangementDegeneracy, what); };
  std::vector<int> crossings;
  for (int i = 0; i < nd; ++i)
    for (int j = i + 1; j < nd; ++j) {
      const auto& pi = drawn[i].path;
      const auto& pj = drawn[j].path;
      const bool mixed = drawn[i].color != drawn[j].color;
      for (std::size_t si = 0; si + 1 < pi.size(); ++si)
        for (std::size_t sj = 0; sj + 1 < pj.size(); ++sj) {
          const Point p = pi[si], q = pi[si + 1], r = pj[sj], s = pj[sj + 1];
          const Point d1 = sub(q, p), d2 = sub(s, r);
          const double den = cross(d1, d2);
          const double l1 = std::hypot(d1.x, d1.y), l2 = std::hypot(d2.x, d2.y);
          double t = -1.0, u = -1.0;
          if (std::abs(den) > 1e-15 * l1 * l2) {
            t = cross(sub(r, p), d2) / den;
            u = cross(sub(r, p), d1) / den;
          }
          const bool proper = t > kSnap / l1 && t < 1.0 - kSnap / l1 && u > kSnap / l2 && u < 1.0 - kSnap / l2;
          if (proper && mixed) {
            const Point x = add(p, scale(d1, t));
            for (int c : crossings)
              if (dist(nodes[c].p, x) <= kSnap) degenerate("three segments meet at one point");
            const int id = static_cast<int>(nodes.size());
            nodes.push_back({x, NodeKind::Crossing, -1});
            crossings.push_back(id);
            stations[i].push_back({si + t, id});
            stations[j].push_back({sj + u, id});
            continue;
          }
          if (segments_conflict(p, q, r, s, kSnap))
            degenerate(mixed ? "a segment passes through a vertex of another" : "edges of one color intersect");
        }
    }
  out.crossings = static_cast<int>(crossings.size());

  // chains of atoms with one midpoint per piece between consecutive non-bend nodes
  std::vector<Atom> atoms;
  for (int i = 0; i < m; ++i) atoms.push_back({i, (i + 1) % m, -1});
  for (int i = 0; i < nd; ++i) {
    auto& st = stations[i];
    std::sort(st.begin(), st.end());
    std::vector<int> chain;
    std::size_t k = 0;
    chain.push_back(st[0].second);
    while (k + 1 < st.size()) {
      std::size_t e = k + 1;
      while (nodes[st[e].second].kind == NodeKind::Bend) ++e;
      std::vector<Point> pts;
      for (std::size_t r = k; r <= e; ++r) pts.push_back(nodes[st[r].second].p);
      std::vector<double> cum{0.0};
      for (std::size_t r = 1; r < pts.size(); ++r) cum.push_back(cum.back() + dist(pts[r - 1], pts[r]));
      Point mid = pts[0];
      std::size_t after = 1;  // midpoint lies before pts[after]
      for (double frac : {0.5, 0.45, 0.55, 0.4, 0.6}) {
        const double target = frac * cum.back();
        std::size_t r = 1;
        while (r + 1 < pts.size() && cum[r] < target) ++r;
        const double seg = cum[r] - cum[r - 1];
        const double t = seg > 0 ? (target - cum[r - 1]) / seg : 0.5;
        mid = add(pts[r - 1], scale(sub(pts[r], pts[r - 1]), t));
        after = r;
        if (dist(mid, pts[r - 1]) > kSnap && dist(mid, pts[r]) > kSnap) break;
      }
      const int mid_id = static_cast<int>(nodes.size());
      nodes.push_back({mid, NodeKind::Midpoint, drawn[i].edge});
      for (std::size_t r = k + 1; r <= e; ++r) {
        if (r == k + after) chain.push_back(mid_id);
        chain.push_back(st[r].second);
      }
      k = e;
    }
    for (std::size_t r = 0; r + 1 < chain.size(); ++r) atoms.push_back({chain[r], chain[r + 1], i});
  }

  for (const auto& a : atoms)
    out.segments.push_back({a.a, a.b, a.drawn < 0 ? SegmentKind::PolygonSide : SegmentKind::Colored,
                            a.drawn < 0 ? -1 : drawn[a.drawn].edge});

  // half-edge faces
  const int nh = 2 * static_cast<int>(atoms.size());
  auto from = [&](int h) { return h % 2 == 0 ? atoms[h / 2].a : atoms[h / 2].b; };
  auto to = [&](int h) { return h % 2 == 0 ? atoms[h / 2].b : atoms[h / 2].a; };
  std::vector<std::vector<int>> around(nodes.size());
  for (int h = 0; h < nh; ++h) around[from(h)].push_back(h);
  auto angle_of = [&](int h) {
    const Point d = sub(nodes[to(h)].p, nodes[from(h)].p);
    return std::atan2(d.y, d.x);
  };
  for (auto& lst : around)
    std::sort(lst.begin(), lst.end(), [&](int a, int b) { return angle_of(a) < angle_of(b); });
  auto next = [&](int h) {
    const auto& lst = around[to(h)];
    const auto pos = std::find(lst.begin(), lst.end(), h ^ 1) - lst.begin();
    return lst[(pos + lst.size() - 1) % lst.size()];
  };
  std::vector<char> used(nh, 0);
  std::vector<std::vector<int>> faces;
  for (int h0 = 0; h0 < nh; ++h0) {
    if (used[h0]) continue;
    std::vector<int> cyc;
    for (int h = h0; !used[h]; h = next(h)) {
      used[h] = 1;
      cyc.push_back(h);
    }
    std::vector<Point> poly;
    for (int h : cyc) poly.push_back(nodes[from(h)].p);
    if (signed_area(poly) > 0) faces.push_back(std::move(cyc));
  }
  out.arrangement_faces = static_cast<int>(faces.size());

  auto color_of = [&](int node) { return g.edges[nodes[node].ref].color; };
  auto weight_of = [&](int node) {
    for (const auto& d : drawn)
      if (d.edge == nodes[node].ref) return d.weight;
    return g.edges[nodes[node].ref].weight;
  };
  auto is_target = [&](int node) {
    return nodes[node].kind == NodeKind::Polygon || nodes[node].kind == NodeKind::Midpoint;
  };

  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& cyc = faces[f];
    std::vector<Point> poly;
    for (int h : cyc) poly.push_back(nodes[from(h)].p);
    std::vector<Point> kernel{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
    for (int h : cyc) {
      kernel = clip_left(kernel, nodes[from(h)].p, nodes[to(h)].p);
      if (kernel.size() < 3) break;
    }
    Point center;
    if (kernel.size() >= 3 && signed_area(kernel) > 1e-18) {
      center = area_centroid(kernel);
    } else {
      center = interior_point(poly);
      ++out.non_star_faces;
    }
    const int c = static_cast<int>(nodes.size());
    nodes.push_back({center, NodeKind::Center, static_cast<int>(f)});
    out.centers.push_back(c);

    std::vector<int> seq;
    for (int h : cyc) seq.push_back(from(h));
    std::rotate(seq.begin(), std::find_if(seq.begin(), seq.end(), is_target), seq.end());
    for (int node : seq)
      if (is_target(node))
        out.segments.push_back(
            {c, node, nodes[node].kind == NodeKind::Polygon ? SegmentKind::Spoke : SegmentKind::CenterLink, -1});

    for (std::size_t i = 0; i < seq.size();) {
      std::size_t j = i + 1;
      while (j < seq.size() && !is_target(seq[j])) ++j;
      std::vector<int> sub{c};
      for (std::size_t k = i; k <= j; ++k) sub.push_back(seq[k % seq.size()]);
      i = j;

      // shape without bends
      std::vector<int> core;
      for (int node : sub)
        if (nodes[node].kind != NodeKind::Bend) core.push_back(node);
      auto kind = [&](std::size_t k) { return nodes[core[k]].kind; };
      ExtFace face;
      face.nodes = sub;
      if (core.size() == 3 && kind(1) == NodeKind::Polygon && kind(2) == NodeKind::Polygon) {
        face.type = 'a';
        face.identification = "quadrant";
      } else if (core.size() == 3 && (kind(1) == NodeKind::Midpoint) != (kind(2) == NodeKind::Midpoint)) {
        face.type = 'b';
        face.identification = "strip-quarter";
        face.width = weight_of(kind(1) == NodeKind::Midpoint ? core[1] : core[2]);
      } else if (core.size() == 4 && kind(1) == NodeKind::Midpoint && kind(3) == NodeKind::Midpoint &&
                 (kind(2) == NodeKind::Crossing || kind(2) == NodeKind::Pole)) {
        if (color_of(core[1]) != color_of(core[3])) {
          face.type = 'c';
          face.identification = "rectangle";
          const bool first_h = color_of(core[1]) == Color::Horizontal;
          face.width = weight_of(first_h ? core[1] : core[3]);
          face.height = weight_of(first_h ? core[3] : core[1]);
        } else if (kind(2) == NodeKind::Pole) {
          out.segments.push_back({c, core[2], SegmentKind::PoleRule, -1});
          const auto split = std::find(sub.begin(), sub.end(), core[2]);
          ExtFace left, right;
          left.nodes.assign(sub.begin(), split + 1);
          right.nodes.push_back(c);
          right.nodes.insert(right.nodes.end(), split, sub.end());
          left.type = right.type = 'd';
          left.identification = right.identification = "pole-rectangle";
          left.width = weight_of(core[1]);
          right.width = weight_of(core[3]);
          out.faces.push_back(std::move(left));
          out.faces.push_back(std::move(right));
          continue;
        }
      }
      out.faces.push_back(std::move(face));
    }
  }
  return out;
}

}  // namespace

ExtendedGraph extend_graph(const MergedGraph& g) {
  try {
    return build_extended(g);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ArrangementDegeneracy || !g.has_center || g.sources.size() != 2) throw;
  }
  // one retry with O moved
  Point target;
  if (g.center_region.size() >= 3) {
    Point p{0.0, 0.0};
    double total = 0.0;
    for (std::size_t i = 0; i < g.center_region.size(); ++i) {
      p = add(p, scale(g.center_region[i], static_cast<double>(i + 1)));
      total += static_cast<double>(i + 1);
    }
    target = add(scale(g.center, 0.5), scale(p, 0.5 / total));
  } else {
    target = add(g.center, Point{1e-3, 7e-4});
  }
  return build_extended(merge_at(g.sources[0], g.sources[1], target));
}

}  // namespace strata::nw
