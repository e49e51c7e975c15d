#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "strata/io.hpp"

namespace strata::io {

namespace {

Json pair(Complex z) { return Json::array({z.real(), z.imag()}); }
Json pair(cb::Point p) { return Json::array({p.x, p.y}); }

Json ref_json(nw::VertexRef r) { return Json::array({r.vertex, r.copy}); }

const char* node_kind(nw::NodeKind k) {
  switch (k) {
    case nw::NodeKind::Polygon: return "polygon";
    case nw::NodeKind::Pole: return "pole";
    case nw::NodeKind::Crossing: return "crossing";
    case nw::NodeKind::Midpoint: return "midpoint";
    case nw::NodeKind::Center: return "center";
    case nw::NodeKind::Bend: return "bend";
  }
  return "?";
}

const char* segment_kind(nw::SegmentKind k) {
  switch (k) {
    case nw::SegmentKind::PolygonSide: return "side";
    case nw::SegmentKind::Colored: return "colored";
    case nw::SegmentKind::Spoke: return "spoke";
    case nw::SegmentKind::CenterLink: return "center_link";
    case nw::SegmentKind::PoleRule: return "pole_rule";
  }
  return "?";
}

const char* color_tag(nw::Color c) { return c == nw::Color::Horizontal ? "h" : "v"; }

[[noreturn]] void malformed(const std::string& what) { fail(ErrorCode::InvalidArgument, "malformed JSON: " + what); }

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    malformed(std::string("bad '") + key + "'");
  }
}

nw::VertexRef ref_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    malformed("vertex reference is [vertex, copy]");
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const qd::QuadDiff& q) {
  Json j;
  j["family"] = q.has_pole() ? "pole" : "polynomial";
  j["k"] = q.k();
  Json c = Json::array();
  for (const auto& a : q.coeffs()) c.push_back(pair(a));
  j["coeffs"] = c;
  return j;
}

Json to_json(const tr::TrajectoryStructure& s) {
  Json j;
  j["differential"] = to_json(s.qd);
  j["orientation"] = orientation_tag(s.orientation);
  j["num_sectors"] = s.num_sectors;
  Json crit = Json::array();
  for (const auto& c : s.qd.critical_points())
    crit.push_back({{"z", pair(c.z)}, {"order", c.order}});
  j["critical_points"] = crit;
  Json trs = Json::array();
  for (const auto& t : s.trajectories) {
    Json tj;
    tj["start"] = t.start_id;
    tj["direction"] = t.start_dir;
    tj["termination"] = tr::termination_name(t.termination);
    tj["sector"] = t.sector;
    tj["end"] = t.end_id;
    tj["period"] = pair(t.period);
    tj["max_phase_error"] = t.max_phase_error;
    Json pts = Json::array();
    for (const auto& p : t.points) pts.push_back(pair(p));
    tj["points"] = pts;
    trs.push_back(tj);
  }
  j["trajectories"] = trs;
  Json eps = Json::array();
  for (const auto& e : s.endpoints) eps.push_back({{"trajectory", e.trajectory}, {"sector", e.sector}, {"key", e.key}});
  j["endpoints"] = eps;
  Json hps = Json::array();
  for (const auto& h : s.half_planes)
    hps.push_back({{"sectors", {h.sector_from, h.sector_to}}, {"arc", {h.arc.from, h.arc.to}}, {"trajectories", h.trajectories}});
  j["half_planes"] = hps;
  Json strips = Json::array();
  for (const auto& st : s.strips)
    strips.push_back({{"sectors", {st.end_a, st.end_b}},
                      {"arcs", {{st.arc_a.from, st.arc_a.to}, {st.arc_b.from, st.arc_b.to}}},
                      {"boundary_critical", st.boundary_critical},
                      {"has_pole", st.has_pole},
                      {"width", st.width},
                      {"width_mismatch", st.width_mismatch},
                      {"trajectories", st.trajectories}});
  j["strips"] = strips;
  auto conns = [](const std::vector<tr::Connection>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) a.push_back({{"a", c.a}, {"b", c.b}, {"period", pair(c.period)}, {"trajectory", c.trajectory}});
    return a;
  };
  j["shorts"] = conns(s.shorts);
  j["pole_connections"] = conns(s.pole_connections);
  j["pole_endpoint"] = s.pole_endpoint;
  j["max_phase_error"] = s.max_phase_error;
  return j;
}

Json to_json(const nw::AdmissibleGraph& g) {
  Json j;
  j["orientation"] = orientation_tag(g.orientation);
  j["n_outer"] = g.n_outer;
  j["has_center"] = g.has_center;
  j["double_support"] = g.double_support;
  Json verts = Json::array();
  std::set<nw::VertexRef> refs;
  for (int v = 0; v < g.n_outer; ++v) {
    if (v == g.double_support) {
      refs.insert({v, 0});
      refs.insert({v, 1});
    } else {
      refs.insert({v, 0});
    }
  }
  if (g.has_center) refs.insert({nw::VertexRef::kCenter, 0});
  for (const auto& r : refs) {
    const auto p = nw::layout(g, r);
    verts.push_back({{"ref", ref_json(r)}, {"x", p.x}, {"y", p.y}});
  }
  j["vertices"] = verts;
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back({{"u", ref_json(e.u)}, {"v", ref_json(e.v)}, {"weight", e.weight}, {"pole", e.pole}});
  j["edges"] = edges;
  return j;
}

nw::AdmissibleGraph graph_from_json(const Json& j) {
  nw::AdmissibleGraph g;
  const auto o = get<std::string>(j, "orientation");
  if (o == "h") g.orientation = Orientation::Horizontal;
  else if (o == "v") g.orientation = Orientation::Vertical;
  else malformed("orientation is h or v");
  g.n_outer = get<int>(j, "n_outer");
  g.has_center = get<bool>(j, "has_center");
  g.double_support = get<int>(j, "double_support");
  if (!j.contains("edges") || !j["edges"].is_array()) malformed("missing 'edges'");
  for (const auto& e : j["edges"]) {
    nw::GraphEdge ge;
    if (!e.contains("u") || !e.contains("v")) malformed("edge needs u and v");
    ge.u = ref_from(e["u"]);
    ge.v = ref_from(e["v"]);
    ge.weight = get<double>(e, "weight");
    ge.pole = get<bool>(e, "pole");
    g.edges.push_back(ge);
  }
  return g;
}

Json to_json(const cb::WeightedChordDiagram& d) {
  Json j;
  j["n_plus_1"] = d.n_plus_1;
  Json chords = Json::array();
  for (const auto& c : d.chords) chords.push_back(Json::array({c.a, c.c, c.weight}));
  j["chords"] = chords;
  return j;
}

cb::WeightedChordDiagram diagram_from_json(const Json& j) {
  cb::WeightedChordDiagram d;
  d.n_plus_1 = get<int>(j, "n_plus_1");
  if (!j.contains("chords") || !j["chords"].is_array()) malformed("missing 'chords'");
  for (const auto& c : j["chords"]) {
    if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer() || !c[2].is_number())
      malformed("chord is [a, c, weight]");
    d.chords.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<double>()});
  }
  return d;
}

Json to_json(const nw::GammaDiagram& d) {
  Json j = to_json(d.diagram);
  if (d.pole_side) j["pole_side"] = Json::array({d.pole_side->a, d.pole_side->c, d.pole_side->weight});
  else j["pole_side"] = nullptr;
  Json labels = Json::array();
  for (const auto& r : d.labels) labels.push_back(ref_json(r));
  j["labels"] = labels;
  return j;
}

Json to_json(const cb::BalancedWeight& f) {
  Json j;
  j["n_plus_1"] = f.n_plus_1;
  j["values"] = f.values;
  return j;
}

Json to_json(const cb::FanFace& f) {
  Json j;
  j["n_plus_1"] = f.n_plus_1;
  Json ds = Json::array();
  for (const auto& [a, c] : f.diagonals) ds.push_back(Json::array({a, c}));
  j["diagonals"] = ds;
  j["codim"] = f.codim;
  return j;
}

Json to_json(const nw::ExtendedGraph& g) {
  Json j;
  const auto& m = g.merged;
  Json merged;
  merged["n_outer"] = m.n_outer;
  merged["has_center"] = m.has_center;
  merged["center"] = pair(m.center);
  Json poly = Json::array();
  for (const auto& v : m.polygon)
    poly.push_back({{"p", pair(v.p)}, {"color", color_tag(v.color)}, {"outer", v.outer}, {"copy", v.copy}});
  merged["polygon"] = poly;
  Json edges = Json::array();
  for (const auto& e : m.edges) {
    Json path = Json::array();
    for (const auto& p : e.path) path.push_back(pair(p));
    edges.push_back({{"a", e.a}, {"b", e.b}, {"color", color_tag(e.color)}, {"weight", e.weight}, {"pole", e.pole}, {"path", path}});
  }
  merged["edges"] = edges;
  j["merged"] = merged;
  Json nodes = Json::array();
  for (const auto& n : g.nodes) nodes.push_back({{"p", pair(n.p)}, {"kind", node_kind(n.kind)}, {"ref", n.ref}});
  j["nodes"] = nodes;
  Json segs = Json::array();
  for (const auto& s : g.segments) segs.push_back({{"a", s.a}, {"b", s.b}, {"kind", segment_kind(s.kind)}, {"edge", s.edge}});
  j["segments"] = segs;
  Json faces = Json::array();
  for (const auto& f : g.faces)
    faces.push_back({{"nodes", f.nodes},
                     {"type", std::string(1, f.type)},
                     {"identification", f.identification},
                     {"width", f.width},
                     {"height", f.height}});
  j["faces"] = faces;
  j["arrangement_faces"] = g.arrangement_faces;
  j["crossings"] = g.crossings;
  j["non_star_faces"] = g.non_star_faces;
  return j;
}

Json walls_to_json(const sc::WallMap& m) {
  Json j;
  sc::SliceSpec spec = m.spec;
  spec.threads = 0;  // scheduling does not change the result
  j["spec"] = sc::format_slice_spec(spec);
  j["failed_cells"] = m.failed_cells;
  Json walls = Json::array();
  for (const auto& w : m.walls)
    walls.push_back({{"orientation", orientation_tag(w.orientation)},
                     {"kind", w.kind == sc::WallKind::Short ? "short" : "pole_zero"},
                     {"edge", {w.i0, w.j0, w.i1, w.j1}},
                     {"u", w.u},
                     {"t", w.t},
                     {"s", w.s},
                     {"zeros", {w.zero_a, w.zero_b}},
                     {"period", pair(w.period)},
                     {"residual", w.residual},
                     {"confirmed", w.confirmed}});
  j["walls"] = walls;
  Json un = Json::array();
  for (const auto& u : m.unresolved)
    un.push_back({{"orientation", orientation_tag(u.orientation)}, {"edge", {u.i0, u.j0, u.i1, u.j1}}, {"reason", u.reason}});
  j["unresolved"] = un;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace strata::io
