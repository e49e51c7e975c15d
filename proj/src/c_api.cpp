#include "strata/strata.h"

#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

#include "strata/io.hpp"

struct strata_qd {
  strata::qd::QuadDiff q;
};
struct strata_structure {
  strata::tr::TrajectoryStructure s;
};
struct strata_graph {
  strata::nw::AdmissibleGraph g;
};
struct strata_extended {
  strata::nw::ExtendedGraph g;
};
struct strata_wallmap {
  strata::sc::WallMap m;
};

namespace {

using namespace strata;

thread_local std::string last_error;

strata_status_t fail_with(strata_status_t st, const std::string& msg) {
  last_error = msg;
  return st;
}

// Runs f, translating exceptions into status codes.
template <class F>
strata_status_t guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return STRATA_OK;
  } catch (const Error& e) {
    return fail_with(static_cast<strata_status_t>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail_with(STRATA_E_INVALID_ARGUMENT, std::string("InvalidArgument: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail_with(STRATA_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail_with(STRATA_E_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Orientation orientation_of(strata_orientation_t o) {
  require(o == STRATA_HORIZONTAL || o == STRATA_VERTICAL, "orientation");
  return o == STRATA_HORIZONTAL ? Orientation::Horizontal : Orientation::Vertical;
}

std::vector<Complex> pairs(const double* v, int n) {
  require(n >= 0 && (n == 0 || v), "coefficient array");
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) out.emplace_back(v[2 * i], v[2 * i + 1]);
  return out;
}

tr::TraceConfig trace_config(const strata_config_t* c) {
  tr::TraceConfig t;
  if (!c) return t;
  if (strata_config_validate(c) != STRATA_OK) fail(ErrorCode::InvalidArgument, last_error);
  t.step_tolerance = c->step_tolerance;
  t.capture_tolerance = c->capture_tolerance;
  t.max_steps = c->max_steps;
  t.quadrature.max_evaluations = c->quadrature_evaluations;
  return t;
}

cb::BalancedWeight balanced_from(const double* values, int count) {
  require(values && count >= 4 && count <= 13, "weight needs 4 to 13 values");
  std::vector<double> v(values, values + count);
  for (double x : v) require(std::isfinite(x), "weight values must be finite");
  if (!cb::is_balanced(v, 1e-9)) fail(ErrorCode::InvalidArgument, "weight is not balanced (residual above 1e-9)");
  return cb::project_balanced(v);
}

}  // namespace

extern "C" {

const char* strata_version(void) { return "1.0.0"; }
const char* strata_last_error(void) { return last_error.c_str(); }

const char* strata_status_name(strata_status_t status) {
  if (status == STRATA_OK) return "Ok";
  if (status == STRATA_E_INTERNAL) return "Internal";
  return error_code_name(static_cast<ErrorCode>(status));
}

int strata_status_is_input_error(strata_status_t status) {
  if (status == STRATA_OK || status == STRATA_E_INTERNAL) return 0;
  return Error(static_cast<ErrorCode>(status), "").is_input_error() ? 1 : 0;
}

void strata_string_free(char* s) { std::free(s); }
void strata_buffer_free(unsigned char* data) { std::free(data); }

void strata_config_default(strata_config_t* config) {
  if (!config) return;
  const tr::TraceConfig t;
  config->step_tolerance = t.step_tolerance;
  config->capture_tolerance = t.capture_tolerance;
  config->wall_tolerance = sc::SliceSpec{}.wall_tolerance;
  config->max_steps = t.max_steps;
  config->quadrature_evaluations = t.quadrature.max_evaluations;
}

strata_status_t strata_config_validate(const strata_config_t* c) {
  if (!c) return fail_with(STRATA_E_INVALID_ARGUMENT, "InvalidArgument: null config");
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(c->step_tolerance) || !positive(c->capture_tolerance) || !positive(c->wall_tolerance))
    return fail_with(STRATA_E_INVALID_ARGUMENT, "InvalidArgument: tolerances must be positive");
  if (c->max_steps <= 0 || c->quadrature_evaluations <= 0)
    return fail_with(STRATA_E_INVALID_ARGUMENT, "InvalidArgument: budgets must be positive");
  return STRATA_OK;
}

strata_status_t strata_qd_create(int k, const double* coeffs, strata_qd_t** out) {
  return guarded([&] {
    require(out, "out");
    require(k >= 2 && k <= 64, "k must be in [2, 64]");
    *out = new strata_qd{qd::QuadDiff::make(k, pairs(coeffs, k))};
  });
}

strata_status_t strata_qd_create_polynomial(int degree, const double* coeffs, strata_qd_t** out) {
  return guarded([&] {
    require(out, "out");
    require(degree >= 1 && degree <= 64, "degree must be in [1, 64]");
    *out = new strata_qd{qd::QuadDiff::make_polynomial(pairs(coeffs, degree))};
  });
}

void strata_qd_free(strata_qd_t* q) { delete q; }

strata_status_t strata_qd_zeros(const strata_qd_t* q, double* out, int capacity, int* count) {
  return guarded([&] {
    require(q && count, "null argument");
    const auto& z = q->q.zeros();
    *count = static_cast<int>(z.size());
    for (int i = 0; i < capacity && i < *count; ++i) {
      out[2 * i] = z[i].location.real();
      out[2 * i + 1] = z[i].location.imag();
    }
  });
}

strata_status_t strata_qd_period(const strata_qd_t* q, const double* points, int n, double hint_re, double hint_im,
                                 const strata_config_t* config, double out[2]) {
  return guarded([&] {
    require(q && out && n >= 2, "period needs a differential and at least two points");
    const tr::TraceConfig cfg = trace_config(config);
    const auto r = qd::period(q->q, qd::Path(pairs(points, n)), Complex(hint_re, hint_im), cfg.quadrature);
    out[0] = r.value.real();
    out[1] = r.value.imag();
  });
}

strata_status_t strata_qd_json(const strata_qd_t* q, char** out) {
  return guarded([&] {
    require(q && out, "null argument");
    *out = dup_string(io::dump(io::to_json(q->q)));
  });
}

strata_status_t strata_trace(const strata_qd_t* q, strata_orientation_t o, const strata_config_t* config,
                             strata_structure_t** out) {
  return guarded([&] {
    require(q && out, "null argument");
    *out = new strata_structure{tr::build_structure(q->q, orientation_of(o), trace_config(config))};
  });
}

void strata_structure_free(strata_structure_t* s) { delete s; }

strata_status_t strata_structure_counts(const strata_structure_t* s, int* sectors, int* half_planes, int* strips,
                                        int* shorts, int* pole_connections) {
  return guarded([&] {
    require(s, "null structure");
    if (sectors) *sectors = s->s.num_sectors;
    if (half_planes) *half_planes = static_cast<int>(s->s.half_planes.size());
    if (strips) *strips = static_cast<int>(s->s.strips.size());
    if (shorts) *shorts = static_cast<int>(s->s.shorts.size());
    if (pole_connections) *pole_connections = static_cast<int>(s->s.pole_connections.size());
  });
}

strata_status_t strata_structure_json(const strata_structure_t* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = dup_string(io::dump(io::to_json(s->s)));
  });
}

strata_status_t strata_structure_svg(const strata_structure_t* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = dup_string(io::structure_svg(s->s));
  });
}

strata_status_t strata_find_short(const strata_qd_t* q, strata_orientation_t o, double tol,
                                  const strata_config_t* config, int* count) {
  return guarded([&] {
    require(q && count, "null argument");
    require(std::isfinite(tol) && tol > 0, "tolerance must be positive");
    *count = static_cast<int>(tr::find_short_trajectories(q->q, orientation_of(o), tol, trace_config(config)).size());
  });
}

strata_status_t strata_graph_build(const strata_structure_t* s, strata_graph_t** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = new strata_graph{nw::build_graph(s->s)};
  });
}

strata_status_t strata_graph_from_json(const char* json, strata_graph_t** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new strata_graph{io::graph_from_json(io::Json::parse(json))};
  });
}

void strata_graph_free(strata_graph_t* g) { delete g; }

strata_status_t strata_graph_json(const strata_graph_t* g, char** out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = dup_string(io::dump(io::to_json(g->g)));
  });
}

strata_status_t strata_graph_check(const strata_graph_t* g, int* admissible, char** reason) {
  return guarded([&] {
    require(g && admissible, "null argument");
    std::string why;
    *admissible = nw::check_admissible(g->g, &why) ? 1 : 0;
    if (reason) *reason = dup_string(why);
  });
}

strata_status_t strata_graph_has_short(const strata_graph_t* g, int* has_short) {
  return guarded([&] {
    require(g && has_short, "null argument");
    *has_short = nw::has_short(g->g) ? 1 : 0;
  });
}

strata_status_t strata_graph_signature(const strata_graph_t* g, char** out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = dup_string(nw::signature(g->g));
  });
}

strata_status_t strata_gamma_json(const strata_graph_t* g, char** out) {
  return guarded([&] {
    require(g && out, "null argument");
    io::Json j;
    j["orientation"] = orientation_tag(g->g.orientation);
    j["has_short"] = nw::has_short(g->g);
    j["signature"] = nw::signature(g->g);
    j["diagram"] = io::to_json(nw::to_chord_diagram(g->g));
    *out = dup_string(io::dump(j));
  });
}

strata_status_t strata_extended_build(const strata_graph_t* gh, const strata_graph_t* gv, strata_extended_t** out) {
  return guarded([&] {
    require(gh && gv && out, "null argument");
    require(gh->g.orientation == Orientation::Horizontal && gv->g.orientation == Orientation::Vertical,
            "expected a horizontal and a vertical graph");
    *out = new strata_extended{nw::extend_graph(nw::merge_graphs(gh->g, gv->g))};
  });
}

void strata_extended_free(strata_extended_t* g) { delete g; }

strata_status_t strata_extended_json(const strata_extended_t* g, char** out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = dup_string(io::dump(io::to_json(g->g)));
  });
}

strata_status_t strata_extended_svg(const strata_extended_t* g, char** out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = dup_string(io::extended_svg(g->g));
  });
}

strata_status_t strata_triangulation_count(int n, uint64_t* count) {
  return guarded([&] {
    require(count, "null argument");
    require(n >= 3 && n <= 12, "n must be in [3, 12]");
    *count = cb::enumerate_triangulations(n).size();
  });
}

strata_status_t strata_triangulations_json(int n, char** out) {
  return guarded([&] {
    require(out, "null argument");
    require(n >= 3 && n <= 12, "n must be in [3, 12]");
    io::Json all = io::Json::array();
    for (const auto& t : cb::enumerate_triangulations(n)) {
      io::Json ds = io::Json::array();
      for (const auto& [a, c] : t.diagonals) ds.push_back(io::Json::array({a, c}));
      all.push_back(ds);
    }
    io::Json j;
    j["n_plus_1"] = n + 1;
    j["triangulations"] = all;
    *out = dup_string(io::dump(j));
  });
}

strata_status_t strata_flip_graph_edges(int n, uint64_t* edges) {
  return guarded([&] {
    require(edges, "null argument");
    require(n >= 3 && n <= 12, "n must be in [3, 12]");
    const auto ts = cb::enumerate_triangulations(n);
    const std::set<cb::Triangulation> all(ts.begin(), ts.end());
    std::uint64_t twice = 0;
    for (const auto& t : ts)
      for (const auto& d : t.diagonals)
        if (all.count(cb::flip(t, d))) ++twice;
    *edges = twice / 2;
  });
}

strata_status_t strata_fan_face_json(const double* values, int count, char** out) {
  return guarded([&] {
    require(out, "null argument");
    const cb::BalancedWeight f = balanced_from(values, count);
    const cb::FanFace face = cb::fan_face(f);
    io::Json j;
    j["degenerate"] = cb::is_degenerate(f).degenerate;
    j["apex"] = face.diagonals.empty();
    j["face"] = io::to_json(face);
    *out = dup_string(io::dump(j));
  });
}

strata_status_t strata_weight_to_diagram_json(const double* values, int count, char** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = dup_string(io::dump(io::to_json(cb::weight_to_diagram(balanced_from(values, count)))));
  });
}

strata_status_t strata_diagram_to_weight_json(const char* diagram_json, char** out) {
  return guarded([&] {
    require(diagram_json && out, "null argument");
    const auto d = io::diagram_from_json(io::Json::parse(diagram_json));
    *out = dup_string(io::dump(io::to_json(cb::diagram_to_weight(d))));
  });
}

strata_status_t strata_random_weight(int n_plus_1, uint64_t seed, int degenerate, double* values) {
  return guarded([&] {
    require(values, "null argument");
    require(n_plus_1 >= 4 && n_plus_1 <= 13, "n_plus_1 must be in [4, 13]");
    std::mt19937_64 rng(seed);
    const auto f = degenerate ? cb::random_degenerate_weight(n_plus_1, rng) : cb::random_balanced_weight(n_plus_1, rng);
    std::copy(f.values.begin(), f.values.end(), values);
  });
}

strata_status_t strata_scan(const char* spec_text, int threads, const strata_config_t* config, strata_wallmap_t** out) {
  return guarded([&] {
    require(spec_text && out, "null argument");
    sc::SliceSpec spec = sc::parse_slice_spec(spec_text);
    if (threads > 0) spec.threads = threads;
    if (config) {
      spec.trace = trace_config(config);
      spec.wall_tolerance = config->wall_tolerance;
    }
    *out = new strata_wallmap{sc::scan_slice(spec)};
  });
}

void strata_wallmap_free(strata_wallmap_t* m) { delete m; }

strata_status_t strata_wallmap_counts(const strata_wallmap_t* m, int* cells, int* signatures, int* short_walls,
                                      int* pole_zero_walls, int* unresolved, int* failed_cells) {
  return guarded([&] {
    require(m, "null wall map");
    std::set<std::pair<std::string, std::string>> sigs;
    for (const auto& c : m->m.cells) {
      auto plain = [](const std::string& l) { return l != sc::kWall && l != sc::kSingular && l != sc::kFailed; };
      if (plain(c.h.label) && plain(c.v.label)) sigs.insert({c.h.label, c.v.label});
    }
    int s = 0, p = 0;
    for (const auto& w : m->m.walls) (w.kind == sc::WallKind::Short ? s : p)++;
    if (cells) *cells = static_cast<int>(m->m.cells.size());
    if (signatures) *signatures = static_cast<int>(sigs.size());
    if (short_walls) *short_walls = s;
    if (pole_zero_walls) *pole_zero_walls = p;
    if (unresolved) *unresolved = static_cast<int>(m->m.unresolved.size());
    if (failed_cells) *failed_cells = m->m.failed_cells;
  });
}

strata_status_t strata_wallmap_csv(const strata_wallmap_t* m, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup_string(io::wallmap_csv(m->m));
  });
}

strata_status_t strata_wallmap_walls_json(const strata_wallmap_t* m, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup_string(io::dump(io::walls_to_json(m->m)));
  });
}

strata_status_t strata_wallmap_ppm(const strata_wallmap_t* m, int cell, unsigned char** data, size_t* size) {
  return guarded([&] {
    require(m && data && size, "null argument");
    const std::string img = io::wallmap_ppm(m->m, cell);
    auto* buf = static_cast<unsigned char*>(std::malloc(img.size()));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, img.data(), img.size());
    *data = buf;
    *size = img.size();
  });
}

}  // extern "C"
