// strata command-line driver. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "strata/strata.h"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

// Carries a status out of a command.
struct Failure {
  strata_status_t status;
  std::string message;
};

void check(strata_status_t st) {
  if (st != STRATA_OK) throw Failure{st, strata_last_error()};
}

[[noreturn]] void input_error(const std::string& msg) { throw Failure{STRATA_E_INVALID_ARGUMENT, msg}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  strata_string_free(s);
  return out;
}

struct RunConfig {
  strata_config_t tol{};
  std::string out_dir = ".";
  std::uint64_t seed = 20240607;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  input_error("bad number for " + key + ": '" + v + "'");
}

std::uint64_t to_seed(const std::string& what, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos, 0);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  input_error("bad seed in " + what + ": '" + v + "'");
}

void apply_config_file(const std::string& path, RunConfig& rc) {
  std::ifstream in(path);
  if (!in) throw Failure{STRATA_E_IO, "cannot read config " + path};
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) input_error("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (key == "step_tolerance") rc.tol.step_tolerance = to_double(key, v);
    else if (key == "capture_tolerance") rc.tol.capture_tolerance = to_double(key, v);
    else if (key == "wall_tolerance") rc.tol.wall_tolerance = to_double(key, v);
    else if (key == "max_steps") rc.tol.max_steps = static_cast<long>(to_double(key, v));
    else if (key == "quadrature_evaluations") rc.tol.quadrature_evaluations = static_cast<long>(to_double(key, v));
    else if (key == "out_dir") rc.out_dir = v;
    else if (key == "seed") rc.seed = to_seed("config", v);
    else input_error("unknown config key '" + key + "'");
  }
}

std::vector<double> parse_coeffs(const std::string& text, int expected) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) input_error("coefficient '" + pair + "' is not re,im");
    out.push_back(to_double("coeffs", trim(pair.substr(0, comma))));
    out.push_back(to_double("coeffs", trim(pair.substr(comma + 1))));
  }
  if (static_cast<int>(out.size()) != 2 * expected)
    input_error("expected " + std::to_string(expected) + " coefficients, got " + std::to_string(out.size() / 2));
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double("weight", trim(item)));
  return out;
}

void write_file(const RunConfig& rc, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(rc.out_dir);
  const auto path = std::filesystem::path(rc.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw Failure{STRATA_E_IO, "cannot write " + path.string()};
}

struct QdDeleter {
  void operator()(strata_qd_t* p) const { strata_qd_free(p); }
};
struct StructureDeleter {
  void operator()(strata_structure_t* p) const { strata_structure_free(p); }
};
struct GraphDeleter {
  void operator()(strata_graph_t* p) const { strata_graph_free(p); }
};
struct ExtendedDeleter {
  void operator()(strata_extended_t* p) const { strata_extended_free(p); }
};
struct WallMapDeleter {
  void operator()(strata_wallmap_t* p) const { strata_wallmap_free(p); }
};
using QdPtr = std::unique_ptr<strata_qd_t, QdDeleter>;
using StructurePtr = std::unique_ptr<strata_structure_t, StructureDeleter>;
using GraphPtr = std::unique_ptr<strata_graph_t, GraphDeleter>;

struct DifferentialArgs {
  int k = 0;
  std::string coeffs;
  std::string family = "pole";
};

QdPtr make_qd(const DifferentialArgs& a) {
  const auto c = parse_coeffs(a.coeffs, a.k);
  strata_qd_t* q = nullptr;
  if (a.family == "pole") check(strata_qd_create(a.k, c.data(), &q));
  else check(strata_qd_create_polynomial(a.k, c.data(), &q));
  return QdPtr(q);
}

strata_orientation_t orientation(const std::string& o) { return o == "v" ? STRATA_VERTICAL : STRATA_HORIZONTAL; }

GraphPtr graph_for(const strata_qd_t* q, strata_orientation_t o, const RunConfig& rc) {
  strata_structure_t* s = nullptr;
  check(strata_trace(q, o, &rc.tol, &s));
  StructurePtr sp(s);
  strata_graph_t* g = nullptr;
  check(strata_graph_build(sp.get(), &g));
  return GraphPtr(g);
}

int cmd_trace(const DifferentialArgs& a, const std::string& o, const RunConfig& rc) {
  QdPtr q = make_qd(a);
  strata_structure_t* s = nullptr;
  check(strata_trace(q.get(), orientation(o), &rc.tol, &s));
  StructurePtr sp(s);
  char* text = nullptr;
  check(strata_structure_json(sp.get(), &text));
  write_file(rc, "structure.json", take(text));
  check(strata_structure_svg(sp.get(), &text));
  write_file(rc, "structure.svg", take(text));
  int sectors, hp, strips, shorts, pc;
  check(strata_structure_counts(sp.get(), &sectors, &hp, &strips, &shorts, &pc));
  std::cout << "orientation " << o << ": " << sectors << " principal directions, " << hp << " half-planes, " << strips
            << " strips, " << shorts << " short trajectories, " << pc << " pole-zero connections\n";
  return 0;
}

int cmd_graph(const DifferentialArgs& a, bool full, const RunConfig& rc) {
  QdPtr q = make_qd(a);
  GraphPtr gh = graph_for(q.get(), STRATA_HORIZONTAL, rc);
  GraphPtr gv = graph_for(q.get(), STRATA_VERTICAL, rc);
  char* text = nullptr;
  for (auto [g, tag] : {std::pair{gh.get(), "h"}, std::pair{gv.get(), "v"}}) {
    if (full) {
      check(strata_graph_json(g, &text));
      write_file(rc, std::string("g") + tag + ".json", take(text));
    }
    check(strata_gamma_json(g, &text));
    write_file(rc, std::string("gamma_") + tag + ".json", take(text));
  }
  if (full) {
    strata_extended_t* ext = nullptr;
    check(strata_extended_build(gh.get(), gv.get(), &ext));
    std::unique_ptr<strata_extended_t, ExtendedDeleter> ep(ext);
    check(strata_extended_json(ep.get(), &text));
    write_file(rc, "g_ext.json", take(text));
    check(strata_extended_svg(ep.get(), &text));
    write_file(rc, "g_ext.svg", take(text));
  }
  int sh = 0, sv = 0;
  check(strata_graph_has_short(gh.get(), &sh));
  check(strata_graph_has_short(gv.get(), &sv));
  std::cout << "has_short h=" << (sh ? "true" : "false") << " v=" << (sv ? "true" : "false") << "\n";
  return 0;
}

struct StasheffArgs {
  int n = 0;
  bool count = false, list = false, flips = false, random = false, degenerate = false;
  std::string weight;
};

int cmd_stasheff(const StasheffArgs& a, const RunConfig& rc) {
  if (a.n < 3 || a.n > 12) input_error("--n must be in [3, 12]");
  bool any = false;
  if (a.count) {
    std::uint64_t c = 0;
    check(strata_triangulation_count(a.n, &c));
    std::cout << c << "\n";
    any = true;
  }
  if (a.flips) {
    std::uint64_t e = 0;
    check(strata_flip_graph_edges(a.n, &e));
    std::cout << "flip graph edges: " << e << "\n";
    any = true;
  }
  if (a.list) {
    char* text = nullptr;
    check(strata_triangulations_json(a.n, &text));
    std::cout << take(text);
    any = true;
  }
  if (a.random) {
    std::vector<double> v(a.n + 1);
    check(strata_random_weight(a.n + 1, rc.seed, a.degenerate ? 1 : 0, v.data()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v[i]);
      std::cout << (i ? "," : "") << buf;
    }
    std::cout << "\n";
    any = true;
  }
  if (!a.weight.empty()) {
    const auto v = parse_reals(a.weight);
    if (static_cast<int>(v.size()) != a.n + 1) input_error("--weight needs n + 1 values");
    char* text = nullptr;
    check(strata_fan_face_json(v.data(), static_cast<int>(v.size()), &text));
    const std::string face = take(text);
    std::cout << face;
    write_file(rc, "fan_face.json", face);
    check(strata_weight_to_diagram_json(v.data(), static_cast<int>(v.size()), &text));
    write_file(rc, "diagram.json", take(text));
    any = true;
  }
  if (!any) input_error("nothing to do: pass --count, --list, --flips, --random or --weight");
  return 0;
}

int cmd_scan(const std::string& spec_path, int threads, const RunConfig& rc) {
  std::ifstream in(spec_path);
  if (!in) throw Failure{STRATA_E_IO, "cannot read spec " + spec_path};
  std::stringstream ss;
  ss << in.rdbuf();
  strata_wallmap_t* m = nullptr;
  check(strata_scan(ss.str().c_str(), threads, &rc.tol, &m));
  std::unique_ptr<strata_wallmap_t, WallMapDeleter> mp(m);
  char* text = nullptr;
  check(strata_wallmap_csv(mp.get(), &text));
  write_file(rc, "wallmap.csv", take(text));
  check(strata_wallmap_walls_json(mp.get(), &text));
  write_file(rc, "walls.json", take(text));
  unsigned char* data = nullptr;
  std::size_t size = 0;
  check(strata_wallmap_ppm(mp.get(), 8, &data, &size));
  const std::string img(reinterpret_cast<const char*>(data), size);
  strata_buffer_free(data);
  write_file(rc, "wallmap.ppm", img);
  int cells, sigs, shorts, poles, unresolved, failed;
  check(strata_wallmap_counts(mp.get(), &cells, &sigs, &shorts, &poles, &unresolved, &failed));
  std::cout << cells << " grid points, " << sigs << " distinct signatures, " << shorts << " short walls, " << poles
            << " pole-zero walls, " << unresolved << " unresolved edges, " << failed << " failed cells\n";
  return 0;
}

int cmd_selftest(const RunConfig& rc) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
    if (!ok) ++failures;
  };
  const std::uint64_t expected[] = {2, 5, 14, 42, 132, 429};
  bool catalan = true;
  for (int n = 3; n <= 8; ++n) {
    std::uint64_t c = 0;
    catalan = catalan && strata_triangulation_count(n, &c) == STRATA_OK && c == expected[n - 3];
  }
  report("triangulation counts n=3..8", catalan);

  int degenerate_ok = 0, total = 0;
  for (int n_plus_1 = 4; n_plus_1 <= 9; ++n_plus_1)
    for (int r = 0; r < 10; ++r) {
      std::vector<double> v(n_plus_1);
      const bool deg = r % 2 == 1;
      if (strata_random_weight(n_plus_1, rc.seed + 1000 * n_plus_1 + r, deg, v.data()) != STRATA_OK) continue;
      char* text = nullptr;
      if (strata_fan_face_json(v.data(), n_plus_1, &text) != STRATA_OK) continue;
      const std::string j = take(text);
      ++total;
      if ((j.find("\"degenerate\": true") != std::string::npos) == deg) ++degenerate_ok;
    }
  report("degeneracy of seeded random weights", total == 60 && degenerate_ok == total,
         std::to_string(degenerate_ok) + "/" + std::to_string(total));

  const double cubic[] = {-1, 0, 0, 0, 0, 0};
  strata_qd_t* q = nullptr;
  bool fixture = strata_qd_create(3, cubic, &q) == STRATA_OK;
  QdPtr qp(q);
  for (auto o : {STRATA_HORIZONTAL, STRATA_VERTICAL}) {
    if (!fixture) break;
    try {
      GraphPtr g = graph_for(qp.get(), o, rc);
      int sh = 0, adm = 0;
      check(strata_graph_has_short(g.get(), &sh));
      check(strata_graph_check(g.get(), &adm, nullptr));
      fixture = sh == 1 && adm == 1;
    } catch (const Failure&) {
      fixture = false;
    }
  }
  report("(z^3-1)/z has shorts in both orientations", fixture);
  return failures == 0 ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strata: trajectory structures, chord diagrams and wall scans of quadratic differentials"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  strata_config_default(&rc.tol);
  std::string config_path;
  std::optional<double> step_tol, capture_tol, wall_tol;
  std::optional<long> max_steps, quad_evals;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "key = value run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed (STRATA_SEED overrides)");
  app.add_option("--step-tol", step_tol, "tracer step tolerance");
  app.add_option("--capture-tol", capture_tol, "capture tolerance");
  app.add_option("--wall-tol", wall_tol, "wall refinement tolerance |dt|");
  app.add_option("--max-steps", max_steps, "tracer step budget");
  app.add_option("--quad-evals", quad_evals, "quadrature evaluation budget");

  DifferentialArgs diff;
  std::string orient = "h";
  auto add_differential = [&](CLI::App* sub) {
    sub->add_option("--k", diff.k, "numerator degree (polynomial degree for --family polynomial)")->required();
    sub->add_option("--coeffs", diff.coeffs, "coefficients a_0..a_{k-1} as \"re,im;re,im;...\"")
        ->required()
        ->allow_extra_args(false);
    sub->add_option("--family", diff.family, "pole or polynomial")->check(CLI::IsMember({"pole", "polynomial"}));
  };
  auto* trace = app.add_subcommand("trace", "trace a trajectory structure");
  add_differential(trace);
  trace->add_option("--orientation", orient, "h or v")->check(CLI::IsMember({"h", "v"}));
  auto* graph = app.add_subcommand("graph", "admissible graphs, chord diagrams and the extended graph");
  add_differential(graph);
  auto* diagram = app.add_subcommand("diagram", "chord diagrams of both orientations");
  add_differential(diagram);

  StasheffArgs st;
  auto* stasheff = app.add_subcommand("stasheff", "associahedron and Stasheff fan queries");
  stasheff->add_option("--n", st.n, "polygon has n + 1 vertices")->required();
  stasheff->add_flag("--count", st.count, "number of triangulations");
  stasheff->add_flag("--list", st.list, "all triangulations as JSON");
  stasheff->add_flag("--flips", st.flips, "number of flip graph edges");
  stasheff->add_flag("--random", st.random, "print a seeded random balanced weight");
  stasheff->add_flag("--degenerate", st.degenerate, "with --random: a degenerate weight");
  stasheff->add_option("--weight", st.weight, "classify a balanced weight \"f0,f1,...\"");

  std::string spec_path;
  int threads = 0;
  auto* scan = app.add_subcommand("scan", "scan a parameter slice for walls");
  scan->add_option("spec", spec_path, "slice spec file")->required();
  scan->add_option("--threads", threads, "worker threads (default: spec, then hardware)");

  auto* selftest = app.add_subcommand("selftest", "quick seeded consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, rc);
    if (step_tol) rc.tol.step_tolerance = *step_tol;
    if (capture_tol) rc.tol.capture_tolerance = *capture_tol;
    if (wall_tol) rc.tol.wall_tolerance = *wall_tol;
    if (max_steps) rc.tol.max_steps = *max_steps;
    if (quad_evals) rc.tol.quadrature_evaluations = *quad_evals;
    if (out_dir) rc.out_dir = *out_dir;
    if (seed) rc.seed = *seed;
    if (const char* env = std::getenv("STRATA_SEED"); env && *env) rc.seed = to_seed("STRATA_SEED", env);
    check(strata_config_validate(&rc.tol));

    if (trace->parsed()) return cmd_trace(diff, orient, rc);
    if (graph->parsed()) return cmd_graph(diff, true, rc);
    if (diagram->parsed()) return cmd_graph(diff, false, rc);
    if (stasheff->parsed()) return cmd_stasheff(st, rc);
    if (scan->parsed()) return cmd_scan(spec_path, threads, rc);
    if (selftest->parsed()) return cmd_selftest(rc);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return strata_status_is_input_error(f.status) ? kExitInput : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
