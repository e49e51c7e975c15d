// Acceptance suite: one PASS/FAIL line per criterion. Usage: acceptance <strata-cli> <data-dir>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "period_oracle.hpp"
#include "strata/combinat.hpp"
#include "strata/network.hpp"
#include "strata/scanner.hpp"
#include "strata/tracer.hpp"

using namespace strata;
namespace fs = std::filesystem;
using qd::QuadDiff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

std::uint64_t catalan_oracle(int m) {
  // c_m = binom(2m, m) / (m + 1) by Pascal's triangle
  std::vector<std::vector<std::uint64_t>> C(2 * m + 1, std::vector<std::uint64_t>(2 * m + 1, 0));
  for (int i = 0; i <= 2 * m; ++i) {
    C[i][0] = 1;
    for (int j = 1; j <= i; ++j) C[i][j] = C[i - 1][j - 1] + C[i - 1][j];
  }
  return C[2 * m][m] / (m + 1);
}

std::vector<cb::Diagonal> chord_set(const cb::WeightedChordDiagram& d) {
  std::vector<cb::Diagonal> s;
  for (const auto& c : d.chords) s.push_back(cb::normalize(c.a, c.c));
  std::sort(s.begin(), s.end());
  return s;
}

bool gamma_incomplete(const nw::AdmissibleGraph& g) {
  const auto d = nw::to_chord_diagram(g);
  return !cb::is_complete(d.diagram.n_plus_1, chord_set(d.diagram));
}

std::vector<Complex> random_coeffs(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  std::vector<Complex> c;
  for (int i = 0; i < k; ++i) c.push_back({u(rng), u(rng)});
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1 ----
Outcome catalan_counts() {
  Outcome o;
  const std::uint64_t expected[] = {2, 5, 14, 42, 132, 429};
  for (int n = 3; n <= 8; ++n) {
    const auto ts = cb::enumerate_triangulations(n);
    expect(o, ts.size() == catalan_oracle(n - 1), "n=" + std::to_string(n) + " count " + std::to_string(ts.size()));
    expect(o, ts.size() == expected[n - 3], "n=" + std::to_string(n) + " table value");
  }
  return o;
}

// ---- 2 ----
Outcome fan_equivalence() {
  Outcome o;
  std::mt19937_64 rng(20240607);
  int disagreements = 0, checked = 0;
  for (int n = 3; n <= 8; ++n) {
    const int N = n + 1;
    for (int trial = 0; trial < 1100; ++trial) {
      const auto f = trial < 1000 ? cb::random_balanced_weight(N, rng) : cb::random_degenerate_weight(N, rng);
      const bool deg = cb::is_degenerate(f).degenerate;
      const bool hull_incomplete = !cb::is_complete(N, cb::upper_hull_subdivision(f).diagonals);
      const bool diagram_incomplete = !cb::is_complete(N, chord_set(cb::weight_to_diagram(f)));
      ++checked;
      if (deg != hull_incomplete || deg != diagram_incomplete) ++disagreements;
      if (trial >= 1000 && !deg) ++disagreements;
    }
  }
  expect(o, disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.detail = o.pass ? std::to_string(checked) + " weights" : o.detail;
  return o;
}

// ---- 3 ----
Outcome round_trip() {
  Outcome o;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int N = 4 + trial % 6;
    cb::WeightedChordDiagram d;
    if (trial % 4 == 0) {
      d = cb::weight_to_diagram(cb::random_degenerate_weight(N, rng));
    } else {
      d = cb::weight_to_diagram(cb::random_balanced_weight(N, rng));
      for (auto& c : d.chords) c.weight = w(rng);
      if (trial % 4 == 3 && !d.chords.empty()) d.chords.erase(d.chords.begin() + trial % d.chords.size());
    }
    const auto back = cb::weight_to_diagram(cb::diagram_to_weight(d));
    if (chord_set(back) != chord_set(d)) {
      expect(o, false, "chord set changed at trial " + std::to_string(trial));
      continue;
    }
    for (std::size_t i = 0; i < d.chords.size(); ++i) worst = std::max(worst, std::abs(back.chords[i].weight - d.chords[i].weight));
  }
  expect(o, worst <= 1e-8, "weight error " + std::to_string(worst));
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "max weight error %.2e", worst);
    o.detail = buf;
  }
  return o;
}

// ---- 4 ----
Outcome cubic_fixture() {
  Outcome o;
  const auto q = QuadDiff::make(3, {-1.0, 0.0, 0.0});
  for (auto orient : {Orientation::Horizontal, Orientation::Vertical}) {
    const std::string tag = orientation_tag(orient);
    const auto s = tr::build_structure(q, orient);
    expect(o, s.num_sectors == 4, tag + ": principal directions " + std::to_string(s.num_sectors));
    expect(o, s.half_planes.size() == 4, tag + ": half-planes " + std::to_string(s.half_planes.size()));
    const auto g = nw::build_graph(s);
    std::string reason;
    expect(o, nw::check_admissible(g, &reason), tag + ": not admissible: " + reason);
    const auto o_edges = std::count_if(g.edges.begin(), g.edges.end(), [](const nw::GraphEdge& e) { return e.pole; });
    expect(o, o_edges == 2, tag + ": O edges " + std::to_string(o_edges));
    expect(o, gamma_incomplete(g), tag + ": complete triangulation");
    expect(o, nw::has_short(g), tag + ": has_short false");
  }
  return o;
}

// ---- 5 ----
Outcome detector_consistency() {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::normal_distribution<double> n01;
  int accepted = 0, rejected = 0, agree = 0, with_short = 0;
  while (accepted < 50 && rejected < 500) {
    const int k = 2 + (accepted + rejected) % 2;
    auto c = random_coeffs(rng, k);
    try {
      const auto q = QuadDiff::make(k, c);
      // generic: signatures unchanged under two small perturbations
      bool stable = true;
      std::map<Orientation, nw::AdmissibleGraph> graphs;
      for (auto orient : {Orientation::Horizontal, Orientation::Vertical}) {
        graphs.emplace(orient, nw::build_graph(tr::build_structure(q, orient)));
        for (int p = 0; p < 2 && stable; ++p) {
          auto c2 = c;
          for (auto& a : c2) a += 1e-4 * Complex(n01(rng), n01(rng));
          const auto g2 = nw::build_graph(tr::build_structure(QuadDiff::make(k, c2), orient));
          stable = nw::signature(g2) == nw::signature(graphs.at(orient));
        }
      }
      if (!stable) {
        ++rejected;
        continue;
      }
      ++accepted;
      for (auto orient : {Orientation::Horizontal, Orientation::Vertical}) {
        const bool comb = nw::has_short(graphs.at(orient));
        const bool numeric = !tr::find_short_trajectories(q, orient).empty();
        with_short += comb;
        if (comb == numeric) ++agree;
      }
    } catch (const Error&) {
      ++rejected;
    }
  }
  expect(o, accepted == 50, "only " + std::to_string(accepted) + " generic samples");
  expect(o, agree == 2 * accepted, std::to_string(2 * accepted - agree) + " disagreements");
  if (o.pass)
    o.detail = std::to_string(agree) + "/" + std::to_string(2 * accepted) + " agree, " + std::to_string(rejected) +
               " near-wall samples skipped, " + std::to_string(with_short) + " with a short";
  return o;
}

// ---- 6 ----
Outcome bundled_walls(const std::string& data_dir) {
  Outcome o;
  const auto spec = sc::parse_slice_spec(read_file(fs::path(data_dir) / "k2_demo.spec"));
  const auto m = sc::scan_slice(spec);
  int shorts = 0, pole_zero = 0, pole_zero_ok = 0;
  double worst = 0.0;
  for (const auto& w : m.walls) {
    const auto c = spec.coefficients(w.t, w.s);
    const auto q = sc::make_differential(spec.family, spec.k, c);
    const bool horiz = w.orientation == Orientation::Horizontal;
    const Complex za = q.zeros()[w.zero_a].location;
    if (w.kind == sc::WallKind::PoleZero) {
      ++pole_zero;
      pole_zero_ok += oracle::pole_wall_residual(c, za, horiz) <= 1e-6;
      continue;
    }
    ++shorts;
    const Complex zb = q.zeros()[w.zero_b].location;
    const double r = oracle::wall_residual(c, true, za, zb, horiz);
    worst = std::max(worst, r);
    expect(o, r <= 1e-6, "oracle residual " + std::to_string(r) + " at t=" + std::to_string(w.t) + " s=" + std::to_string(w.s));
    try {
      const auto g = nw::build_graph(tr::build_structure(q, w.orientation));
      expect(o, gamma_incomplete(g), "complete triangulation at t=" + std::to_string(w.t) + " s=" + std::to_string(w.s));
    } catch (const Error& e) {
      expect(o, false, std::string("re-trace failed: ") + e.what());
    }
  }
  expect(o, shorts >= 1, "no short walls");
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d short walls, max residual %.1e; %d/%d pole-zero walls within 1e-6; %zu unresolved",
                  shorts, worst, pole_zero_ok, pole_zero, m.unresolved.size());
    o.detail = buf;
  }
  return o;
}

// ---- 7 ----
// Perpendicular distance from v to the polyline of t, measured in the flat coordinate.
double distance_to_curve(const QuadDiff& q, const tr::Trajectory& t, Complex v) {
  std::size_t best = 1;
  for (std::size_t i = 1; i + 1 < t.points.size(); ++i)
    if (std::abs(t.points[i] - v) < std::abs(t.points[best] - v)) best = i;
  const Complex b = t.points[best];
  if (std::abs(b - v) < 1e-14) return 0.0;
  Complex dw = qd::short_segment_integral(q, b, v, std::sqrt(q.q(b)));
  if (t.orientation == Orientation::Vertical) dw *= Complex(0, -1);
  return std::abs(dw.imag()) / std::abs(std::sqrt(q.q(v)));
}

int nearest(const std::vector<Complex>& pts, Complex z) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i)
    if (std::abs(pts[i] - z) < std::abs(pts[best] - z)) best = i;
  return best;
}

Outcome numerics() {
  Outcome o;
  std::mt19937_64 rng(77);
  // phase error over random structures
  double phase = 0.0;
  for (int it = 0; it < 12; ++it) {
    const int k = 2 + it % 3;
    const auto q = QuadDiff::make(k, random_coeffs(rng, k));
    for (auto orient : {Orientation::Horizontal, Orientation::Vertical})
      phase = std::max(phase, tr::build_structure(q, orient).max_phase_error);
  }
  expect(o, phase <= 1e-6, "phase error " + std::to_string(phase));

  // widths under halved tolerances
  double width_rel = 0.0;
  for (auto coeffs : {std::vector<Complex>{-1.0, Complex(0, 0.1), 0.0}, std::vector<Complex>{Complex(0.3, -0.2), Complex(-1, 0.5)}}) {
    const auto q = QuadDiff::make(static_cast<int>(coeffs.size()), coeffs);
    tr::TraceConfig fine;
    fine.step_tolerance /= 2;
    fine.capture_tolerance /= 2;
    fine.quadrature.abs_tolerance /= 2;
    fine.quadrature.rel_tolerance /= 2;
    for (auto orient : {Orientation::Horizontal, Orientation::Vertical}) {
      auto widths = [](const tr::TrajectoryStructure& s) {
        std::vector<double> w;
        for (const auto& st : s.strips) w.push_back(st.width);
        std::sort(w.begin(), w.end());
        return w;
      };
      const auto a = widths(tr::build_structure(q, orient));
      const auto b = widths(tr::build_structure(q, orient, fine));
      if (a.size() != b.size()) {
        expect(o, false, "strip count changed under refinement");
        continue;
      }
      for (std::size_t i = 0; i < a.size(); ++i) width_rel = std::max(width_rel, std::abs(a[i] - b[i]) / a[i]);
    }
  }
  expect(o, width_rel <= 1e-6, "width change " + std::to_string(width_rel));

  // mirror symmetry for real coefficients
  double mirror = 0.0;
  for (auto coeffs : {std::vector<Complex>{-1.0, 0.0, 0.0}, std::vector<Complex>{-1.0, 0.3, 0.2}, std::vector<Complex>{0.5, -1.2}}) {
    const auto q = QuadDiff::make(static_cast<int>(coeffs.size()), coeffs);
    std::vector<Complex> crit;
    for (const auto& c : q.critical_points()) crit.push_back(c.z);
    for (auto orient : {Orientation::Horizontal, Orientation::Vertical})
      for (int id = 0; id < static_cast<int>(crit.size()); ++id) {
        const auto dirs = tr::initial_directions(q, id, orient);
        const int mid = nearest(crit, std::conj(crit[id]));
        const auto mdirs = tr::initial_directions(q, mid, orient);
        for (int d = 0; d < static_cast<int>(dirs.size()); ++d) {
          const auto a = tr::trace(q, id, d, orient);
          const auto b = tr::trace(q, mid, nearest(mdirs, std::conj(dirs[d])), orient);
          if (a.termination != b.termination) {
            expect(o, false, "mirror trajectories end differently");
            continue;
          }
          for (std::size_t i = 1; i + 1 < a.points.size(); ++i)
            mirror = std::max(mirror, distance_to_curve(q, b, std::conj(a.points[i])));
          for (std::size_t i = 1; i + 1 < b.points.size(); ++i)
            mirror = std::max(mirror, distance_to_curve(q, a, std::conj(b.points[i])));
        }
      }
  }
  expect(o, mirror <= 1e-5, "mirror distance " + std::to_string(mirror));

  // monodromy around one simple zero
  double monodromy = 0.0;
  for (auto coeffs : {std::vector<Complex>{-1.0, 0.0}, std::vector<Complex>{-1.0, 0.0, 0.0}}) {
    const auto q = QuadDiff::make(static_cast<int>(coeffs.size()), coeffs);
    const Complex z0 = q.zeros()[0].location;
    const double r = 0.3 * q.separation(0);
    std::vector<Complex> loop;
    for (int i = 0; i <= 64; ++i) loop.push_back(z0 + r * std::polar(1.0, 2 * std::acos(-1.0) * i / 64));
    loop.back() = loop.front();
    const Complex s0 = std::sqrt(q.q(loop.front()));
    const auto vals = qd::sqrt_q_along(q, qd::Path(loop), s0);
    monodromy = std::max(monodromy, std::abs(vals.back() + s0) / std::abs(s0));
  }
  expect(o, monodromy <= 1e-6, "monodromy error " + std::to_string(monodromy));

  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "phase %.1e, width %.1e, mirror %.1e, monodromy %.1e", phase, width_rel, mirror, monodromy);
    o.detail = buf;
  }
  return o;
}

// ---- 8 ----
struct RunResult {
  int status = -1;
  std::string stdout_text;
  std::map<std::string, std::string> files;
};

RunResult run_cli(const std::string& cli, const std::string& args, const fs::path& out) {
  fs::remove_all(out);
  fs::create_directories(out);
  RunResult r;
  const std::string cmd = "\"" + cli + "\" --seed 7 --out \"" + out.string() + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.stdout_text.append(buf, n);
  r.status = pclose(p);
  for (const auto& e : fs::directory_iterator(out)) r.files[e.path().filename().string()] = read_file(e.path());
  return r;
}

Outcome cli_determinism(const std::string& cli, const std::string& data_dir) {
  Outcome o;
  const std::string spec = (fs::path(data_dir) / "k2_demo.spec").string();
  const std::vector<std::string> commands = {
      "trace --k 3 --coeffs \"-1,0;0,0;0,0\"",
      "trace --k 2 --coeffs \"0.3,-0.2;-1,0.5\" --orientation v",
      "trace --k 3 --family polynomial --coeffs \"-1,0;0,0;0.2,0.1\"",
      "graph --k 3 --coeffs \"-1,0;0,0;0,0\"",
      "diagram --k 3 --coeffs \"-1,0;0.1,0.2;0,0\"",
      "stasheff --n 6 --count --flips",
      "stasheff --n 5 --list",
      "stasheff --n 6 --random",
      "stasheff --n 6 --random --degenerate",
      "stasheff --n 3 --weight \"1,-1,1,-1\"",
      "scan \"" + spec + "\" --threads 2",
      "selftest",
  };
  const fs::path base = fs::temp_directory_path() / ("strata_acceptance_" + std::to_string(::getpid()));
  int files = 0;
  for (const auto& c : commands) {
    const auto a = run_cli(cli, c, base / "a");
    const auto b = run_cli(cli, c, base / "b");
    expect(o, a.status == 0, "'" + c + "' exited with " + std::to_string(a.status));
    expect(o, a.stdout_text == b.stdout_text, "'" + c + "' stdout differs");
    expect(o, a.files == b.files, "'" + c + "' outputs differ");
    files += static_cast<int>(a.files.size());
  }
  // the seed changes the random weight
  const auto s1 = run_cli(cli, "stasheff --n 6 --random", base / "a");
  const auto s2 = run_cli(cli, "--seed 8 stasheff --n 6 --random", base / "b");
  expect(o, s1.stdout_text != s2.stdout_text, "seed has no effect");
  fs::remove_all(base);
  if (o.pass) o.detail = std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <strata-cli> <data-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1], data = argv[2];
  struct Criterion {
    const char* name;
    double limit_s;  // 0: no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"triangulation counts", 10, catalan_counts},
      {"degeneracy equivalence", 60, fan_equivalence},
      {"diagram round trip", 0, round_trip},
      {"cubic fixture", 30, cubic_fixture},
      {"short detector consistency", 0, detector_consistency},
      {"bundled slice walls", 300, [&] { return bundled_walls(data); }},
      {"numerics invariants", 0, numerics},
      {"CLI determinism", 0, [&] { return cli_determinism(cli, data); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail = "over the time limit";
    }
    std::printf("%s %zu %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
