#include "strata/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace strata::sc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "slice spec: bad number for '" + key + "': '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) fail(ErrorCode::InvalidArgument, "slice spec: '" + key + "' must be an integer");
  return static_cast<int>(x);
}

std::vector<double> parse_reals(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& part : split(v, ',')) out.push_back(parse_double(key, part));
  return out;
}

std::vector<Complex> parse_complex_list(const std::string& key, const std::string& v) {
  std::vector<Complex> out;
  for (const auto& part : split(v, ';')) {
    const auto re_im = parse_reals(key, part);
    if (re_im.size() != 2) fail(ErrorCode::InvalidArgument, "slice spec: '" + key + "' entries are 're,im'");
    out.emplace_back(re_im[0], re_im[1]);
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Sign-relevant component of a period for the orientation.
double component(Complex p, Orientation o) { return o == Orientation::Horizontal ? p.imag() : p.real(); }

Complex normalized(Complex p, Orientation o) {
  if (o == Orientation::Horizontal) return p.real() < 0 ? -p : p;
  return p.imag() < 0 ? -p : p;
}

// One evaluation along an edge. Zeros are kept in a tracked order; `perm[i]` is the
// index of tracked zero i in qd->zeros().
struct Sample {
  double u = 0.0;
  bool valid = false;
  std::optional<qd::QuadDiff> qd;
  std::vector<Complex> zeros;
  std::vector<int> perm;
  std::vector<Complex> basis;      // pole: integral from the pole to each zero; else one per pair
  std::vector<bool> basis_ok;
};

struct Candidate {
  WallKind kind = WallKind::Short;
  int a = -1, b = -1;
  int sigma = 0;  // pole family: P = I_a + sigma I_b
};

class EdgeTracker {
 public:
  EdgeTracker(const EdgeFamily& qd_at, Orientation o, const qd::PeriodOptions& quad)
      : qd_at_(qd_at), o_(o), quad_(quad) {}

  const Sample& at(double u) {
    auto it = samples_.find(u);
    if (it != samples_.end()) return it->second;
    Sample s = evaluate(u, nearest(u));
    return samples_.emplace(u, std::move(s)).first->second;
  }

  const std::vector<Candidate>& candidates() const { return candidates_; }
  bool pole_family() const { return pole_family_; }

  // NaN when the sample or a needed basis period is unavailable.
  Complex value(const Sample& s, const Candidate& c) const {
    const Complex nan(std::numeric_limits<double>::quiet_NaN(), 0.0);
    if (!s.valid) return nan;
    if (pole_family_) {
      if (!s.basis_ok[c.a]) return nan;
      if (c.kind == WallKind::PoleZero) return s.basis[c.a];
      if (!s.basis_ok[c.b]) return nan;
      return s.basis[c.a] + static_cast<double>(c.sigma) * s.basis[c.b];
    }
    const std::size_t idx = pair_index(c.a, c.b);
    if (!s.basis_ok[idx]) return nan;
    return s.basis[idx];
  }

  Orientation orientation() const { return o_; }

 private:
  const Sample* nearest(double u) const {
    const Sample* best = nullptr;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [v, s] : samples_) {
      if (!s.valid) continue;
      if (std::abs(v - u) < d) {
        d = std::abs(v - u);
        best = &s;
      }
    }
    return best;
  }

  std::size_t pair_index(int a, int b) const {
    // a < b, row-major over the strict upper triangle
    const int n = n_zeros_;
    return static_cast<std::size_t>(a * n - a * (a + 1) / 2 + (b - a - 1));
  }

  void init_candidates(const qd::QuadDiff& q) {
    pole_family_ = q.has_pole();
    n_zeros_ = static_cast<int>(q.zeros().size());
    for (int a = 0; a < n_zeros_; ++a) {
      if (pole_family_) candidates_.push_back({WallKind::PoleZero, a, -1, 0});
      for (int b = a + 1; b < n_zeros_; ++b) {
        if (pole_family_) {
          candidates_.push_back({WallKind::Short, a, b, +1});
          candidates_.push_back({WallKind::Short, a, b, -1});
        } else {
          candidates_.push_back({WallKind::Short, a, b, 0});
        }
      }
    }
  }

  Sample evaluate(double u, const Sample* ref) {
    Sample s;
    s.u = u;
    try {
      qd::QuadDiff q = qd_at_(u);
      if (q.has_multiple_zero()) return s;
      if (!initialized_) {
        init_candidates(q);
        initialized_ = true;
      }
      const int n = static_cast<int>(q.zeros().size());
      if (n != n_zeros_) return s;
      s.perm.resize(n);
      std::iota(s.perm.begin(), s.perm.end(), 0);
      if (ref) {
        // minimal total displacement; degrees are small
        std::vector<int> p(n), best;
        std::iota(p.begin(), p.end(), 0);
        double best_cost = std::numeric_limits<double>::infinity();
        do {
          double cost = 0.0;
          for (int i = 0; i < n; ++i) cost += std::abs(q.zeros()[p[i]].location - ref->zeros[i]);
          if (cost < best_cost) {
            best_cost = cost;
            best = p;
          }
        } while (std::next_permutation(p.begin(), p.end()));
        s.perm = best;
      }
      for (int i = 0; i < n; ++i) s.zeros.push_back(q.zeros()[s.perm[i]].location);
      const std::size_t nb = pole_family_ ? n : static_cast<std::size_t>(n * (n - 1) / 2);
      s.basis.assign(nb, Complex(0.0));
      s.basis_ok.assign(nb, false);
      auto integrate = [&](Complex from, Complex to, std::size_t slot) {
        try {
          Complex v = qd::period(q, qd::Path::segment(from, to), Complex(1.0), quad_).value;
          if (ref && ref->basis_ok[slot] && std::abs(v - ref->basis[slot]) > std::abs(v + ref->basis[slot])) v = -v;
          s.basis[slot] = v;
          s.basis_ok[slot] = true;
        } catch (const Error&) {
        }
      };
      if (pole_family_) {
        for (int i = 0; i < n; ++i) integrate(Complex(0.0), s.zeros[i], i);
      } else {
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b) integrate(s.zeros[a], s.zeros[b], pair_index(a, b));
      }
      s.qd = std::move(q);
      s.valid = true;
    } catch (const Error&) {
    }
    return s;
  }

  const EdgeFamily& qd_at_;
  Orientation o_;
  qd::PeriodOptions quad_;
  std::map<double, Sample> samples_;
  std::vector<Candidate> candidates_;
  bool initialized_ = false;
  bool pole_family_ = true;
  int n_zeros_ = 0;
};

bool confirm(const Sample& s, const Candidate& c, Orientation o, double tol, const tr::TraceConfig& base) {
  const qd::QuadDiff& q = *s.qd;
  const int za = s.perm[c.a];
  try {
    if (c.kind == WallKind::Short) {
      const int zb = s.perm[c.b];
      for (const auto& st : tr::find_short_trajectories(q, o, tol, base))
        if ((st.a == za && st.b == zb) || (st.a == zb && st.b == za)) return true;
      return false;
    }
    tr::TraceConfig cfg = base;
    cfg.capture_tolerance = tol;
    const auto structure = tr::build_structure(q, o, cfg);
    for (const auto& pc : structure.pole_connections)
      if (pc.a == za || pc.b == za) return true;
  } catch (const Error&) {
  }
  return false;
}

// Refined points plus candidates that vanished without a connecting trajectory.
struct EdgeResult {
  std::vector<WallPoint> points;
};

EdgeResult refine_all(const EdgeFamily& qd_at, Orientation o, const RefineOptions& opt) {
  if (opt.samples < 1 || !(opt.tolerance > 0.0)) fail(ErrorCode::InvalidArgument, "refine options");
  EdgeTracker tracker(qd_at, o, opt.trace.quadrature);
  std::vector<double> grid;
  for (int m = 0; m <= opt.samples; ++m) grid.push_back(static_cast<double>(m) / opt.samples);
  for (double u : grid) tracker.at(u);

  EdgeResult out;
  auto emit = [&](const Candidate& c, double us) {
    const Sample& s = tracker.at(us);
    const Complex p = tracker.value(s, c);
    if (!s.valid || std::isnan(p.real())) return;
    WallPoint w;
    w.orientation = o;
    w.u = us;
    w.kind = c.kind;
    w.zero_a = s.perm[c.a];
    w.zero_b = c.kind == WallKind::Short ? s.perm[c.b] : -1;
    w.period = normalized(p, o);
    w.residual = std::abs(component(p, o));
    if (w.residual <= opt.max_residual && std::abs(p) > 1e-6) {
      w.confirmed = confirm(s, c, o, opt.confirm_tolerance, opt.trace);
      out.points.push_back(w);
    }
  };
  for (const Candidate& c : tracker.candidates()) {
    // a wall sitting on an end of the edge shows no sign change
    for (double u : {0.0, 1.0}) {
      const Complex p = tracker.value(tracker.at(u), c);
      if (!std::isnan(p.real()) && std::abs(component(p, o)) <= 1e-3 * opt.max_residual) emit(c, u);
    }
    double prev_u = -1.0, prev_f = 0.0;
    for (double u : grid) {
      const double f = component(tracker.value(tracker.at(u), c), o);
      if (std::isnan(f)) continue;
      if (prev_u >= 0.0 && ((prev_f < 0 && f > 0) || (prev_f > 0 && f < 0))) {
        double lo = prev_u, hi = u, flo = prev_f;
        bool lost = false;
        while (hi - lo > opt.tolerance) {
          const double mid = 0.5 * (lo + hi);
          const double fm = component(tracker.value(tracker.at(mid), c), o);
          if (std::isnan(fm)) {
            lost = true;
            break;
          }
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        if (!lost) emit(c, 0.5 * (lo + hi));
      }
      prev_u = u;
      prev_f = f;
    }
  }
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const WallPoint& a, const WallPoint& b) { return a.u < b.u; });
  return out;
}

std::string signature_of(const EdgeFamily& qd_at, double u, Orientation o, const tr::TraceConfig& config) {
  const qd::QuadDiff q = qd_at(u);
  if (q.has_multiple_zero()) fail(ErrorCode::PreconditionViolated, "edge end has collided zeros");
  return nw::signature(nw::build_graph(tr::build_structure(q, o, config)));
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  if (workers <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

bool is_signature(const std::string& label) { return label != kSingular && label != kFailed && label != kWall; }

}  // namespace

std::vector<Complex> SliceSpec::coefficients(double t, double s) const {
  std::vector<Complex> c = base;
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double re = t * dir1[2 * m] + s * dir2[2 * m];
    const double im = t * dir1[2 * m + 1] + s * dir2[2 * m + 1];
    c[m] += Complex(re, im);
  }
  return c;
}

double SliceSpec::t_at(int i) const { return t_min + (t_max - t_min) * i / (nx - 1); }
double SliceSpec::s_at(int j) const { return s_min + (s_max - s_min) * j / (ny - 1); }

void validate(const SliceSpec& spec) {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, "slice spec: " + what); };
  const int min_k = spec.family == Family::SimplePole ? 2 : 1;
  if (spec.k < min_k || spec.k > 8) bad("k out of range");
  if (static_cast<int>(spec.base.size()) != spec.k) bad("base needs k coefficients");
  const std::size_t dim = 2 * static_cast<std::size_t>(spec.k);
  if (spec.dir1.size() != dim || spec.dir2.size() != dim) bad("directions need 2k real components");
  for (const auto& c : spec.base)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) bad("non-finite base coefficient");
  double n1 = 0, n2 = 0, d12 = 0;
  for (std::size_t m = 0; m < dim; ++m) {
    if (!std::isfinite(spec.dir1[m]) || !std::isfinite(spec.dir2[m])) bad("non-finite direction");
    n1 += spec.dir1[m] * spec.dir1[m];
    n2 += spec.dir2[m] * spec.dir2[m];
    d12 += spec.dir1[m] * spec.dir2[m];
  }
  if (n1 == 0 || n2 == 0 || d12 * d12 >= (1.0 - 1e-12) * n1 * n2) bad("directions are linearly dependent");
  if (spec.nx < 2 || spec.ny < 2) bad("nx and ny must be at least 2");
  if (spec.nx > 4096 || spec.ny > 4096) bad("grid too large");
  if (!(spec.t_min < spec.t_max) || !(spec.s_min < spec.s_max)) bad("empty range");
  if (!std::isfinite(spec.t_min) || !std::isfinite(spec.t_max) || !std::isfinite(spec.s_min) ||
      !std::isfinite(spec.s_max))
    bad("non-finite range");
  if (spec.threads < 0) bad("threads must be >= 0");
  if (!(spec.wall_tolerance > 0.0)) bad("wall_tolerance must be > 0");
}

SliceSpec parse_slice_spec(const std::string& text) {
  SliceSpec spec;
  spec.base.clear();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_base = false, have_d1 = false, have_d2 = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::InvalidArgument, "slice spec line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (key == "family") {
      if (v == "pole") spec.family = Family::SimplePole;
      else if (v == "polynomial") spec.family = Family::Polynomial;
      else fail(ErrorCode::InvalidArgument, "slice spec: family is 'pole' or 'polynomial'");
    } else if (key == "k") {
      spec.k = parse_int(key, v);
    } else if (key == "base") {
      spec.base = parse_complex_list(key, v);
      have_base = true;
    } else if (key == "dir1") {
      spec.dir1 = parse_reals(key, v);
      have_d1 = true;
    } else if (key == "dir2") {
      spec.dir2 = parse_reals(key, v);
      have_d2 = true;
    } else if (key == "t_min") {
      spec.t_min = parse_double(key, v);
    } else if (key == "t_max") {
      spec.t_max = parse_double(key, v);
    } else if (key == "s_min") {
      spec.s_min = parse_double(key, v);
    } else if (key == "s_max") {
      spec.s_max = parse_double(key, v);
    } else if (key == "nx") {
      spec.nx = parse_int(key, v);
    } else if (key == "ny") {
      spec.ny = parse_int(key, v);
    } else if (key == "orientations") {
      if (v == "h") spec.orientations = Selector::Horizontal;
      else if (v == "v") spec.orientations = Selector::Vertical;
      else if (v == "both") spec.orientations = Selector::Both;
      else fail(ErrorCode::InvalidArgument, "slice spec: orientations is h, v or both");
    } else if (key == "threads") {
      spec.threads = parse_int(key, v);
    } else if (key == "refine") {
      if (v == "true" || v == "1") spec.refine = true;
      else if (v == "false" || v == "0") spec.refine = false;
      else fail(ErrorCode::InvalidArgument, "slice spec: refine is true or false");
    } else if (key == "wall_tolerance") {
      spec.wall_tolerance = parse_double(key, v);
    } else {
      fail(ErrorCode::InvalidArgument, "slice spec: unknown key '" + key + "'");
    }
  }
  if (!have_base || !have_d1 || !have_d2) fail(ErrorCode::InvalidArgument, "slice spec: base, dir1 and dir2 are required");
  validate(spec);
  return spec;
}

std::string format_slice_spec(const SliceSpec& spec) {
  std::ostringstream os;
  os << "family = " << (spec.family == Family::SimplePole ? "pole" : "polynomial") << "\n";
  os << "k = " << spec.k << "\n";
  os << "base = ";
  for (std::size_t m = 0; m < spec.base.size(); ++m)
    os << (m ? "; " : "") << fmt(spec.base[m].real()) << "," << fmt(spec.base[m].imag());
  auto reals = [&](const char* key, const std::vector<double>& d) {
    os << "\n" << key << " = ";
    for (std::size_t m = 0; m < d.size(); ++m) os << (m ? "," : "") << fmt(d[m]);
  };
  reals("dir1", spec.dir1);
  reals("dir2", spec.dir2);
  os << "\nt_min = " << fmt(spec.t_min) << "\nt_max = " << fmt(spec.t_max) << "\ns_min = " << fmt(spec.s_min)
     << "\ns_max = " << fmt(spec.s_max) << "\nnx = " << spec.nx << "\nny = " << spec.ny << "\norientations = "
     << (spec.orientations == Selector::Horizontal ? "h" : spec.orientations == Selector::Vertical ? "v" : "both")
     << "\nthreads = " << spec.threads << "\nrefine = " << (spec.refine ? "true" : "false")
     << "\nwall_tolerance = " << fmt(spec.wall_tolerance) << "\n";
  return os.str();
}

qd::QuadDiff make_differential(Family family, int k, const std::vector<Complex>& coeffs) {
  if (static_cast<int>(coeffs.size()) != k) fail(ErrorCode::DegenerateInput, "expected k coefficients");
  if (family == Family::SimplePole) return qd::QuadDiff::make(k, coeffs);
  return qd::QuadDiff::make_polynomial(coeffs);
}

CellLabel classify(Family family, int k, const std::vector<Complex>& coeffs, Orientation o,
                   const tr::TraceConfig& config) {
  try {
    const qd::QuadDiff q = make_differential(family, k, coeffs);
    if (q.has_multiple_zero()) return {kSingular, "collided zeros"};
    const auto structure = tr::build_structure(q, o, config);
    const auto g = nw::build_graph(structure);
    if (nw::has_short(g)) return {kWall, ""};
    return {nw::signature(g), structure.pole_connections.empty() ? "" : kPoleZeroNote};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateInput) return {kSingular, e.what()};
    return {kFailed, e.what()};
  } catch (const std::exception& e) {
    return {kFailed, e.what()};
  }
}

std::vector<WallPoint> refine_edge(const EdgeFamily& qd_at, Orientation o, const RefineOptions& opt) {
  return refine_all(qd_at, o, opt).points;
}

WallPoint wall_refine(const EdgeFamily& qd_at, Orientation o, const RefineOptions& opt) {
  if (signature_of(qd_at, 0.0, o, opt.trace) == signature_of(qd_at, 1.0, o, opt.trace))
    fail(ErrorCode::PreconditionViolated, "edge end signatures agree");
  const auto pts = refine_edge(qd_at, o, opt);
  const WallPoint* best = nullptr;
  auto rank = [](const WallPoint& w) { return (w.kind == WallKind::Short ? 0 : 2) + (w.confirmed ? 0 : 1); };
  for (const auto& w : pts)
    if (!best || rank(w) < rank(*best) || (rank(w) == rank(*best) && w.residual < best->residual)) best = &w;
  if (!best) fail(ErrorCode::NoSignChange, "no period component changes sign along the edge");
  return *best;
}

WallMap scan_slice(const SliceSpec& spec) {
  validate(spec);
  WallMap map;
  map.spec = spec;
  const int threads = spec.threads > 0 ? spec.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const bool do_h = spec.orientations != Selector::Vertical;
  const bool do_v = spec.orientations != Selector::Horizontal;

  const std::size_t n_cells = static_cast<std::size_t>(spec.nx) * spec.ny;
  map.cells.resize(n_cells);
  parallel_for(n_cells, threads, [&](std::size_t idx) {
    Cell& c = map.cells[idx];
    c.i = static_cast<int>(idx % spec.nx);
    c.j = static_cast<int>(idx / spec.nx);
    c.t = spec.t_at(c.i);
    c.s = spec.s_at(c.j);
    const auto coeffs = spec.coefficients(c.t, c.s);
    if (do_h) c.h = classify(spec.family, spec.k, coeffs, Orientation::Horizontal, spec.trace);
    if (do_v) c.v = classify(spec.family, spec.k, coeffs, Orientation::Vertical, spec.trace);
  });
  for (const auto& c : map.cells)
    if (c.h.label == kFailed || c.v.label == kFailed) ++map.failed_cells;

  struct Task {
    Orientation o;
    int i0, j0, i1, j1;
  };
  std::vector<Task> tasks;
  std::vector<UnresolvedEdge> early;
  for (Orientation o : {Orientation::Horizontal, Orientation::Vertical}) {
    if ((o == Orientation::Horizontal && !do_h) || (o == Orientation::Vertical && !do_v)) continue;
    auto label = [&](int i, int j) -> const std::string& {
      const Cell& c = map.at(i, j);
      return o == Orientation::Horizontal ? c.h.label : c.v.label;
    };
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        for (int d = 0; d < 2; ++d) {
          const int i1 = i + (d == 0), j1 = j + (d == 1);
          if (i1 >= spec.nx || j1 >= spec.ny) continue;
          const std::string &a = label(i, j), &b = label(i1, j1);
          if (a == b || a == kSingular || a == kFailed || b == kSingular || b == kFailed) continue;
          if (!is_signature(a) || !is_signature(b)) {
            early.push_back({o, i, j, i1, j1, "grid point lies on a wall"});
            continue;
          }
          tasks.push_back({o, i, j, i1, j1});
        }
  }

  if (!spec.refine) {
    for (const auto& t : tasks) map.unresolved.push_back({t.o, t.i0, t.j0, t.i1, t.j1, "not refined"});
    for (auto& e : early) map.unresolved.push_back(e);
    return map;
  }

  std::vector<std::vector<WallPoint>> found(tasks.size());
  std::vector<std::vector<UnresolvedEdge>> missed(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t n) {
    const Task& t = tasks[n];
    const double t0 = spec.t_at(t.i0), s0 = spec.s_at(t.j0);
    const double t1 = spec.t_at(t.i1), s1 = spec.s_at(t.j1);
    EdgeFamily fam = [&spec, t0, s0, t1, s1](double u) {
      return make_differential(spec.family, spec.k, spec.coefficients(t0 + u * (t1 - t0), s0 + u * (s1 - s0)));
    };
    RefineOptions opt;
    opt.trace = spec.trace;
    opt.tolerance = spec.wall_tolerance / std::max(std::abs(t1 - t0), std::abs(s1 - s0));
    try {
      const auto pts = refine_edge(fam, t.o, opt);
      for (auto w : pts) {
        w.i0 = t.i0;
        w.j0 = t.j0;
        w.i1 = t.i1;
        w.j1 = t.j1;
        w.t = t0 + w.u * (t1 - t0);
        w.s = s0 + w.u * (s1 - s0);
        if (w.confirmed) {
          found[n].push_back(w);
        } else {
          std::ostringstream os;
          os << (w.kind == WallKind::Short ? "period of zeros " : "pole period of zero ") << w.zero_a;
          if (w.kind == WallKind::Short) os << "," << w.zero_b;
          os << " vanishes at u=" << fmt(w.u) << " without a connecting trajectory";
          missed[n].push_back({t.o, t.i0, t.j0, t.i1, t.j1, os.str()});
        }
      }
      if (found[n].empty() && missed[n].empty())
        missed[n].push_back({t.o, t.i0, t.j0, t.i1, t.j1, "NoSignChange: no period component changes sign"});
    } catch (const std::exception& e) {
      missed[n].push_back({t.o, t.i0, t.j0, t.i1, t.j1, e.what()});
    }
  });
  for (std::size_t n = 0; n < tasks.size(); ++n) {
    map.walls.insert(map.walls.end(), found[n].begin(), found[n].end());
    map.unresolved.insert(map.unresolved.end(), missed[n].begin(), missed[n].end());
  }
  for (auto& e : early) map.unresolved.push_back(e);
  return map;
}

}  // namespace strata::sc
