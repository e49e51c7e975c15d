#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "period_oracle.hpp"
#include "strata/scanner.hpp"

using namespace strata;
using namespace strata::sc;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SliceSpec demo_spec() { return parse_slice_spec(read_file(STRATA_DATA_DIR "/k2_demo.spec")); }

const WallMap& demo_map() {
  static const WallMap m = scan_slice(demo_spec());
  return m;
}

// The example slice a0 = -1 + t, a1 = i s.
SliceSpec real_axis_slice() {
  SliceSpec s;
  s.k = 2;
  s.base = {Complex(-1, 0), Complex(0, 0)};
  s.dir1 = {1, 0, 0, 0};
  s.dir2 = {0, 0, 0, 1};
  return s;
}

const std::string& label_of(const Cell& c, Orientation o) { return o == Orientation::Horizontal ? c.h.label : c.v.label; }

std::set<std::string> signatures(const WallMap& m, Orientation o) {
  std::set<std::string> out;
  for (const auto& c : m.cells) {
    const auto& l = label_of(c, o);
    if (l != kWall && l != kSingular && l != kFailed) out.insert(l);
  }
  return out;
}

std::vector<Complex> coeffs_at(const SliceSpec& spec, const WallPoint& w) { return spec.coefficients(w.t, w.s); }

}  // namespace

TEST_CASE("slice spec parsing and validation") {
  const SliceSpec s = demo_spec();
  CHECK(s.k == 2);
  CHECK(s.nx == 21);
  CHECK(s.orientations == Selector::Both);
  const SliceSpec again = parse_slice_spec(format_slice_spec(s));
  CHECK(format_slice_spec(again) == format_slice_spec(s));
  CHECK(again.base == s.base);

  const std::string good = "k = 2\nbase = -1,0; 0,0\ndir1 = 1,0,0,0\ndir2 = 0,0,0,1\n";
  CHECK_NOTHROW(parse_slice_spec(good));
  auto rejects = [](const std::string& text) {
    try {
      parse_slice_spec(text);
    } catch (const Error& e) {
      return e.code() == ErrorCode::InvalidArgument;
    }
    return false;
  };
  CHECK(rejects(good + "nx = 1\n"));
  CHECK(rejects(good + "ny = 1\nnx = 1\n"));
  CHECK(rejects("k = 2\nbase = -1,0; 0,0\ndir1 = 1,0,0,0\ndir2 = 2,0,0,0\n"));
  CHECK(rejects("k = 2\nbase = -1,0; 0,0\ndir1 = 1,0,0,0\n"));
  CHECK(rejects(good + "colour = red\n"));
  CHECK(rejects(good + "t_min = 1\nt_max = 0\n"));
  CHECK(rejects("k = 2\nbase = -1,0\ndir1 = 1,0,0,0\ndir2 = 0,0,0,1\n"));
  CHECK(rejects(good + "nx = abc\n"));
  CHECK(rejects(good + "wall_tolerance = 0\n"));
}

TEST_CASE("coefficients follow the affine slice") {
  SliceSpec s = real_axis_slice();
  const auto c = s.coefficients(0.25, -0.5);
  CHECK(c[0] == Complex(-0.75, 0));
  CHECK(c[1] == Complex(0, -0.5));
  CHECK(s.t_at(0) == -0.5);
  CHECK(s.t_at(20) == 0.5);
  CHECK(s.s_at(10) == doctest::Approx(0.0));
}

TEST_CASE("classify falls back to SINGULAR") {
  CHECK(classify(Family::SimplePole, 2, {Complex(0, 0), Complex(1, 0)}, Orientation::Horizontal).label == kSingular);
  // (z - 0.5)^2 / z
  CHECK(classify(Family::SimplePole, 2, {Complex(0.25, 0), Complex(-1, 0)}, Orientation::Vertical).label == kSingular);
  const auto ok = classify(Family::SimplePole, 2, {Complex(-1, 0.3), Complex(0.2, 0.1)}, Orientation::Horizontal);
  CHECK(ok.label.rfind("n4:", 0) == 0);
  CHECK(ok.note.empty());
  // real coefficients: the pole trajectory runs along the real axis into a zero
  const auto real = classify(Family::SimplePole, 2, {Complex(-1, 0), Complex(0, 0)}, Orientation::Horizontal);
  CHECK(real.note == kPoleZeroNote);
  CHECK(real.label.rfind("n3:", 0) == 0);
}

TEST_CASE("example slice has several signatures and walls between them") {
  const WallMap m = scan_slice(real_axis_slice());
  for (Orientation o : {Orientation::Horizontal, Orientation::Vertical}) CHECK(signatures(m, o).size() >= 2);
  CHECK(!m.walls.empty());
  CHECK(m.failed_cells == 0);
  for (const auto& w : m.walls) {
    const auto& a = label_of(m.at(w.i0, w.j0), w.orientation);
    const auto& b = label_of(m.at(w.i1, w.j1), w.orientation);
    CHECK(a != b);
    CHECK(w.u >= 0.0);
    CHECK(w.u <= 1.0);
    CHECK(w.residual <= 1e-6);
    CHECK(w.confirmed);
  }
}

TEST_CASE("a slice inside one cell has one signature and no walls") {
  SliceSpec s;
  s.k = 2;
  s.base = {Complex(-1, 0.3), Complex(0.2, 0.1)};
  s.dir1 = {1, 0, 0, 0};
  s.dir2 = {0, 1, 0, 0};
  s.t_min = s.s_min = -1e-4;
  s.t_max = s.s_max = 1e-4;
  s.nx = s.ny = 5;
  const WallMap m = scan_slice(s);
  CHECK(signatures(m, Orientation::Horizontal).size() == 1);
  CHECK(signatures(m, Orientation::Vertical).size() == 1);
  CHECK(m.walls.empty());
  CHECK(m.unresolved.empty());
}

TEST_CASE("bundled slice: short walls verified by the oracle and by re-tracing") {
  const WallMap& m = demo_map();
  const SliceSpec spec = demo_spec();
  CHECK(m.failed_cells == 0);
  int shorts = 0;
  std::set<Orientation> seen;
  for (const auto& w : m.walls) {
    CAPTURE(w.t);
    CAPTURE(w.s);
    const auto c = coeffs_at(spec, w);
    const bool horiz = w.orientation == Orientation::Horizontal;
    const auto q = make_differential(spec.family, spec.k, c);
    const Complex za = q.zeros()[w.zero_a].location;
    if (w.kind == WallKind::Short) {
      ++shorts;
      seen.insert(w.orientation);
      const Complex zb = q.zeros()[w.zero_b].location;
      CHECK(oracle::wall_residual(c, true, za, zb, horiz) <= 1e-6);
      const auto g = nw::build_graph(tr::build_structure(q, w.orientation));
      CHECK(nw::has_short(g));
      CHECK(!tr::find_short_trajectories(q, w.orientation, 1e-5).empty());
    } else {
      CHECK(oracle::pole_wall_residual(c, za, horiz) <= 1e-6);
    }
    // on its grid edge
    const double t0 = spec.t_at(w.i0), t1 = spec.t_at(w.i1), s0 = spec.s_at(w.j0), s1 = spec.s_at(w.j1);
    CHECK(std::abs(w.t - (t0 + w.u * (t1 - t0))) < 1e-12);
    CHECK(std::abs(w.s - (s0 + w.u * (s1 - s0))) < 1e-12);
    CHECK(std::abs(w.i1 - w.i0) + std::abs(w.j1 - w.j0) == 1);
  }
  CHECK(shorts > 0);
  // horizontal and vertical walls are both found, independently
  CHECK(seen.size() == 2);
}

TEST_CASE("marked edges are exactly the label changes") {
  const WallMap& m = demo_map();
  std::set<std::tuple<int, int, int, int, int>> marked;
  for (const auto& w : m.walls) marked.insert({static_cast<int>(w.orientation), w.i0, w.j0, w.i1, w.j1});
  for (const auto& u : m.unresolved) marked.insert({static_cast<int>(u.orientation), u.i0, u.j0, u.i1, u.j1});
  for (const auto& [o, i0, j0, i1, j1] : marked) {
    const auto orient = static_cast<Orientation>(o);
    CHECK(label_of(m.at(i0, j0), orient) != label_of(m.at(i1, j1), orient));
  }
  // every signature change is either refined or reported
  for (Orientation o : {Orientation::Horizontal, Orientation::Vertical})
    for (int j = 0; j < m.spec.ny; ++j)
      for (int i = 0; i + 1 < m.spec.nx; ++i)
        if (label_of(m.at(i, j), o) != label_of(m.at(i + 1, j), o))
          CHECK(marked.count({static_cast<int>(o), i, j, i + 1, j}) == 1);
}

TEST_CASE("wall_refine on the example edge") {
  // a0 from -1 to -1 + 0.4i, a1 = 0.2; the start has real coefficients
  EdgeFamily edge = [](double u) { return qd::QuadDiff::make(2, {Complex(-1, 0.4 * u), Complex(0.2, 0)}); };
  const WallPoint w = wall_refine(edge, Orientation::Horizontal);
  CHECK(w.residual <= 1e-7);
  CHECK(w.confirmed);
  // the example's vanishing period joins the pole and a zero, at the real start point
  CHECK(w.kind == WallKind::PoleZero);
  CHECK(w.u == 0.0);
  const auto q = edge(w.u);
  CHECK(oracle::pole_wall_residual({Complex(-1, 0), Complex(0.2, 0)}, q.zeros()[w.zero_a].location, true) <= 1e-7);
}

TEST_CASE("wall_refine on a short-wall edge of the bundled slice") {
  const WallMap& m = demo_map();
  const SliceSpec spec = m.spec;
  const WallPoint* pick = nullptr;
  for (const auto& w : m.walls)
    if (w.kind == WallKind::Short) {
      pick = &w;
      break;
    }
  REQUIRE(pick);
  const double t0 = spec.t_at(pick->i0), t1 = spec.t_at(pick->i1), s0 = spec.s_at(pick->j0), s1 = spec.s_at(pick->j1);
  EdgeFamily edge = [&](double u) {
    return make_differential(spec.family, spec.k, spec.coefficients(t0 + u * (t1 - t0), s0 + u * (s1 - s0)));
  };
  RefineOptions opt;
  opt.tolerance = 1e-8 / std::max(std::abs(t1 - t0), std::abs(s1 - s0));
  const WallPoint w = wall_refine(edge, pick->orientation, opt);
  CHECK(w.kind == WallKind::Short);
  CHECK(w.confirmed);
  CHECK(std::abs(w.u - pick->u) < 1e-7);
  CHECK(!tr::find_short_trajectories(edge(w.u), w.orientation, 1e-5).empty());
}

TEST_CASE("identical end signatures violate the precondition") {
  EdgeFamily edge = [](double u) { return qd::QuadDiff::make(2, {Complex(-1, 0.3 + 1e-4 * u), Complex(0.2, 0.1)}); };
  try {
    wall_refine(edge, Orientation::Horizontal);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("conjugate edges have the same walls") {
  const WallMap& m = demo_map();
  const SliceSpec spec = m.spec;
  int tested = 0;
  for (const auto& w : m.walls) {
    if (w.kind != WallKind::Short || tested >= 3) continue;
    ++tested;
    const auto c0 = spec.coefficients(spec.t_at(w.i0), spec.s_at(w.j0));
    const auto c1 = spec.coefficients(spec.t_at(w.i1), spec.s_at(w.j1));
    auto at = [&](double u, bool conj) {
      std::vector<Complex> c(c0.size());
      for (std::size_t m2 = 0; m2 < c.size(); ++m2) {
        c[m2] = c0[m2] + u * (c1[m2] - c0[m2]);
        if (conj) c[m2] = std::conj(c[m2]);
      }
      return qd::QuadDiff::make(spec.k, c);
    };
    EdgeFamily e = [&](double u) { return at(u, false); };
    EdgeFamily ec = [&](double u) { return at(u, true); };
    const auto a = refine_edge(e, w.orientation), b = refine_edge(ec, w.orientation);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
      CHECK(a[n].kind == b[n].kind);
      CHECK(std::abs(a[n].u - b[n].u) < 1e-7);
      CHECK(std::abs(a[n].period - std::conj(b[n].period)) < 1e-6);
    }
  }
  CHECK(tested > 0);
}

TEST_CASE("cell labels are stable when the resolution doubles") {
  SliceSpec coarse = demo_spec();
  coarse.refine = false;
  coarse.nx = coarse.ny = 11;
  SliceSpec fine = coarse;
  fine.nx = fine.ny = 21;
  const WallMap a = scan_slice(coarse), b = scan_slice(fine);
  for (int j = 0; j < coarse.ny; ++j)
    for (int i = 0; i < coarse.nx; ++i) {
      const Cell &ca = a.at(i, j), &cb = b.at(2 * i, 2 * j);
      CHECK(ca.t == doctest::Approx(cb.t));
      for (Orientation o : {Orientation::Horizontal, Orientation::Vertical}) {
        const auto& la = label_of(ca, o);
        if (la == kWall || la == kFailed) continue;
        CHECK(la == label_of(cb, o));
      }
    }
}

TEST_CASE("grid points on a wall are rare") {
  for (int n : {11, 31}) {
    SliceSpec s = demo_spec();
    s.refine = false;
    s.nx = s.ny = n;
    const WallMap m = scan_slice(s);
    int walls = 0;
    for (const auto& c : m.cells) walls += (c.h.label == kWall) + (c.v.label == kWall);
    CHECK(static_cast<double>(walls) / (2.0 * n * n) <= 0.02);
  }
}

TEST_CASE("scan output does not depend on the thread count") {
  SliceSpec s = demo_spec();
  s.nx = s.ny = 7;
  s.threads = 1;
  const WallMap a = scan_slice(s);
  s.threads = 4;
  const WallMap b = scan_slice(s);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t n = 0; n < a.cells.size(); ++n) {
    CHECK(a.cells[n].h.label == b.cells[n].h.label);
    CHECK(a.cells[n].v.label == b.cells[n].v.label);
  }
  REQUIRE(a.walls.size() == b.walls.size());
  for (std::size_t n = 0; n < a.walls.size(); ++n) {
    CHECK(a.walls[n].u == b.walls[n].u);
    CHECK(a.walls[n].period == b.walls[n].period);
  }
  CHECK(a.unresolved.size() == b.unresolved.size());
}

TEST_CASE("polynomial family slices reuse the pipeline") {
  SliceSpec s;
  s.family = Family::Polynomial;
  s.k = 3;
  s.base = {Complex(-1, 0.02), Complex(0.05, 0.03), Complex(0.0, 0.0)};
  s.dir1 = {1, 0, 0, 0, 0, 0};
  s.dir2 = {0, 1, 0, 0, 0, 0};
  s.t_min = s.s_min = -0.9;
  s.t_max = s.s_max = 0.9;
  s.nx = s.ny = 11;
  const WallMap m = scan_slice(s);
  CHECK(m.failed_cells == 0);
  // no pole: polygons have d + 2 vertices and no O side
  for (const auto& c : m.cells)
    if (c.h.label != kWall && c.h.label != kSingular) CHECK(c.h.label.rfind("n5:", 0) == 0);
  int shorts = 0;
  for (const auto& w : m.walls) {
    CHECK(w.kind == WallKind::Short);
    CHECK(w.confirmed);
    const auto c = coeffs_at(s, w);
    const auto q = make_differential(s.family, s.k, c);
    CHECK(oracle::wall_residual(c, false, q.zeros()[w.zero_a].location, q.zeros()[w.zero_b].location,
                                w.orientation == Orientation::Horizontal) <= 1e-6);
    ++shorts;
  }
  CHECK(signatures(m, Orientation::Horizontal).size() + signatures(m, Orientation::Vertical).size() >= 2);
  MESSAGE("polynomial slice walls: " << shorts << ", unresolved edges: " << m.unresolved.size());
}
