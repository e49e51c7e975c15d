#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "strata/tracer.hpp"

namespace strata::tr {

using qd::QuadDiff;

namespace {

int degree_at(const QuadDiff& qd, int id) {
  const auto& cp = qd.critical_points()[id];
  return cp.is_pole() ? 1 : cp.order + 2;
}

// Im of the flat coordinate of z_end in the chart of sector j: integral from R e^{i theta_j},
// branch chosen so W grows outward along the principal direction.
double sector_key(const QuadDiff& qd, Orientation o, double R, double theta, Complex z_end,
                  const qd::PeriodOptions& opt) {
  const Complex rot = std::polar(1.0, o == Orientation::Horizontal ? 0.0 : -std::numbers::pi / 2.0);
  const Complex dir = std::polar(1.0, theta);
  const Complex Z = R * dir;
  Complex r = std::sqrt(qd.q(Z));
  if ((rot * r * dir).real() < 0.0) r = -r;
  if (Z == z_end) return 0.0;
  return (rot * qd::period(qd, qd::Path({Z, z_end}), r, opt).value).imag();
}

}  // namespace

TrajectoryStructure build_structure(const QuadDiff& qd, Orientation o, const TraceConfig& config) {
  TrajectoryStructure s(qd);
  s.orientation = o;
  const auto angles = principal_angles(qd, o);
  s.num_sectors = static_cast<int>(angles.size());
  const auto& cps = qd.critical_points();
  const int ncrit = static_cast<int>(cps.size());

  // Trace every dart.
  std::map<std::pair<int, int>, Trajectory> traced;
  for (int id = 0; id < ncrit; ++id)
    for (int d = 0; d < degree_at(qd, id); ++d) {
      Trajectory t = trace(qd, id, d, o, config);
      if (t.termination == Termination::Budget)
        fail(ErrorCode::StructureAmbiguous, "trajectory exhausted the step budget");
      s.max_phase_error = std::max(s.max_phase_error, t.max_phase_error);
      traced.emplace(std::make_pair(id, d), std::move(t));
    }

  // Deduplicate connections traced from both ends.
  std::map<std::pair<int, int>, int> dart_edge;  // dart -> trajectory index
  for (auto& [dart, t] : traced) {
    if (t.termination == Termination::HitsCritical) {
      auto other = std::make_pair(t.end_id, t.end_dir);
      auto it = traced.find(other);
      if (it == traced.end() || it->second.termination != Termination::HitsCritical ||
          it->second.end_id != dart.first || it->second.end_dir != dart.second)
        fail(ErrorCode::StructureAmbiguous, "connection not confirmed from its other end");
      if (other < dart) continue;
      if (other == dart) fail(ErrorCode::StructureAmbiguous, "trajectory returns along its own launch direction");
    }
    const int idx = static_cast<int>(s.trajectories.size());
    dart_edge[dart] = idx;
    if (t.termination == Termination::HitsCritical) dart_edge[{t.end_id, t.end_dir}] = idx;
    s.trajectories.push_back(std::move(t));
  }

  // Escaping ends in counterclockwise order.
  const double R = config.escape_factor * std::max(1.0, qd.scale());
  std::vector<int> endpoint_of(s.trajectories.size(), -1);
  for (int i = 0; i < static_cast<int>(s.trajectories.size()); ++i) {
    const auto& t = s.trajectories[i];
    if (t.termination != Termination::Escape) continue;
    s.endpoints.push_back({i, t.sector, sector_key(qd, o, R, angles[t.sector], t.points.back(), config.quadrature)});
  }
  std::sort(s.endpoints.begin(), s.endpoints.end(), [](const Endpoint& a, const Endpoint& b) {
    return a.sector != b.sector ? a.sector < b.sector : a.key < b.key;
  });
  for (int e = 0; e < static_cast<int>(s.endpoints.size()); ++e) endpoint_of[s.endpoints[e].trajectory] = e;
  const int nend = static_cast<int>(s.endpoints.size());
  if (nend == 0) fail(ErrorCode::StructureAmbiguous, "no trajectory escapes");

  // Face walk over half-edges 2t (start -> end) and 2t+1 (end -> start), faces on the left.
  const int nhalf = 2 * static_cast<int>(s.trajectories.size());
  auto outgoing = [&](int v, int d) {
    int t = dart_edge.at({v, d});
    const auto& tr = s.trajectories[t];
    return (tr.start_id == v && tr.start_dir == d) ? 2 * t : 2 * t + 1;
  };
  std::vector<char> seen(nhalf, 0);
  for (int h0 = 0; h0 < nhalf; ++h0) {
    if (seen[h0]) continue;
    std::vector<Arc> arcs;
    std::set<int> verts, trajs;
    int h = h0;
    long guard = 0;
    while (!seen[h]) {
      if (++guard > 4L * nhalf + 8) fail(ErrorCode::StructureAmbiguous, "face walk did not close");
      seen[h] = 1;
      const int t = h / 2;
      const auto& tr = s.trajectories[t];
      trajs.insert(t);
      verts.insert(tr.start_id);
      if (h % 2 == 0) {
        if (tr.termination == Termination::Escape) {
          const int e = endpoint_of[t];
          const int e2 = (e + 1) % nend;
          arcs.push_back({e, e2});
          h = 2 * s.endpoints[e2].trajectory + 1;
        } else {
          verts.insert(tr.end_id);
          const int deg = degree_at(qd, tr.end_id);
          h = outgoing(tr.end_id, (tr.end_dir + deg - 1) % deg);
        }
      } else {
        const int deg = degree_at(qd, tr.start_id);
        h = outgoing(tr.start_id, (tr.start_dir + deg - 1) % deg);
      }
    }
    if (h != h0) fail(ErrorCode::StructureAmbiguous, "face walk entered a cycle midway");

    const int pole = qd.pole_id();
    if (arcs.empty()) fail(ErrorCode::StructureAmbiguous, "bounded face found");
    auto sec = [&](int e) { return s.endpoints[e].sector; };
    auto key = [&](int e) { return s.endpoints[e].key; };
    if (arcs.size() == 1 && sec(arcs[0].to) == (sec(arcs[0].from) + 1) % s.num_sectors &&
        s.num_sectors > 1) {
      HalfPlane hp;
      hp.sector_from = sec(arcs[0].from);
      hp.sector_to = sec(arcs[0].to);
      hp.arc = arcs[0];
      hp.trajectories.assign(trajs.begin(), trajs.end());
      s.half_planes.push_back(std::move(hp));
    } else if (arcs.size() == 2 && sec(arcs[0].from) == sec(arcs[0].to) && sec(arcs[1].from) == sec(arcs[1].to) &&
               arcs[0].from != arcs[0].to && arcs[1].from != arcs[1].to) {
      Strip st;
      // canonical: end_a is the lower sector
      int first = sec(arcs[0].from) <= sec(arcs[1].from) ? 0 : 1;
      st.arc_a = arcs[first];
      st.arc_b = arcs[1 - first];
      st.end_a = sec(st.arc_a.from);
      st.end_b = sec(st.arc_b.from);
      const double wa = key(st.arc_a.to) - key(st.arc_a.from);
      const double wb = key(st.arc_b.to) - key(st.arc_b.from);
      if (wa <= 0.0 || wb <= 0.0) fail(ErrorCode::StructureAmbiguous, "non-positive strip width");
      st.width = 0.5 * (wa + wb);
      st.width_mismatch = std::abs(wa - wb);
      st.boundary_critical.assign(verts.begin(), verts.end());
      st.has_pole = pole >= 0 && verts.count(pole) > 0;
      st.trajectories.assign(trajs.begin(), trajs.end());
      s.strips.push_back(std::move(st));
    } else {
      fail(ErrorCode::StructureAmbiguous, "face is neither a strip nor a half-plane");
    }
  }
  if (static_cast<int>(s.half_planes.size()) != s.num_sectors)
    fail(ErrorCode::StructureAmbiguous, "half-plane count differs from the number of principal directions");
  std::sort(s.half_planes.begin(), s.half_planes.end(),
            [](const HalfPlane& a, const HalfPlane& b) { return a.sector_from < b.sector_from; });
  std::sort(s.strips.begin(), s.strips.end(), [&](const Strip& a, const Strip& b) {
    return std::make_pair(a.arc_a.from, a.arc_b.from) < std::make_pair(b.arc_a.from, b.arc_b.from);
  });

  for (int i = 0; i < static_cast<int>(s.trajectories.size()); ++i) {
    const auto& t = s.trajectories[i];
    if (t.termination == Termination::Escape) {
      if (cps[t.start_id].is_pole()) s.pole_endpoint = endpoint_of[i];
      continue;
    }
    Connection c{std::min(t.start_id, t.end_id), std::max(t.start_id, t.end_id), t.period, i};
    if (cps[t.start_id].is_pole() || cps[t.end_id].is_pole())
      s.pole_connections.push_back(c);
    else
      s.shorts.push_back(c);
  }
  return s;
}

std::vector<ShortTrajectory> find_short_trajectories(const QuadDiff& qd, Orientation o, double tol,
                                                     const TraceConfig& config) {
  TraceConfig cfg = config;
  cfg.capture_tolerance = tol;
  std::map<std::pair<int, int>, Complex> found;
  const auto& cps = qd.critical_points();
  for (int id = 0; id < static_cast<int>(cps.size()); ++id) {
    if (cps[id].is_pole()) continue;
    for (int d = 0; d < cps[id].order + 2; ++d) {
      Trajectory t = trace(qd, id, d, o, cfg);
      if (t.termination != Termination::HitsCritical || cps[t.end_id].is_pole()) continue;
      auto key = std::make_pair(std::min(id, t.end_id), std::max(id, t.end_id));
      if (!found.count(key)) found[key] = id < t.end_id ? t.period : -t.period;
    }
  }
  std::vector<ShortTrajectory> out;
  for (const auto& [k, p] : found) out.push_back({k.first, k.second, p});
  return out;
}

}  // namespace strata::tr
