#include <algorithm>

#include "network_detail.hpp"

namespace strata::geom {

namespace {

bool on_segment(Point p, Point a, Point b, double eps) {
  const Point ab = sub(b, a);
  const double len = std::hypot(ab.x, ab.y);
  if (len == 0.0) return dist(p, a) <= eps;
  if (std::abs(cross(ab, sub(p, a))) / len > eps) return false;
  const double t = dot(sub(p, a), ab) / (len * len);
  return t >= -eps / len && t <= 1.0 + eps / len;
}

}  // namespace

bool segments_conflict(Point a, Point b, Point c, Point d, double eps) {
  const bool ac = dist(a, c) <= eps, ad = dist(a, d) <= eps;
  const bool bc = dist(b, c) <= eps, bd = dist(b, d) <= eps;
  if ((ac && bd) || (ad && bc)) return true;  // same segment
  if (ac || ad || bc || bd) {
    // one shared endpoint: conflict only if the far ends overlap the other segment
    const Point far1 = (ac || ad) ? b : a;
    const Point far2 = (ac || bc) ? d : c;
    return on_segment(far1, c, d, eps) || on_segment(far2, a, b, eps);
  }
  const double o1 = cross(sub(b, a), sub(c, a));
  const double o2 = cross(sub(b, a), sub(d, a));
  const double o3 = cross(sub(d, c), sub(a, c));
  const double o4 = cross(sub(d, c), sub(b, c));
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  return on_segment(c, a, b, eps) || on_segment(d, a, b, eps) || on_segment(a, c, d, eps) ||
         on_segment(b, c, d, eps);
}

std::vector<Point> clip_left(const std::vector<Point>& poly, Point a, Point b) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  const Point ab = sub(b, a);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i], q = poly[(i + 1) % n];
    const double sp = cross(ab, sub(p, a)), sq = cross(ab, sub(q, a));
    if (sp >= 0) out.push_back(p);
    if ((sp >= 0) != (sq >= 0)) {
      const double t = sp / (sp - sq);
      out.push_back(add(p, scale(sub(q, p), t)));
    }
  }
  return out;
}

double signed_area(const std::vector<Point>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * s;
}

Point area_centroid(const std::vector<Point>& poly) {
  const double a = signed_area(poly);
  if (std::abs(a) < 1e-300) {
    Point c{0, 0};
    for (const auto& p : poly) c = add(c, scale(p, 1.0 / poly.size()));
    return c;
  }
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point p = poly[i], q = poly[(i + 1) % poly.size()];
    const double w = cross(p, q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(sub(h[k - 1], h[k - 2]), sub(pts[i], h[k - 2])) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(sub(h[k - 1], h[k - 2]), sub(pts[i - 1], h[k - 2])) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace strata::geom
