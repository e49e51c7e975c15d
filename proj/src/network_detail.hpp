#pragma once

#include <cmath>
#include <vector>

#include "strata/network.hpp"

namespace strata::geom {

using cb::Point;

inline Point sub(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point add(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point scale(Point a, double s) { return {a.x * s, a.y * s}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// True when the closed segments share a point other than a common endpoint.
bool segments_conflict(Point a, Point b, Point c, Point d, double eps);

/// Keeps the part of a convex polygon on the left of the directed line a->b.
std::vector<Point> clip_left(const std::vector<Point>& poly, Point a, Point b);
double signed_area(const std::vector<Point>& poly);
Point area_centroid(const std::vector<Point>& poly);
/// Convex hull, ccw.
std::vector<Point> convex_hull(std::vector<Point> pts);

}  // namespace strata::geom

namespace strata::nw::detail {

std::vector<VertexRef> polygon_refs(const AdmissibleGraph& g);
std::vector<std::size_t> pole_edges(const AdmissibleGraph& g);
VertexRef outer_end(const GraphEdge& e);
/// Vertices of the face of Γ adjacent to the O side, in the layout of g.
std::vector<Point> center_face(const AdmissibleGraph& g);
Point center_of(const AdmissibleGraph& g);
double copy_offset(int n_outer);

}  // namespace strata::nw::detail
