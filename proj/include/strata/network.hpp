#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strata/combinat.hpp"
#include "strata/tracer.hpp"

namespace strata::nw {

using cb::Point;

/// Outer vertex with copy index (0 = clockwise copy, 1 = counterclockwise copy of a
/// doubly supported vertex); vertex == kCenter denotes O.
struct VertexRef {
  static constexpr int kCenter = -1;
  int vertex = 0;
  int copy = 0;
  bool is_center() const { return vertex == kCenter; }
  bool operator==(const VertexRef&) const = default;
  auto operator<=>(const VertexRef&) const = default;
};

struct GraphEdge {
  VertexRef u, v;
  double weight = 0.0;
  bool pole = false;  // one of the two O edges
};

struct AdmissibleGraph {
  Orientation orientation = Orientation::Horizontal;
  int n_outer = 0;
  bool has_center = true;   // false for the polynomial family
  int double_support = -1;  // outer vertex split into two copies, or -1
  std::vector<GraphEdge> edges;
};

/// Angle of outer vertex j on the unit circle for the orientation.
double outer_angle(Orientation o, int n_outer, int j);
/// Canonical straight-line layout of a vertex of g.
Point layout(const AdmissibleGraph& g, VertexRef v);

AdmissibleGraph build_graph(const tr::TrajectoryStructure& s);

/// Checks the admissibility invariants; `reason` receives the first violation.
bool check_admissible(const AdmissibleGraph& g, std::string* reason = nullptr);

/// Chord diagram Γ: O removed, doubly supported vertex split.
struct GammaDiagram {
  cb::WeightedChordDiagram diagram;  // diagonals only
  std::optional<cb::Chord> pole_side;  // the O chord when it became a polygon side
  std::vector<VertexRef> labels;       // Γ vertex -> outer vertex and copy
};

GammaDiagram to_chord_diagram(const AdmissibleGraph& g);
bool has_short(const AdmissibleGraph& g);
/// Canonical support-only encoding of Γ, used as a cell label.
std::string signature(const AdmissibleGraph& g);

// ---------------------------------------------------------------------------
// Merged and extended graphs

enum class Color { Horizontal = 0, Vertical = 1 };

struct PolygonVertex {
  Point p;
  Color color;
  int outer = 0;
  int copy = 0;
};

struct ColoredEdge {
  int a = -1, b = -1;  // indices into MergedGraph::polygon, or -1 for O
  Color color;
  double weight = 0.0;
  bool pole = false;
  std::vector<Point> path;  // drawn polyline from a to b
};

struct MergedGraph {
  int n_outer = 0;
  bool has_center = true;
  Point center;
  std::vector<Point> center_region;  // overlap of the two faces next to O (may be empty)
  bool warped[2] = {false, false};   // per color: edges drawn through a boundary-fixing warp
  std::vector<PolygonVertex> polygon;  // ccw, interlaced colors
  std::vector<ColoredEdge> edges;
  std::vector<AdmissibleGraph> sources;  // horizontal, vertical
  Point position(int idx) const { return idx < 0 ? center : polygon[idx].p; }
};

MergedGraph merge_graphs(const AdmissibleGraph& gh, const AdmissibleGraph& gv);

enum class NodeKind { Polygon, Pole, Crossing, Midpoint, Center, Bend };
enum class SegmentKind { PolygonSide, Colored, Spoke, CenterLink, PoleRule };

struct ExtNode {
  Point p;
  NodeKind kind;
  int ref = -1;  // polygon index, colored edge index for midpoints, face index for centers
};

struct ExtSegment {
  int a = -1, b = -1;
  SegmentKind kind;
  int edge = -1;  // colored edge for Colored pieces
};

struct ExtFace {
  std::vector<int> nodes;
  char type = '?';             // 'a'..'d'
  std::string identification;  // quadrant | strip-quarter | rectangle | pole-rectangle
  double width = 0.0;          // (b), (d): strip width; (c): horizontal side
  double height = 0.0;         // (c): vertical side
};

struct ExtendedGraph {
  MergedGraph merged;
  std::vector<ExtNode> nodes;
  std::vector<ExtSegment> segments;
  std::vector<int> centers;  // node index per arrangement face
  std::vector<ExtFace> faces;
  int arrangement_faces = 0;
  int crossings = 0;
  int non_star_faces = 0;  // faces whose center cannot see the whole boundary
};

ExtendedGraph extend_graph(const MergedGraph& g);

}  // namespace strata::nw
