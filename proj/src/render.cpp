#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "strata/io.hpp"

namespace strata::io {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

struct Rgb {
  unsigned char r, g, b;
};

Rgb label_color(const std::string& label) {
  if (label == sc::kSingular) return {0, 0, 0};
  if (label == sc::kFailed) return {128, 128, 128};
  if (label == sc::kWall) return {255, 255, 255};
  if (label.empty()) return {60, 60, 60};
  const std::uint32_t h = fnv1a(label);
  // keep colors light so the wall overlay stays visible
  return {static_cast<unsigned char>(90 + (h & 0xff) % 150), static_cast<unsigned char>(90 + ((h >> 8) & 0xff) % 150),
          static_cast<unsigned char>(90 + ((h >> 16) & 0xff) % 150)};
}

std::string svg_header(double x0, double y0, double w, double h) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"" << num(x0) << " " << num(y0)
     << " " << num(w) << " " << num(h) << "\">\n";
  return os.str();
}

// SVG y grows downward; flip.
std::string pt(double x, double y) { return num(x) + "," + num(-y); }

}  // namespace

std::string wallmap_csv(const sc::WallMap& m) {
  std::set<std::pair<int, int>> touch_h, touch_v;
  auto mark = [&](Orientation o, int i0, int j0, int i1, int j1) {
    auto& s = o == Orientation::Horizontal ? touch_h : touch_v;
    s.insert({i0, j0});
    s.insert({i1, j1});
  };
  for (const auto& w : m.walls) mark(w.orientation, w.i0, w.j0, w.i1, w.j1);
  for (const auto& u : m.unresolved) mark(u.orientation, u.i0, u.j0, u.i1, u.j1);

  std::ostringstream os;
  os << "i,j,t,s,label_h,label_v,flags\n";
  for (const auto& c : m.cells) {
    std::string flags;
    if (c.h.label == sc::kWall) flags += 'h';
    if (c.v.label == sc::kWall) flags += 'v';
    if (touch_h.count({c.i, c.j})) flags += 'H';
    if (touch_v.count({c.i, c.j})) flags += 'V';
    if (c.h.note == sc::kPoleZeroNote || c.v.note == sc::kPoleZeroNote) flags += 'p';
    if (c.h.label == sc::kSingular || c.v.label == sc::kSingular) flags += 'S';
    if (c.h.label == sc::kFailed || c.v.label == sc::kFailed) flags += 'F';
    os << c.i << "," << c.j << "," << exact(c.t) << "," << exact(c.s) << "," << quoted(c.h.label) << ","
       << quoted(c.v.label) << "," << flags << "\n";
  }
  return os.str();
}

std::string wallmap_ppm(const sc::WallMap& m, int cell) {
  if (cell < 1) fail(ErrorCode::InvalidArgument, "cell size must be positive");
  const auto& spec = m.spec;
  std::vector<Orientation> panels;
  if (spec.orientations != sc::Selector::Vertical) panels.push_back(Orientation::Horizontal);
  if (spec.orientations != sc::Selector::Horizontal) panels.push_back(Orientation::Vertical);
  const int gap = cell;
  const int pw = spec.nx * cell, ph = spec.ny * cell;
  const int width = static_cast<int>(panels.size()) * pw + (static_cast<int>(panels.size()) - 1) * gap;
  const int height = ph;
  std::vector<Rgb> img(static_cast<std::size_t>(width) * height, Rgb{255, 255, 255});
  auto put = [&](int x, int y, Rgb c) {
    if (x >= 0 && x < width && y >= 0 && y < height) img[static_cast<std::size_t>(y) * width + x] = c;
  };
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const int ox = static_cast<int>(p) * (pw + gap);
    for (const auto& c : m.cells) {
      const Rgb col = label_color(panels[p] == Orientation::Horizontal ? c.h.label : c.v.label);
      const int y0 = (spec.ny - 1 - c.j) * cell;
      for (int dy = 0; dy < cell; ++dy)
        for (int dx = 0; dx < cell; ++dx) put(ox + c.i * cell + dx, y0 + dy, col);
    }
    for (const auto& w : m.walls) {
      if (w.orientation != panels[p]) continue;
      // grid point (i, j) is the center of its block
      const double gx = w.i0 + w.u * (w.i1 - w.i0), gy = w.j0 + w.u * (w.j1 - w.j0);
      const int cx = ox + static_cast<int>(std::lround((gx + 0.5) * cell - 0.5));
      const int cy = static_cast<int>(std::lround((spec.ny - 1 - gy + 0.5) * cell - 0.5));
      const Rgb col = w.kind == sc::WallKind::Short ? Rgb{200, 0, 0} : Rgb{0, 0, 200};
      const int r = std::max(1, cell / 4);
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) put(cx + dx, cy + dy, col);
    }
  }
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + img.size() * 3);
  for (const auto& c : img) {
    out += static_cast<char>(c.r);
    out += static_cast<char>(c.g);
    out += static_cast<char>(c.b);
  }
  return out;
}

std::string structure_svg(const tr::TrajectoryStructure& s) {
  double extent = 1.0;
  for (const auto& c : s.qd.critical_points()) extent = std::max(extent, std::abs(c.z));
  const double R = 2.5 * extent;
  const double stroke = R / 300.0;
  auto clipped = [&](const std::vector<Complex>& pts) {
    std::vector<Complex> out;
    for (const auto& p : pts) {
      out.push_back(p);
      if (std::abs(p) > 1.2 * R) break;
    }
    return out;
  };

  std::ostringstream os;
  os << svg_header(-R, -R, 2 * R, 2 * R);
  os << "<rect x=\"" << num(-R) << "\" y=\"" << num(-R) << "\" width=\"" << num(2 * R) << "\" height=\"" << num(2 * R)
     << "\" fill=\"white\"/>\n";

  // half-planes: boundary chain closed along a circle of radius 1.2 R
  const char* shades[] = {"#fde6b3", "#cfe8fc", "#d9f2d0", "#f6d3e8", "#e4dcf7", "#fbd7c4"};
  for (std::size_t h = 0; h < s.half_planes.size(); ++h) {
    const auto& hp = s.half_planes[h];
    if (hp.arc.from < 0 || hp.arc.to < 0) continue;
    const auto& tin = s.trajectories[s.endpoints[hp.arc.from].trajectory];
    const auto& tout = s.trajectories[s.endpoints[hp.arc.to].trajectory];
    std::vector<Complex> poly;
    auto a = clipped(tin.points);
    poly.insert(poly.end(), a.rbegin(), a.rend());
    auto b = clipped(tout.points);
    poly.insert(poly.end(), b.begin(), b.end());
    if (poly.size() < 2) continue;
    double ang_to = std::arg(poly.back()), ang_from = std::arg(poly.front());
    while (ang_to < ang_from) ang_to += 2 * M_PI;
    // clockwise from the outgoing end back to the incoming one
    const int steps = 48;
    for (int m = 0; m <= steps; ++m) {
      const double ang = ang_to - (ang_to - ang_from) * m / steps;
      poly.push_back(std::polar(1.2 * R, ang));
    }
    os << "<polygon fill=\"" << shades[h % 6] << "\" fill-opacity=\"0.7\" stroke=\"none\" points=\"";
    for (std::size_t m = 0; m < poly.size(); ++m) os << (m ? " " : "") << pt(poly[m].real(), poly[m].imag());
    os << "\"/>\n";
  }

  const char* color = s.orientation == Orientation::Horizontal ? "#1f4e9c" : "#b8312f";
  for (const auto& t : s.trajectories) {
    const auto pts = clipped(t.points);
    if (pts.size() < 2) continue;
    const bool connection = t.termination == tr::Termination::HitsCritical;
    os << "<polyline fill=\"none\" stroke=\"" << (connection ? "#111111" : color) << "\" stroke-width=\""
       << num(connection ? 2 * stroke : stroke) << "\" points=\"";
    for (std::size_t m = 0; m < pts.size(); ++m) os << (m ? " " : "") << pt(pts[m].real(), pts[m].imag());
    os << "\"/>\n";
  }
  for (const auto& c : s.qd.critical_points()) {
    if (c.is_pole()) {
      os << "<circle cx=\"" << num(c.z.real()) << "\" cy=\"" << num(-c.z.imag()) << "\" r=\"" << num(4 * stroke)
         << "\" fill=\"white\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\"/>\n";
    } else {
      os << "<circle cx=\"" << num(c.z.real()) << "\" cy=\"" << num(-c.z.imag()) << "\" r=\"" << num(4 * stroke)
         << "\" fill=\"black\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string extended_svg(const nw::ExtendedGraph& g) {
  const double R = 1.15, stroke = 0.004;
  std::ostringstream os;
  os << svg_header(-R, -R, 2 * R, 2 * R);
  os << "<rect x=\"" << num(-R) << "\" y=\"" << num(-R) << "\" width=\"" << num(2 * R) << "\" height=\"" << num(2 * R)
     << "\" fill=\"white\"/>\n";
  auto fill_of = [](char type) {
    switch (type) {
      case 'a': return "#fff2b3";
      case 'b': return "#d6f0c8";
      case 'c': return "#cfe3fa";
      case 'd': return "#f7d4e4";
      default: return "#eeeeee";
    }
  };
  for (const auto& f : g.faces) {
    os << "<polygon fill=\"" << fill_of(f.type) << "\" stroke=\"none\" points=\"";
    for (std::size_t m = 0; m < f.nodes.size(); ++m) {
      const auto& p = g.nodes[f.nodes[m]].p;
      os << (m ? " " : "") << pt(p.x, p.y);
    }
    os << "\"/>\n";
  }
  for (const auto& s : g.segments) {
    const auto &a = g.nodes[s.a].p, &b = g.nodes[s.b].p;
    std::string style;
    switch (s.kind) {
      case nw::SegmentKind::PolygonSide: style = "stroke=\"#555555\" stroke-width=\"" + num(stroke) + "\""; break;
      case nw::SegmentKind::Colored: {
        const bool h = g.merged.edges[s.edge].color == nw::Color::Horizontal;
        style = std::string("stroke=\"") + (h ? "#1f4e9c" : "#b8312f") + "\" stroke-width=\"" + num(2 * stroke) + "\"";
        break;
      }
      case nw::SegmentKind::Spoke:
      case nw::SegmentKind::CenterLink:
        style = "stroke=\"#888888\" stroke-width=\"" + num(stroke / 2) + "\" stroke-dasharray=\"" + num(4 * stroke) + "\"";
        break;
      case nw::SegmentKind::PoleRule: style = "stroke=\"#2e8b57\" stroke-width=\"" + num(stroke) + "\""; break;
    }
    os << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(-a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(-b.y)
       << "\" " << style << "/>\n";
  }
  for (const auto& n : g.nodes) {
    if (n.kind == nw::NodeKind::Bend) continue;
    const char* fill = n.kind == nw::NodeKind::Pole ? "white" : n.kind == nw::NodeKind::Center ? "#888888" : "black";
    const double r = n.kind == nw::NodeKind::Center || n.kind == nw::NodeKind::Midpoint ? 2 * stroke : 4 * stroke;
    os << "<circle cx=\"" << num(n.p.x) << "\" cy=\"" << num(-n.p.y) << "\" r=\"" << num(r) << "\" fill=\"" << fill
       << "\" stroke=\"black\" stroke-width=\"" << num(stroke / 2) << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace strata::io
