#pragma once

#include <string>

#include <json.hpp>

#include "strata/network.hpp"
#include "strata/scanner.hpp"

namespace strata::io {

using Json = nlohmann::ordered_json;

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

Json to_json(const qd::QuadDiff& q);
Json to_json(const tr::TrajectoryStructure& s);
Json to_json(const nw::AdmissibleGraph& g);
Json to_json(const nw::GammaDiagram& d);
Json to_json(const cb::WeightedChordDiagram& d);
Json to_json(const cb::BalancedWeight& f);
Json to_json(const cb::FanFace& f);
Json to_json(const nw::ExtendedGraph& g);
Json walls_to_json(const sc::WallMap& m);

/// Inverse of to_json for graphs; throws InvalidArgument on malformed input.
nw::AdmissibleGraph graph_from_json(const Json& j);
cb::WeightedChordDiagram diagram_from_json(const Json& j);

/// Columns i, j, t, s, label_h, label_v, flags. Flags: h / v the grid point itself is
/// labeled WALL, H / V a wall edge touches it, p pole-zero connection, S singular,
/// F failed.
std::string wallmap_csv(const sc::WallMap& m);
/// Binary P6 raster, one panel per orientation, `cell` pixels per grid point.
std::string wallmap_ppm(const sc::WallMap& m, int cell = 8);

std::string structure_svg(const tr::TrajectoryStructure& s);
std::string extended_svg(const nw::ExtendedGraph& g);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace strata::io
