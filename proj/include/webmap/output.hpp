#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "webmap/map_params.hpp"
#include "webmap/portrait.hpp"

namespace webmap {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Reproduction metadata common to every output file: map parameters and
/// program version.
nlohmann::ordered_json params_json(const MapParams& params);
nlohmann::ordered_json provenance_json(kernels::Isa isa);

/// CSV point cloud: one "# metadata: {...}" comment line, a "x,p" header,
/// then one iterate per row.
void write_cloud_csv(std::ostream& os, std::span<const PhaseState> cloud, const nlohmann::ordered_json& metadata);

/// Grid as a single JSON document; counts are a list of rows (one per p bin).
void write_grid_json(std::ostream& os, const OccupancyGrid& grid, const nlohmann::ordered_json& metadata);

/// Grid as one JSON header line, a newline, then nx * np little-endian
/// uint32 counts in row-major order.
void write_grid_binary(std::ostream& os, const OccupancyGrid& grid, const nlohmann::ordered_json& metadata);

nlohmann::ordered_json grid_header(const OccupancyGrid& grid);

}  // namespace webmap
