#include "webmap/output.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <ostream>

namespace webmap {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

nlohmann::ordered_json params_json(const MapParams& params) {
    nlohmann::ordered_json j;
    j["K"] = params.K();
    j["theta"] = params.theta();
    if (params.q()) {
        j["q"] = params.q()->str();
    } else {
        j["q"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json provenance_json(kernels::Isa isa) {
    nlohmann::ordered_json j;
    j["program"] = "webmap";
    j["version"] = kVersion;
    j["batch_kernel"] = kernels::name(isa);
    j["fp_contract"] = "off";
    j["escape_threshold"] = kEscapeThreshold;
    return j;
}

void write_cloud_csv(std::ostream& os, std::span<const PhaseState> cloud, const nlohmann::ordered_json& metadata) {
    os << "# metadata: " << metadata.dump() << '\n';
    os << "x,p\n";
    std::string line;
    for (const auto& s : cloud) {
        line.clear();
        line += format_double(s.x);
        line += ',';
        line += format_double(s.p);
        line += '\n';
        os << line;
    }
}

nlohmann::ordered_json grid_header(const OccupancyGrid& grid) {
    nlohmann::ordered_json j;
    j["viewport"] = {{"x_min", grid.viewport.x_min},
                     {"x_max", grid.viewport.x_max},
                     {"p_min", grid.viewport.p_min},
                     {"p_max", grid.viewport.p_max}};
    j["nx"] = grid.nx;
    j["np"] = grid.np;
    j["layout"] = "row-major, rows are p bins from p_min, columns are x bins from x_min";
    j["total_points"] = grid.total_points;
    j["binned"] = grid.binned();
    j["out_of_viewport"] = grid.out_of_viewport;
    j["escaped_tail"] = grid.escaped_tail;
    j["escaped_orbits"] = grid.escaped_orbits;
    j["saturated"] = grid.saturated;
    return j;
}

void write_grid_json(std::ostream& os, const OccupancyGrid& grid, const nlohmann::ordered_json& metadata) {
    nlohmann::ordered_json j;
    j["metadata"] = metadata;
    j["grid"] = grid_header(grid);
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t ip = 0; ip < grid.np; ++ip) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t ix = 0; ix < grid.nx; ++ix) row.push_back(grid.at(ix, ip));
        rows.push_back(std::move(row));
    }
    j["counts"] = std::move(rows);
    os << j.dump() << '\n';
}

void write_grid_binary(std::ostream& os, const OccupancyGrid& grid, const nlohmann::ordered_json& metadata) {
    nlohmann::ordered_json header;
    header["metadata"] = metadata;
    header["grid"] = grid_header(grid);
    header["dtype"] = "uint32-le";
    os << header.dump() << '\n';
    for (auto c : grid.counts) {
        if constexpr (std::endian::native == std::endian::big) c = __builtin_bswap32(c);
        os.write(reinterpret_cast<const char*>(&c), sizeof(c));
    }
}

}  // namespace webmap
