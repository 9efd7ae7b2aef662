#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "webmap/kernels.hpp"
#include "webmap/map_params.hpp"

namespace webmap {

struct Viewport {
    double x_min = -30.0;
    double x_max = 30.0;
    double p_min = -30.0;
    double p_max = 30.0;

    bool valid() const { return x_max > x_min && p_max > p_min; }
    bool contains(PhaseState s) const {
        return s.x >= x_min && s.x <= x_max && s.p >= p_min && s.p <= p_max;
    }
    bool contains(const Viewport& inner) const {
        return inner.x_min >= x_min && inner.x_max <= x_max && inner.p_min >= p_min && inner.p_max <= p_max;
    }
    friend bool operator==(const Viewport&, const Viewport&) = default;
};

struct ExplicitInitials {
    std::vector<PhaseState> states;
};

/// Lattice of nx * np points over a box, optionally with the origin appended.
struct GridInitials {
    Viewport box;
    std::size_t nx = 21;
    std::size_t np = 21;
    bool include_origin = true;
};

struct RandomInitials {
    std::size_t count = 1;
    Viewport box{-0.5, 0.5, -0.5, 0.5};
    std::uint64_t seed = 1;
};

using InitialSpec = std::variant<ExplicitInitials, GridInitials, RandomInitials>;

std::vector<PhaseState> materialize(const InitialSpec& initials);
std::string describe(const InitialSpec& initials);

enum class PortraitMode { points, grid };

struct PortraitSpec {
    MapParams params = MapParams::resonant(0.01, 4);
    InitialSpec initials = GridInitials{};
    std::uint64_t n_kicks = 15000;
    Viewport viewport;
    PortraitMode mode = PortraitMode::points;
    std::size_t nx = 512;
    std::size_t np = 512;

    /// Throws std::invalid_argument on a degenerate viewport or bin count < 2 in grid mode.
    void validate() const;
};

/// Visit counts over a viewport, row-major with rows indexed by p bin and
/// columns by x bin. Counts saturate at 2^32 - 1; increments lost to
/// saturation are tallied so the totals still balance.
struct OccupancyGrid {
    Viewport viewport;
    std::size_t nx = 0;
    std::size_t np = 0;
    std::vector<std::uint32_t> counts;
    std::uint64_t total_points = 0;      ///< iterates that would have been generated without escapes
    std::uint64_t out_of_viewport = 0;
    std::uint64_t escaped_tail = 0;      ///< iterates never generated because the orbit escaped
    std::uint64_t escaped_orbits = 0;
    std::uint64_t saturated = 0;

    OccupancyGrid() = default;
    OccupancyGrid(Viewport v, std::size_t nx_bins, std::size_t np_bins);

    std::uint32_t at(std::size_t ix, std::size_t ip) const { return counts[ip * nx + ix]; }
    std::uint64_t binned() const;

    /// Adds one iterate; points outside the viewport are only tallied.
    void add(PhaseState s);
    /// Commutative merge of another grid over the same bins.
    void merge(const OccupancyGrid& other);

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;
};

/// Bin index of s along one axis, or nullopt when outside [lo, hi]. The upper
/// edge belongs to the last bin.
std::optional<std::size_t> bin_index(double v, double lo, double hi, std::size_t n);

struct PortraitResult {
    std::vector<PhaseState> cloud;   ///< points mode: every iterate, orbit by orbit
    std::optional<OccupancyGrid> grid;
    std::uint64_t n_orbits = 0;
    std::uint64_t total_iterates = 0;
    std::uint64_t escaped_orbits = 0;
    std::uint64_t escaped_tail = 0;
};

struct EngineOptions {
    unsigned threads = 1;
    kernels::Isa isa = kernels::best_available();
};

/// Stroboscopic section: iterates every initial condition n_kicks times and
/// records every iterate, either as a point cloud or binned into a grid.
PortraitResult render_portrait(const PortraitSpec& spec, const EngineOptions& options = {});

/// Re-runs the portrait keeping only points inside window, binned at
/// refine times the spec's resolution. Throws if window is not inside the viewport.
OccupancyGrid magnify(const PortraitSpec& spec, const Viewport& window, std::size_t refine,
                      const EngineOptions& options = {});

/// Bins a point cloud the same way render_portrait bins in grid mode.
OccupancyGrid bin_cloud(const std::vector<PhaseState>& cloud, const Viewport& viewport, std::size_t nx,
                        std::size_t np);

}  // namespace webmap
