#pragma once

#include <cstddef>
#include <vector>

#include "webmap/map_params.hpp"
#include "webmap/stability.hpp"

namespace webmap {

struct FixedPoint {
    PhaseState state;
    double residual = 0.0;  ///< |step(state) - state|
    StabilityClass stability = StabilityClass::elliptic;
    double trace = 0.0;
};

/// (1 - a) / b, the slope of the fixed-point line in its printed form.
/// Throws DegenerateRotation when sin(theta) vanishes.
double fixed_line_slope(const MapParams& params);

/// (a - 1) / b: the slope actually satisfied by exact fixed points of step().
double exact_fixed_line_slope(const MapParams& params);

/// Constant c in the scalar fixed-point condition K sinh x = c x, c = 2 (1 - a) / b.
double fixed_point_constant(const MapParams& params);

struct FixedPointOptions {
    double search_radius = 10.0;
    double tolerance = 1e-10;
    std::size_t grid_nodes = 10000;
    double root_tolerance = 1e-14;
};

struct FixedPointSearch {
    std::vector<FixedPoint> points;  ///< sorted by x, origin included when in range
    std::size_t rejected = 0;        ///< roots whose stepping residual exceeded the tolerance
};

/// Fixed points of step() with |x| <= search_radius, from grid-bracketing and
/// bisection on K sinh x - c x = 0, each verified by direct stepping.
FixedPointSearch find_fixed_points(const MapParams& params, const FixedPointOptions& options = {});

}  // namespace webmap
