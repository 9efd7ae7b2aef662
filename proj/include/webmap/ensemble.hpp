#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "webmap/map_params.hpp"

namespace webmap {

/// Seeded source of uniform doubles in [0, 1). The mapping from engine output
/// to double is fixed here so that ensembles are identical across standard
/// library implementations.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

/// Points uniform in the disk of the given radius around center.
std::vector<PhaseState> disk_ensemble(PhaseState center, double radius, std::size_t count,
                                      std::uint64_t seed);

/// Points uniform in the box [x_min, x_max] x [p_min, p_max].
std::vector<PhaseState> box_ensemble(double x_min, double x_max, double p_min, double p_max,
                                     std::size_t count, std::uint64_t seed);

/// nx * np lattice covering the box, row-major in p then x, endpoints included.
std::vector<PhaseState> grid_ensemble(double x_min, double x_max, double p_min, double p_max,
                                      std::size_t nx, std::size_t np);

}  // namespace webmap
