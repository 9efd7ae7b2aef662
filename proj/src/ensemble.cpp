#include "webmap/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace webmap {

std::vector<PhaseState> disk_ensemble(PhaseState center, double radius, std::size_t count,
                                      std::uint64_t seed) {
    if (!(radius >= 0.0)) {
        throw std::invalid_argument("disk_ensemble: radius must be >= 0");
    }
    UniformSource rng(seed);
    std::vector<PhaseState> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = radius * std::sqrt(rng.next());
        const double phi = 2.0 * std::numbers::pi * rng.next();
        out.push_back({center.x + r * std::cos(phi), center.p + r * std::sin(phi)});
    }
    return out;
}

std::vector<PhaseState> box_ensemble(double x_min, double x_max, double p_min, double p_max,
                                     std::size_t count, std::uint64_t seed) {
    if (!(x_max >= x_min) || !(p_max >= p_min)) {
        throw std::invalid_argument("box_ensemble: empty box");
    }
    UniformSource rng(seed);
    std::vector<PhaseState> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = rng.uniform(x_min, x_max);
        const double p = rng.uniform(p_min, p_max);
        out.push_back({x, p});
    }
    return out;
}

std::vector<PhaseState> grid_ensemble(double x_min, double x_max, double p_min, double p_max,
                                      std::size_t nx, std::size_t np) {
    if (nx == 0 || np == 0) {
        throw std::invalid_argument("grid_ensemble: counts must be >= 1");
    }
    auto node = [](double lo, double hi, std::size_t i, std::size_t n) {
        return n == 1 ? 0.5 * (lo + hi)
                      : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    std::vector<PhaseState> out;
    out.reserve(nx * np);
    for (std::size_t j = 0; j < np; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            out.push_back({node(x_min, x_max, i, nx), node(p_min, p_max, j, np)});
        }
    }
    return out;
}

}  // namespace webmap
