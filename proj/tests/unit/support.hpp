#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>

#include "webmap/map_params.hpp"

namespace webmap::test {

/// Hand-rolled generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    PhaseState state(double r) { return {real(-r, r), real(-r, r)}; }
    MapParams resonant(double k_max = 1.0) { return MapParams::resonant(real(0.0, k_max), integer(3, 8)); }

private:
    std::mt19937_64 engine_;
};

/// 0.01 * sinh(1) summed from its Taylor series in long double.
inline long double sinh_series(long double x) {
    long double term = x, sum = x;
    for (int n = 1; n < 40; ++n) {
        term *= x * x / ((2.0L * n) * (2.0L * n + 1.0L));
        sum += term;
    }
    return sum;
}

inline std::uint64_t bits(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return u;
}

/// Distance in units in the last place between two finite doubles of equal sign.
inline std::uint64_t ulp_distance(double a, double b) {
    const auto ua = bits(std::abs(a)), ub = bits(std::abs(b));
    return ua > ub ? ua - ub : ub - ua;
}

}  // namespace webmap::test
