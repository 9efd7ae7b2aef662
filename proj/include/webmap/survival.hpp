#pragma once

#include <cstdint>
#include <vector>

#include "webmap/kernels.hpp"
#include "webmap/map_params.hpp"

namespace webmap {

struct SurvivalCurve {
    double r_c = 0.0;
    std::uint64_t n_total = 0;
    std::vector<double> p_s;  ///< p_s[n] = 1 - N_E(n) / N_T, n = 0 .. n_max

    /// Number of kicks until p_s first drops to or below the level, or p_s.size() if never.
    std::size_t time_to(double level) const;
};

struct SurvivalOptions {
    unsigned threads = 1;
    kernels::Isa isa = kernels::best_available();
};

/// Fraction of the ensemble still inside the disk x^2 + p^2 < r_c^2 after each
/// kick. A member leaves for good at the first kick with x^2 + p^2 >= r_c^2.
/// Throws std::invalid_argument if a member starts outside the disk.
SurvivalCurve survival_probability(const std::vector<PhaseState>& ensemble, const MapParams& params,
                                   double r_c, std::uint64_t n_max, const SurvivalOptions& options = {});

}  // namespace webmap
