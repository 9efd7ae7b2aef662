#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "webmap/map_params.hpp"

namespace webmap {

enum class LyapunovMethod { tangent, divergence };

std::string_view to_string(LyapunovMethod m);

struct LyapunovEstimate {
    double value = 0.0;                    ///< per kick
    LyapunovMethod method = LyapunovMethod::tangent;
    std::uint64_t n_kicks = 0;             ///< kicks actually used
    std::uint64_t requested_kicks = 0;
    bool escaped = false;                  ///< orbit escaped; estimate covers the completed prefix
    std::optional<std::uint64_t> saturation_kick;
};

/// Largest Lyapunov exponent from a renormalized tangent vector carried
/// through the Jacobian along the orbit: (1/n) sum log |J_i v_i|.
/// Requires n >= 100.
LyapunovEstimate lyapunov_tangent(PhaseState initial, const MapParams& params, std::uint64_t n);

struct DivergenceOptions {
    double saturation_fraction = 0.1;  ///< stop the fit once |delta| exceeds this fraction of |z|
};

struct DivergenceResult {
    LyapunovEstimate estimate;
    std::vector<double> log_distance;  ///< ln |delta(k)| for k = 0 .. completed kicks
};

/// Exponent from the separation of two nearby orbits: slope of a least-squares
/// line through ln |delta(k)| over the pre-saturation window.
DivergenceResult lyapunov_divergence(PhaseState initial, PhaseState offset, const MapParams& params,
                                     std::uint64_t n, const DivergenceOptions& options = {});

}  // namespace webmap
