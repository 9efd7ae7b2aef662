#include "webmap/lyapunov.hpp"

#include <cmath>
#include <stdexcept>

#include "webmap/stability.hpp"
#include "webmap/web_map.hpp"

namespace webmap {

std::string_view to_string(LyapunovMethod m) {
    return m == LyapunovMethod::tangent ? "tangent" : "divergence";
}

LyapunovEstimate lyapunov_tangent(PhaseState initial, const MapParams& params, std::uint64_t n) {
    if (n < 100) {
        throw std::invalid_argument("lyapunov_tangent needs at least 100 kicks");
    }
    LyapunovEstimate est;
    est.method = LyapunovMethod::tangent;
    est.requested_kicks = n;

    PhaseState s = initial;
    double vx = 1.0;
    double vp = 0.0;
    double log_sum = 0.0;
    std::uint64_t used = 0;
    for (; used < n; ++used) {
        JacobianMatrix J;
        PhaseState next;
        try {
            J = jacobian(s, params);
            next = step(s, params);
        } catch (const EscapeError&) {
            est.escaped = true;
            break;
        }
        const double wx = J.j11 * vx + J.j12 * vp;
        const double wp = J.j21 * vx + J.j22 * vp;
        const double norm = std::hypot(wx, wp);
        log_sum += std::log(norm);
        vx = wx / norm;
        vp = wp / norm;
        s = next;
    }
    est.n_kicks = used;
    est.value = used > 0 ? log_sum / static_cast<double>(used) : 0.0;
    return est;
}

namespace {

double fit_slope(const std::vector<double>& y, std::size_t count) {
    // Least-squares slope of y[k] against k = 0 .. count-1.
    const double n = static_cast<double>(count);
    const double k_mean = 0.5 * (n - 1.0);
    double y_mean = 0.0;
    for (std::size_t k = 0; k < count; ++k) y_mean += y[k];
    y_mean /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double dk = static_cast<double>(k) - k_mean;
        sxy += dk * (y[k] - y_mean);
        sxx += dk * dk;
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

DivergenceResult lyapunov_divergence(PhaseState initial, PhaseState offset, const MapParams& params,
                                     std::uint64_t n, const DivergenceOptions& options) {
    const double d0 = std::hypot(offset.x, offset.p);
    if (!(d0 > 0.0) || !(d0 < 1.0)) {
        throw std::invalid_argument("divergence offset must satisfy 0 < |offset| << 1");
    }
    if (!(options.saturation_fraction > 0.0)) {
        throw std::invalid_argument("saturation_fraction must be > 0");
    }

    DivergenceResult out;
    auto& est = out.estimate;
    est.method = LyapunovMethod::divergence;
    est.requested_kicks = n;
    out.log_distance.reserve(static_cast<std::size_t>(n) + 1);
    out.log_distance.push_back(std::log(d0));

    PhaseState s = initial;
    PhaseState t{initial.x + offset.x, initial.p + offset.p};
    double radius_sum = std::hypot(s.x, s.p);
    std::uint64_t k = 0;
    while (k < n) {
        try {
            s = step(s, params);
            t = step(t, params);
        } catch (const EscapeError&) {
            est.escaped = true;
            break;
        }
        ++k;
        const double d = std::hypot(t.x - s.x, t.p - s.p);
        out.log_distance.push_back(std::log(d));
        radius_sum += std::hypot(s.x, s.p);
        const double radius_scale = radius_sum / static_cast<double>(k + 1);
        if (!est.saturation_kick && d > options.saturation_fraction * radius_scale) {
            est.saturation_kick = k;
        }
    }
    est.n_kicks = k;

    const std::size_t window = est.saturation_kick ? static_cast<std::size_t>(*est.saturation_kick)
                                                   : out.log_distance.size();
    est.value = window >= 2 ? fit_slope(out.log_distance, window) : 0.0;
    return out;
}

}  // namespace webmap
