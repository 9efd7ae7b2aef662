#include "webmap/physical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace webmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw std::domain_error(std::string(name) + " must be finite and > 0");
    }
}

}  // namespace

OptomechanicalParams laboratory_params() {
    OptomechanicalParams p;
    p.L = 2e-3;
    p.delta = kTwoPi * 1e7;
    p.m = 50e-15;  // 50 pg
    p.omega = kTwoPi * 134e3;
    p.omega_A = kTwoPi * 7e14;
    return p;
}

DerivedScales derive_scales(const OptomechanicalParams& p) {
    require_positive(p.L, "L");
    require_positive(p.delta, "delta");
    require_positive(p.m, "m");
    require_positive(p.omega, "omega");
    require_positive(p.omega_A, "omega_A");
    require_positive(p.nu, "nu");
    if (!std::isfinite(p.xi0) || p.xi0 < 0.0) {
        throw std::domain_error("xi0 must be finite and >= 0");
    }

    DerivedScales s;
    s.m = p.m;
    s.omega = p.omega;
    s.alpha = std::numbers::sqrt2 * p.omega_A / (p.L * p.delta);
    s.k = 2.0 * p.xi0 * p.xi0 / p.delta;
    s.T = kTwoPi / p.nu;
    s.K = s.alpha * s.k / (p.m * p.omega);
    s.q = p.nu / p.omega;
    s.theta = std::fmod(kTwoPi * (p.omega / p.nu), kTwoPi);
    return s;
}

MapParams DerivedScales::map_params() const {
    const double nearest = std::round(q);
    if (nearest >= 2.0 && std::abs(q - nearest) <= 1e-12 * nearest) {
        return MapParams::resonant(K, static_cast<std::int64_t>(nearest));
    }
    if (!(theta > 0.0)) {
        throw std::domain_error("kick period is a whole number of oscillator periods; rotation angle is 0");
    }
    return MapParams::from_theta(K, theta);
}

RegimeReport check_regime(const OptomechanicalParams& p, double x_max_dimless) {
    require_positive(p.L, "L");
    require_positive(p.delta, "delta");
    require_positive(p.omega_A, "omega_A");
    RegimeReport r;
    const double alpha = std::numbers::sqrt2 * p.omega_A / (p.L * p.delta);
    r.x_max_m = std::abs(x_max_dimless) / alpha;
    r.length_scale = std::abs(p.delta / p.omega_A) * p.L;
    r.ratio = r.x_max_m / r.length_scale;
    r.warn = r.ratio > kRegimeWarnRatio;
    return r;
}

PhaseState to_dimensionless(PhysicalState s, const DerivedScales& scales) {
    return {scales.alpha * s.x, scales.alpha * s.p / (scales.m * scales.omega)};
}

PhysicalState from_dimensionless(PhaseState s, const DerivedScales& scales) {
    return {s.x / scales.alpha, s.p * (scales.m * scales.omega) / scales.alpha};
}

}  // namespace webmap
