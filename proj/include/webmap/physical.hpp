#pragma once

#include <optional>

#include "webmap/map_params.hpp"

namespace webmap {

/// Physical optomechanical setup in SI units; all frequencies angular (rad/s).
struct OptomechanicalParams {
    double L = 0.0;        ///< cavity length, m
    double delta = 0.0;    ///< optical detuning, rad/s
    double m = 0.0;        ///< effective membrane mass, kg
    double omega = 0.0;    ///< membrane eigenfrequency, rad/s
    double omega_A = 0.0;  ///< cavity eigenfrequency, rad/s
    double xi0 = 0.0;      ///< drive amplitude, rad/s; zero means no kicks
    double nu = 0.0;       ///< kick (drive) frequency, rad/s
};

/// Laboratory values quoted for the membrane experiment. xi0 and nu are not
/// quoted there and are left at zero.
OptomechanicalParams laboratory_params();

struct DerivedScales {
    double alpha = 0.0;  ///< inverse length sqrt(2) omega_A / (L delta), 1/m
    double k = 0.0;      ///< kick amplitude 2 xi0^2 / delta
    double T = 0.0;      ///< kick period 2 pi / nu, s
    double K = 0.0;      ///< alpha k / (m omega)
    double theta = 0.0;  ///< omega T reduced into (0, 2 pi)
    double q = 0.0;      ///< nu / omega
    double m = 0.0;
    double omega = 0.0;

    /// Map parameters implied by the scales. Throws if theta reduced to 0.
    MapParams map_params() const;
};

/// Throws std::domain_error if a field that the formula needs is not strictly
/// positive. xi0 may be zero; nu is needed only for T, theta and q.
DerivedScales derive_scales(const OptomechanicalParams& p);

struct RegimeReport {
    double x_max_m = 0.0;      ///< amplitude converted back to meters
    double length_scale = 0.0; ///< |delta / omega_A| L
    double ratio = 0.0;
    bool warn = false;
};

inline constexpr double kRegimeWarnRatio = 0.1;

/// Checks x << |delta / omega_A| L for the cosh approximation at a given
/// dimensionless amplitude.
RegimeReport check_regime(const OptomechanicalParams& p, double x_max_dimless);

struct PhysicalState {
    double x = 0.0;  ///< m
    double p = 0.0;  ///< kg m / s
};

PhaseState to_dimensionless(PhysicalState s, const DerivedScales& scales);
PhysicalState from_dimensionless(PhaseState s, const DerivedScales& scales);

}  // namespace webmap
