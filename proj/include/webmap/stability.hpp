#pragma once

#include <complex>
#include <string_view>

#include "webmap/map_params.hpp"

namespace webmap {

enum class StabilityClass { elliptic, hyperbolic, parabolic };

std::string_view to_string(StabilityClass c);

/// Tangent map of step() at a state, row-major.
struct JacobianMatrix {
    double j11 = 1.0, j12 = 0.0;
    double j21 = 0.0, j22 = 1.0;

    double trace() const { return j11 + j22; }
    double determinant() const { return j11 * j22 - j12 * j21; }
};

struct EigenPair {
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    double trace = 0.0;
    StabilityClass classification = StabilityClass::elliptic;
};

inline constexpr double kParabolicTolerance = 1e-9;

/// d step / d(x, p) = [[a + b K cosh x, b], [-b + a K cosh x, a]].
/// Throws EscapeError when cosh(x) overflows.
JacobianMatrix jacobian(PhaseState s, const MapParams& params);

/// Eigenvalues of a unit-determinant 2x2 matrix, (Tr +- sqrt(Tr^2 - 4)) / 2.
EigenPair eigenvalues(const JacobianMatrix& J);

StabilityClass classify_trace(double trace, double tolerance = kParabolicTolerance);

}  // namespace webmap
