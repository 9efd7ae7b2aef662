#include "webmap/stability.hpp"

#include <cmath>
#include <string>

namespace webmap {

std::string_view to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::elliptic: return "elliptic";
        case StabilityClass::hyperbolic: return "hyperbolic";
        case StabilityClass::parabolic: return "parabolic";
    }
    return "unknown";
}

JacobianMatrix jacobian(PhaseState s, const MapParams& params) {
    if (!(std::abs(s.x) <= kEscapeThreshold)) {
        throw EscapeError("jacobian outside the escape radius: |x| = " + std::to_string(std::abs(s.x)));
    }
    const double a = params.a();
    const double b = params.b();
    const double shear = params.K() * std::cosh(s.x);
    return {a + b * shear, b, -b + a * shear, a};
}

StabilityClass classify_trace(double trace, double tolerance) {
    const double excess = std::abs(trace) - 2.0;
    if (std::abs(excess) <= tolerance) return StabilityClass::parabolic;
    return excess < 0.0 ? StabilityClass::elliptic : StabilityClass::hyperbolic;
}

EigenPair eigenvalues(const JacobianMatrix& J) {
    EigenPair out;
    out.trace = J.trace();
    out.classification = classify_trace(out.trace);

    const double tr = out.trace;
    const double det = J.determinant();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        // Larger root first, smaller one by Vieta to avoid cancellation.
        const double root = std::sqrt(disc);
        const double big = 0.5 * (tr + std::copysign(root, tr));
        const double small = big != 0.0 ? det / big : 0.0;
        const bool big_is_plus = tr >= 0.0;
        out.lambda_plus = big_is_plus ? big : small;
        out.lambda_minus = big_is_plus ? small : big;
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        out.lambda_plus = {0.5 * tr, im};
        out.lambda_minus = {0.5 * tr, -im};
    }
    return out;
}

}  // namespace webmap
