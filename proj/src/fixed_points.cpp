#include "webmap/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "webmap/web_map.hpp"

namespace webmap {

namespace {

constexpr double kDegenerateSine = 1e-12;
constexpr double kOriginMerge = 1e-8;

void require_rotation(const MapParams& params) {
    if (std::abs(params.b()) < kDegenerateSine) {
        throw DegenerateRotation("sin(theta) = 0: fixed-point line is undefined");
    }
}

double bisect(const MapParams& params, double c, double lo, double hi, double tol) {
    const double K = params.K();
    auto g = [&](double x) { return K * std::sinh(x) - c * x; };
    double glo = g(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi || (hi - lo) <= tol * std::max(1.0, std::abs(mid))) break;
        const double gmid = g(mid);
        if (gmid == 0.0) return mid;
        if ((gmid < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double fixed_line_slope(const MapParams& params) {
    require_rotation(params);
    return (1.0 - params.a()) / params.b();
}

double exact_fixed_line_slope(const MapParams& params) {
    require_rotation(params);
    return (params.a() - 1.0) / params.b();
}

double fixed_point_constant(const MapParams& params) {
    require_rotation(params);
    return 2.0 * (1.0 - params.a()) / params.b();
}

FixedPointSearch find_fixed_points(const MapParams& params, const FixedPointOptions& options) {
    if (!(options.search_radius > 0.0)) {
        throw std::invalid_argument("search_radius must be > 0");
    }
    if (options.grid_nodes < 2) {
        throw std::invalid_argument("grid_nodes must be >= 2");
    }

    FixedPointSearch result;
    auto classify = [&](PhaseState s, double residual) {
        FixedPoint fp;
        fp.state = s;
        fp.residual = residual;
        const EigenPair eig = eigenvalues(jacobian(s, params));
        fp.stability = eig.classification;
        fp.trace = eig.trace;
        return fp;
    };

    result.points.push_back(classify({0.0, 0.0}, 0.0));

    // With sin(theta) = 0 the rotation is +-identity and only the origin survives.
    if (std::abs(params.b()) < kDegenerateSine || params.K() == 0.0) {
        return result;
    }

    const double c = fixed_point_constant(params);
    const double slope = exact_fixed_line_slope(params);
    const double K = params.K();
    const double R = std::min(options.search_radius, kEscapeThreshold);
    const std::size_t n = options.grid_nodes;

    std::vector<double> roots;
    auto g = [&](double x) { return K * std::sinh(x) - c * x; };
    double x_prev = -R;
    double g_prev = g(x_prev);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(n - 1);
        const double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if (g_prev != 0.0 && (gx < 0.0) != (g_prev < 0.0)) {
            roots.push_back(bisect(params, c, x_prev, x, options.root_tolerance));
        }
        x_prev = x;
        g_prev = gx;
    }

    std::sort(roots.begin(), roots.end());
    for (double x : roots) {
        if (std::abs(x) < kOriginMerge) continue;
        const PhaseState s{x, slope * x};
        double residual = 0.0;
        try {
            const PhaseState next = step(s, params);
            residual = std::hypot(next.x - s.x, next.p - s.p);
        } catch (const EscapeError&) {
            ++result.rejected;
            continue;
        }
        if (!(residual < options.tolerance)) {
            ++result.rejected;
            continue;
        }
        result.points.push_back(classify(s, residual));
    }

    std::sort(result.points.begin(), result.points.end(),
              [](const FixedPoint& l, const FixedPoint& r) { return l.state.x < r.state.x; });
    return result;
}

}  // namespace webmap
