#include <cmath>

#include "kernel_impl.hpp"
#include "webmap/kernels.hpp"

namespace webmap::kernels {

namespace {

double kernel_exp(double v) {
    using namespace detail;
    const double n = std::nearbyint(v * kLog2e);
    double r = std::fma(-n, kLn2Hi, v);
    r = std::fma(-n, kLn2Lo, r);
    double poly = kExpPoly[13];
    for (int i = 12; i >= 0; --i) {
        poly = std::fma(poly, r, kExpPoly[i]);
    }
    return std::ldexp(poly, static_cast<int>(n));
}

}  // namespace

double kernel_sinh(double x) {
    using namespace detail;
    const double ax = std::abs(x);
    if (ax < 1.0) {
        const double y = x * x;
        double poly = kSinhSmall[8];
        for (int i = 7; i >= 0; --i) {
            poly = std::fma(poly, y, kSinhSmall[i]);
        }
        return x * poly;
    }
    const double e = kernel_exp(std::fmin(ax, kExpClamp));
    return std::copysign(0.5 * (e - 1.0 / e), x);
}

namespace detail {

void step_batch_scalar(double* x, double* p, std::size_t n, const MapParams& params) {
    const double K = params.K();
    const double a = params.a();
    const double b = params.b();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double pi = p[i];
        if (lane_escaped(xi, pi)) continue;
        const double u = std::fma(K, kernel_sinh(xi), pi);
        x[i] = std::fma(b, u, a * xi);
        p[i] = std::fma(a, u, -(b * xi));
    }
}

void sinh_batch_scalar(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = kernel_sinh(in[i]);
    }
}

}  // namespace detail

}  // namespace webmap::kernels
