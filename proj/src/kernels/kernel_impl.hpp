#pragma once

// Internal declarations shared by the kernel translation units.

#include <cstddef>

#include "webmap/map_params.hpp"

namespace webmap::kernels::detail {

// Taylor coefficients of sinh(x) / x in powers of x^2, through x^16 / 17!.
inline constexpr double kSinhSmall[] = {
    1.0,
    1.0 / 6.0,
    1.0 / 120.0,
    1.0 / 5040.0,
    1.0 / 362880.0,
    1.0 / 39916800.0,
    1.0 / 6227020800.0,
    1.0 / 1307674368000.0,
    1.0 / 355687428096000.0,
};

// exp(r) on |r| <= ln2 / 2, Taylor through r^13 / 13!.
inline constexpr double kExpPoly[] = {
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0,
};

inline constexpr double kLog2e = 1.4426950408889634;
inline constexpr double kLn2Hi = 0x1.62e42fefa39efp-1;
inline constexpr double kLn2Lo = 0x1.abc9e3b39803fp-56;
inline constexpr double kExpClamp = 709.0;

void step_batch_scalar(double* x, double* p, std::size_t n, const MapParams& params);
void sinh_batch_scalar(const double* in, double* out, std::size_t n);

#if defined(WEBMAP_BUILD_AVX2)
void step_batch_avx2(double* x, double* p, std::size_t n, const MapParams& params);
void sinh_batch_avx2(const double* in, double* out, std::size_t n);
#endif

}  // namespace webmap::kernels::detail
