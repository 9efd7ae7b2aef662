#include <immintrin.h>

#include <cfloat>

#include "kernel_impl.hpp"

namespace webmap::kernels::detail {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// 2^n for integral n in [-1023, 1024) held as doubles.
inline __m256d pow2_pd(__m256d n) {
    const __m256d magic = _mm256_set1_pd(0x1.8p52);
    const __m256d biased = _mm256_add_pd(_mm256_add_pd(n, _mm256_set1_pd(1023.0)), magic);
    return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_castpd_si256(biased), 52));
}

inline __m256d exp_pd(__m256d v) {
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(v, _mm256_set1_pd(kLog2e)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), v);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);
    __m256d poly = _mm256_set1_pd(kExpPoly[13]);
    for (int i = 12; i >= 0; --i) {
        poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(kExpPoly[i]));
    }
    return _mm256_mul_pd(poly, pow2_pd(n));
}

inline __m256d sinh_pd(__m256d x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d ax = abs_pd(x);

    const __m256d y = _mm256_mul_pd(x, x);
    __m256d small = _mm256_set1_pd(kSinhSmall[8]);
    for (int i = 7; i >= 0; --i) {
        small = _mm256_fmadd_pd(small, y, _mm256_set1_pd(kSinhSmall[i]));
    }
    small = _mm256_mul_pd(x, small);

    const __m256d e = exp_pd(_mm256_min_pd(ax, _mm256_set1_pd(kExpClamp)));
    const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), e);
    __m256d large = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_sub_pd(e, inv));
    large = _mm256_or_pd(large, _mm256_and_pd(x, sign));

    const __m256d is_small = _mm256_cmp_pd(ax, _mm256_set1_pd(1.0), _CMP_LT_OQ);
    return _mm256_blendv_pd(large, small, is_small);
}

}  // namespace

void step_batch_avx2(double* x, double* p, std::size_t n, const MapParams& params) {
    const __m256d K = _mm256_set1_pd(params.K());
    const __m256d a = _mm256_set1_pd(params.a());
    const __m256d b = _mm256_set1_pd(params.b());
    const __m256d limit = _mm256_set1_pd(kEscapeThreshold);
    const __m256d pmax = _mm256_set1_pd(DBL_MAX);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d pv = _mm256_loadu_pd(p + i);
        const __m256d live = _mm256_and_pd(_mm256_cmp_pd(abs_pd(xv), limit, _CMP_LE_OQ),
                                           _mm256_cmp_pd(abs_pd(pv), pmax, _CMP_LE_OQ));
        const __m256d u = _mm256_fmadd_pd(K, sinh_pd(xv), pv);
        const __m256d xn = _mm256_fmadd_pd(b, u, _mm256_mul_pd(a, xv));
        const __m256d pn = _mm256_fmsub_pd(a, u, _mm256_mul_pd(b, xv));
        _mm256_storeu_pd(x + i, _mm256_blendv_pd(xv, xn, live));
        _mm256_storeu_pd(p + i, _mm256_blendv_pd(pv, pn, live));
    }
    if (i < n) {
        step_batch_scalar(x + i, p + i, n - i, params);
    }
}

void sinh_batch_avx2(const double* in, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, sinh_pd(_mm256_loadu_pd(in + i)));
    }
    if (i < n) {
        sinh_batch_scalar(in + i, out + i, n - i);
    }
}

}  // namespace webmap::kernels::detail
