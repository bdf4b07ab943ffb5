// Built with -mavx2 -mfma. Nothing here may be called unless the dispatcher
// has confirmed CPU support.
#include <immintrin.h>

#include "cpf/simd.hpp"

namespace cpf::simd::detail {

namespace {

// 16 columns of one output row held in 8 ymm accumulators across the k loop.
inline void row_block16(std::size_t n, std::size_t i, std::size_t j0, const double* ar, const double* ai,
                        const double* br, const double* bi, double* cr, double* ci) {
    __m256d r0 = _mm256_setzero_pd(), r1 = _mm256_setzero_pd(), r2 = _mm256_setzero_pd(), r3 = _mm256_setzero_pd();
    __m256d m0 = _mm256_setzero_pd(), m1 = _mm256_setzero_pd(), m2 = _mm256_setzero_pd(), m3 = _mm256_setzero_pd();
    const double* arow = ar + i * n;
    const double* airow = ai + i * n;
    for (std::size_t k = 0; k < n; ++k) {
        const __m256d xr = _mm256_broadcast_sd(arow + k);
        const __m256d xi = _mm256_broadcast_sd(airow + k);
        const double* pr = br + k * n + j0;
        const double* pi = bi + k * n + j0;
        __m256d b0 = _mm256_loadu_pd(pr), c0 = _mm256_loadu_pd(pi);
        __m256d b1 = _mm256_loadu_pd(pr + 4), c1 = _mm256_loadu_pd(pi + 4);
        r0 = _mm256_fmadd_pd(xr, b0, r0); r0 = _mm256_fnmadd_pd(xi, c0, r0);
        m0 = _mm256_fmadd_pd(xr, c0, m0); m0 = _mm256_fmadd_pd(xi, b0, m0);
        r1 = _mm256_fmadd_pd(xr, b1, r1); r1 = _mm256_fnmadd_pd(xi, c1, r1);
        m1 = _mm256_fmadd_pd(xr, c1, m1); m1 = _mm256_fmadd_pd(xi, b1, m1);
        b0 = _mm256_loadu_pd(pr + 8); c0 = _mm256_loadu_pd(pi + 8);
        b1 = _mm256_loadu_pd(pr + 12); c1 = _mm256_loadu_pd(pi + 12);
        r2 = _mm256_fmadd_pd(xr, b0, r2); r2 = _mm256_fnmadd_pd(xi, c0, r2);
        m2 = _mm256_fmadd_pd(xr, c0, m2); m2 = _mm256_fmadd_pd(xi, b0, m2);
        r3 = _mm256_fmadd_pd(xr, b1, r3); r3 = _mm256_fnmadd_pd(xi, c1, r3);
        m3 = _mm256_fmadd_pd(xr, c1, m3); m3 = _mm256_fmadd_pd(xi, b1, m3);
    }
    double* outr = cr + i * n + j0;
    double* outi = ci + i * n + j0;
    _mm256_storeu_pd(outr, r0); _mm256_storeu_pd(outr + 4, r1);
    _mm256_storeu_pd(outr + 8, r2); _mm256_storeu_pd(outr + 12, r3);
    _mm256_storeu_pd(outi, m0); _mm256_storeu_pd(outi + 4, m1);
    _mm256_storeu_pd(outi + 8, m2); _mm256_storeu_pd(outi + 12, m3);
}

inline void row_block4(std::size_t n, std::size_t i, std::size_t j0, const double* ar, const double* ai,
                       const double* br, const double* bi, double* cr, double* ci) {
    __m256d r0 = _mm256_setzero_pd(), m0 = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n; ++k) {
        const __m256d xr = _mm256_broadcast_sd(ar + i * n + k);
        const __m256d xi = _mm256_broadcast_sd(ai + i * n + k);
        const __m256d b0 = _mm256_loadu_pd(br + k * n + j0);
        const __m256d c0 = _mm256_loadu_pd(bi + k * n + j0);
        r0 = _mm256_fmadd_pd(xr, b0, r0); r0 = _mm256_fnmadd_pd(xi, c0, r0);
        m0 = _mm256_fmadd_pd(xr, c0, m0); m0 = _mm256_fmadd_pd(xi, b0, m0);
    }
    _mm256_storeu_pd(cr + i * n + j0, r0);
    _mm256_storeu_pd(ci + i * n + j0, m0);
}

}  // namespace

void cgemm_avx2_f64(std::size_t n, const double* ar, const double* ai, const double* br, const double* bi,
                    double* cr, double* ci) {
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = 0;
        for (; j + 16 <= n; j += 16) row_block16(n, i, j, ar, ai, br, bi, cr, ci);
        for (; j + 4 <= n; j += 4) row_block4(n, i, j, ar, ai, br, bi, cr, ci);
        for (; j < n; ++j) {
            double sr = 0.0, si = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double xr = ar[i * n + k], xi = ai[i * n + k];
                sr += xr * br[k * n + j] - xi * bi[k * n + j];
                si += xr * bi[k * n + j] + xi * br[k * n + j];
            }
            cr[i * n + j] = sr;
            ci[i * n + j] = si;
        }
    }
}

}  // namespace cpf::simd::detail
