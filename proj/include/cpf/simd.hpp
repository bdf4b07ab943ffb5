#pragma once

// Complex GEMM kernels on planar row-major storage: C = A * B, all n x n.
// The scalar template is the reference; the AVX2/FMA double kernel lives in a
// separately compiled translation unit and is picked at runtime.

#include <cstddef>

namespace cpf::simd {

enum class Backend { automatic, scalar, avx2 };

bool avx2_available();
// Forces a backend (tests use this to compare kernels). Requesting avx2 on a
// machine without it throws cpf::Error.
void set_backend(Backend b);
Backend active_backend();
const char* backend_name(Backend b);

void cgemm(std::size_t n, const double* ar, const double* ai, const double* br, const double* bi,
           double* cr, double* ci);

template <class Real>
void cgemm_reference(std::size_t n, const Real* ar, const Real* ai, const Real* br, const Real* bi,
                     Real* cr, Real* ci) {
    for (std::size_t i = 0; i < n * n; ++i) {
        cr[i] = Real(0);
        ci[i] = Real(0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        Real* crow_r = cr + i * n;
        Real* crow_i = ci + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const Real a_r = ar[i * n + k];
            const Real a_i = ai[i * n + k];
            if (a_r == Real(0) && a_i == Real(0)) continue;
            const Real* brow_r = br + k * n;
            const Real* brow_i = bi + k * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow_r[j] += a_r * brow_r[j] - a_i * brow_i[j];
                crow_i[j] += a_r * brow_i[j] + a_i * brow_r[j];
            }
        }
    }
}

namespace detail {
void cgemm_scalar_f64(std::size_t n, const double* ar, const double* ai, const double* br, const double* bi,
                      double* cr, double* ci);
void cgemm_avx2_f64(std::size_t n, const double* ar, const double* ai, const double* br, const double* bi,
                    double* cr, double* ci);
}  // namespace detail

}  // namespace cpf::simd
