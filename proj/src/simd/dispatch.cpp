#include <atomic>

#include "cpf/error.hpp"
#include "cpf/simd.hpp"

namespace cpf::simd {

namespace detail {
void cgemm_scalar_f64(std::size_t n, const double* ar, const double* ai, const double* br, const double* bi,
                      double* cr, double* ci) {
    cgemm_reference<double>(n, ar, ai, br, bi, cr, ci);
}
}  // namespace detail

namespace {

using kernel_fn = void (*)(std::size_t, const double*, const double*, const double*, const double*, double*, double*);

bool detect_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend resolve(Backend b) {
    if (b == Backend::automatic) return avx2_available() ? Backend::avx2 : Backend::scalar;
    return b;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{resolve(Backend::automatic)};
    return b;
}

}  // namespace

bool avx2_available() {
    static const bool ok = detect_avx2();
    return ok;
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available()) throw Error("avx2 backend requested but the CPU lacks AVX2/FMA");
    current().store(resolve(b));
}

Backend active_backend() { return current().load(); }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::automatic: return "automatic";
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

void cgemm(std::size_t n, const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci) {
    kernel_fn fn = active_backend() == Backend::avx2 ? detail::cgemm_avx2_f64 : detail::cgemm_scalar_f64;
    fn(n, ar, ai, br, bi, cr, ci);
}

}  // namespace cpf::simd
