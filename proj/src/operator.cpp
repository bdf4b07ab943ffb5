#include "cpf/operator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cpf/simd.hpp"

namespace cpf {

namespace detail {
void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a) + " vs " + std::to_string(b));
}
}  // namespace detail

namespace {

using std::abs;
using std::sqrt;
using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

template <class Real>
Real hypot2(const Real& a, const Real& b) {
    return sqrt(a * a + b * b);
}

template <class Real>
bool finite(const Real& x) {
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(x);
}

template <class Real>
void gemm(std::size_t n, const Real* ar, const Real* ai, const Real* br, const Real* bi, Real* cr, Real* ci) {
    if constexpr (std::is_same_v<Real, double>) {
        simd::cgemm(n, ar, ai, br, bi, cr, ci);
    } else {
        simd::cgemm_reference<Real>(n, ar, ai, br, bi, cr, ci);
    }
}

}  // namespace

template <class Real>
BasicOperator<Real> BasicOperator<Real>::identity(std::size_t dim) {
    BasicOperator out(dim);
    for (std::size_t i = 0; i < dim; ++i) out.re_[i * dim + i] = Real(1);
    return out;
}

template <class Real>
int BasicOperator<Real>::qubits() const {
    if (dim_ == 0 || (dim_ & (dim_ - 1)) != 0) return -1;
    int q = 0;
    while ((std::size_t(1) << q) < dim_) ++q;
    return q;
}

template <class Real>
BasicOperator<Real>& BasicOperator<Real>::operator+=(const BasicOperator& o) {
    detail::require_same_dim(dim_, o.dim_, "operator+");
    for (std::size_t k = 0; k < size(); ++k) {
        re_[k] += o.re_[k];
        im_[k] += o.im_[k];
    }
    return *this;
}

template <class Real>
BasicOperator<Real>& BasicOperator<Real>::operator-=(const BasicOperator& o) {
    detail::require_same_dim(dim_, o.dim_, "operator-");
    for (std::size_t k = 0; k < size(); ++k) {
        re_[k] -= o.re_[k];
        im_[k] -= o.im_[k];
    }
    return *this;
}

template <class Real>
BasicOperator<Real>& BasicOperator<Real>::operator*=(const complex_type& z) {
    const Real zr = z.real(), zi = z.imag();
    for (std::size_t k = 0; k < size(); ++k) {
        const Real r = re_[k], i = im_[k];
        re_[k] = zr * r - zi * i;
        im_[k] = zr * i + zi * r;
    }
    return *this;
}

template <class Real>
BasicOperator<Real>& BasicOperator<Real>::operator*=(const Real& x) {
    for (std::size_t k = 0; k < size(); ++k) {
        re_[k] *= x;
        im_[k] *= x;
    }
    return *this;
}

template <class Real>
BasicOperator<Real>& BasicOperator<Real>::axpy(const complex_type& z, const BasicOperator& o) {
    detail::require_same_dim(dim_, o.dim_, "axpy");
    const Real zr = z.real(), zi = z.imag();
    for (std::size_t k = 0; k < size(); ++k) {
        re_[k] += zr * o.re_[k] - zi * o.im_[k];
        im_[k] += zr * o.im_[k] + zi * o.re_[k];
    }
    return *this;
}

template <class Real>
BasicOperator<Real> BasicOperator<Real>::adjoint() const {
    BasicOperator out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            out.re_[j * dim_ + i] = re_[i * dim_ + j];
            out.im_[j * dim_ + i] = -im_[i * dim_ + j];
        }
    return out;
}

template <class Real>
typename BasicOperator<Real>::complex_type BasicOperator<Real>::trace() const {
    Real r(0), i(0);
    for (std::size_t k = 0; k < dim_; ++k) {
        r += re_[k * dim_ + k];
        i += im_[k * dim_ + k];
    }
    return complex_type(r, i);
}

template <class Real>
bool BasicOperator<Real>::all_finite() const {
    for (std::size_t k = 0; k < size(); ++k)
        if (!finite(re_[k]) || !finite(im_[k])) return false;
    return true;
}

template <class Real>
BasicOperator<Real> multiply(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    detail::require_same_dim(a.dim(), b.dim(), "multiply");
    BasicOperator<Real> c(a.dim());
    gemm<Real>(a.dim(), a.re(), a.im(), b.re(), b.im(), c.re(), c.im());
    return c;
}

template <class Real>
BasicOperator<Real> operator*(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    return multiply(a, b);
}

template <class Real>
BasicOperator<Real> commutator(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    BasicOperator<Real> out = multiply(a, b);
    out -= multiply(b, a);
    return out;
}

template <class Real>
BasicOperator<Real> adjoint_power(const BasicOperator<Real>& a, const BasicOperator<Real>& b, int j) {
    detail::require_same_dim(a.dim(), b.dim(), "adjoint_power");
    if (j < 0) throw Error("adjoint_power: negative power");
    BasicOperator<Real> out = b;
    for (int k = 0; k < j; ++k) out = commutator(a, out);
    return out;
}

template <class Real>
Real norm1(const BasicOperator<Real>& m) {
    const std::size_t n = m.dim();
    Real best(0);
    for (std::size_t j = 0; j < n; ++j) {
        Real s(0);
        for (std::size_t i = 0; i < n; ++i) s += hypot2(m.re()[i * n + j], m.im()[i * n + j]);
        if (s > best) best = s;
    }
    return best;
}

template <class Real>
Real frobenius_norm(const BasicOperator<Real>& m) {
    Real s(0);
    for (std::size_t k = 0; k < m.size(); ++k) s += m.re()[k] * m.re()[k] + m.im()[k] * m.im()[k];
    return sqrt(s);
}

template <class Real>
Real frobenius_inner(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    detail::require_same_dim(a.dim(), b.dim(), "frobenius_inner");
    Real s(0);
    for (std::size_t k = 0; k < a.size(); ++k) s += a.re()[k] * b.re()[k] + a.im()[k] * b.im()[k];
    return s;
}

template <class Real>
BasicOperator<Real> solve(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    detail::require_same_dim(a.dim(), b.dim(), "solve");
    const std::size_t n = a.dim();
    std::vector<Real> lr(a.re(), a.re() + n * n), li(a.im(), a.im() + n * n);
    BasicOperator<Real> x = b;
    Real* xr = x.re();
    Real* xi = x.im();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        Real best = hypot2(lr[c * n + c], li[c * n + c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Real v = hypot2(lr[r * n + c], li[r * n + c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == Real(0)) throw SingularityError("solve: singular matrix");
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lr[c * n + j], lr[piv * n + j]);
                std::swap(li[c * n + j], li[piv * n + j]);
                std::swap(xr[c * n + j], xr[piv * n + j]);
                std::swap(xi[c * n + j], xi[piv * n + j]);
            }
        }
        const Real pr = lr[c * n + c], pi = li[c * n + c];
        const Real den = pr * pr + pi * pi;
        for (std::size_t r = c + 1; r < n; ++r) {
            const Real er = lr[r * n + c], ei = li[r * n + c];
            if (er == Real(0) && ei == Real(0)) continue;
            // f = e / p
            const Real fr = (er * pr + ei * pi) / den;
            const Real fi = (ei * pr - er * pi) / den;
            for (std::size_t j = c; j < n; ++j) {
                const Real ur = lr[c * n + j], ui = li[c * n + j];
                lr[r * n + j] -= fr * ur - fi * ui;
                li[r * n + j] -= fr * ui + fi * ur;
            }
            for (std::size_t j = 0; j < n; ++j) {
                const Real ur = xr[c * n + j], ui = xi[c * n + j];
                xr[r * n + j] -= fr * ur - fi * ui;
                xi[r * n + j] -= fr * ui + fi * ur;
            }
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t j = 0; j < n; ++j) {
            Real sr = xr[c * n + j], si = xi[c * n + j];
            for (std::size_t k = c + 1; k < n; ++k) {
                const Real ur = lr[c * n + k], ui = li[c * n + k];
                sr -= ur * xr[k * n + j] - ui * xi[k * n + j];
                si -= ur * xi[k * n + j] + ui * xr[k * n + j];
            }
            const Real pr = lr[c * n + c], pi = li[c * n + c];
            const Real den = pr * pr + pi * pi;
            xr[c * n + j] = (sr * pr + si * pi) / den;
            xi[c * n + j] = (si * pr - sr * pi) / den;
        }
    }
    return x;
}

namespace {

// Pade coefficients b_0..b_m (Higham 2005).
constexpr std::array<double, 4> pade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> pade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> pade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> pade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                          2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> pade13 = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                           1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                           670442572800.0,      33522128640.0,       1323241920.0,
                                           40840800.0,          960960.0,            16380.0,
                                           182.0,               1.0};

struct PadeChoice {
    int m;
    int squarings;
};

template <class Real>
PadeChoice choose_pade(double n1) {
    if constexpr (std::is_same_v<Real, double>) {
        if (n1 <= 1.495585217958292e-2) return {3, 0};
        if (n1 <= 2.539398330063230e-1) return {5, 0};
        if (n1 <= 9.504178996162932e-1) return {7, 0};
        if (n1 <= 2.097847961257068e0) return {9, 0};
        const double theta = 5.371920351148152;
        return {13, n1 <= theta ? 0 : static_cast<int>(std::ceil(std::log2(n1 / theta)))};
    } else {
        // Thresholds from the scalar Pade remainder (m!)^2/((2m)!(2m+1)!) x^(2m+1)
        // at the quad unit roundoff, halved.
        if (n1 <= 0.03) return {7, 0};
        if (n1 <= 0.12) return {9, 0};
        const double theta = 0.6;
        return {13, n1 <= theta ? 0 : static_cast<int>(std::ceil(std::log2(n1 / theta)))};
    }
}

template <class Real, std::size_t N>
void pade_uv(const BasicOperator<Real>& x, const std::array<double, N>& b, BasicOperator<Real>& u,
             BasicOperator<Real>& v) {
    const std::size_t n = x.dim();
    const int m = static_cast<int>(N) - 1;
    const BasicOperator<Real> id = BasicOperator<Real>::identity(n);
    if (m == 13) {
        const BasicOperator<Real> x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
        auto c = [&](int k) { return complex_t<Real>(Real(b[k]), Real(0)); };
        BasicOperator<Real> t(n);
        t.axpy(c(13), x6).axpy(c(11), x4).axpy(c(9), x2);
        BasicOperator<Real> inner = x6 * t;
        inner.axpy(c(7), x6).axpy(c(5), x4).axpy(c(3), x2).axpy(c(1), id);
        u = x * inner;
        BasicOperator<Real> s(n);
        s.axpy(c(12), x6).axpy(c(10), x4).axpy(c(8), x2);
        v = x6 * s;
        v.axpy(c(6), x6).axpy(c(4), x4).axpy(c(2), x2).axpy(c(0), id);
        return;
    }
    std::vector<BasicOperator<Real>> pw;
    pw.push_back(id);
    const BasicOperator<Real> x2 = x * x;
    for (int k = 2; k <= m; k += 2) pw.push_back(k == 2 ? x2 : pw.back() * x2);
    BasicOperator<Real> odd(n);
    v = BasicOperator<Real>(n);
    for (int k = 0; k <= m; ++k) {
        const complex_t<Real> c(Real(b[k]), Real(0));
        if (k % 2 == 0) v.axpy(c, pw[k / 2]);
        else odd.axpy(c, pw[k / 2]);
    }
    u = x * odd;
}

}  // namespace

template <class Real>
BasicOperator<Real> expm(const BasicOperator<Real>& m, const complex_t<Real>& z) {
    if (!m.all_finite()) throw NumericError("expm: non-finite matrix entries");
    if (!finite(Real(z.real())) || !finite(Real(z.imag()))) throw NumericError("expm: non-finite scalar");
    const std::size_t n = m.dim();
    BasicOperator<Real> x = m;
    x *= z;
    const double n1 = static_cast<double>(norm1(x));
    if (n1 == 0.0) return BasicOperator<Real>::identity(n);
    const PadeChoice pc = choose_pade<Real>(n1);
    if (pc.squarings > 0) {
        Real scale(1);
        for (int k = 0; k < pc.squarings; ++k) scale /= Real(2);
        x *= scale;
    }
    BasicOperator<Real> u, v;
    switch (pc.m) {
        case 3: pade_uv(x, pade3, u, v); break;
        case 5: pade_uv(x, pade5, u, v); break;
        case 7: pade_uv(x, pade7, u, v); break;
        case 9: pade_uv(x, pade9, u, v); break;
        default: pade_uv(x, pade13, u, v); break;
    }
    BasicOperator<Real> p = v + u;
    BasicOperator<Real> q = v - u;
    BasicOperator<Real> r = solve(q, p);
    for (int k = 0; k < pc.squarings; ++k) r = r * r;
    if (!r.all_finite()) throw NumericError("expm: overflow");
    return r;
}

template <class Real>
BasicOperator<Real> power(const BasicOperator<Real>& m, std::uint64_t r) {
    BasicOperator<Real> result = BasicOperator<Real>::identity(m.dim());
    if (r == 0) return result;
    BasicOperator<Real> base = m;
    bool first = true;
    while (r > 0) {
        if (r & 1u) {
            result = first ? base : result * base;
            first = false;
        }
        r >>= 1u;
        if (r > 0) base = base * base;
    }
    return result;
}

template <class Real>
bool is_hermitian(const BasicOperator<Real>& m, double rel_tol) {
    const BasicOperator<Real> d = m - m.adjoint();
    const double nm = spectral_norm(m);
    return spectral_norm(d) <= rel_tol * std::max(nm, 1e-300);
}

template <class Real>
BasicOperator<Real> kron(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
    BasicOperator<Real> out(n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const complex_t<Real> x = a(i, j);
            if (x.real() == Real(0) && x.imag() == Real(0)) continue;
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out.set(i * nb + k, j * nb + l, x * b(k, l));
        }
    return out;
}

#define CPF_INSTANTIATE(R)                                                                                   \
    template class BasicOperator<R>;                                                                         \
    template BasicOperator<R> operator*(const BasicOperator<R>&, const BasicOperator<R>&);                  \
    template BasicOperator<R> multiply(const BasicOperator<R>&, const BasicOperator<R>&);                   \
    template BasicOperator<R> commutator(const BasicOperator<R>&, const BasicOperator<R>&);                 \
    template BasicOperator<R> adjoint_power(const BasicOperator<R>&, const BasicOperator<R>&, int);         \
    template BasicOperator<R> expm(const BasicOperator<R>&, const complex_t<R>&);                           \
    template BasicOperator<R> power(const BasicOperator<R>&, std::uint64_t);                                \
    template R norm1(const BasicOperator<R>&);                                                              \
    template R frobenius_norm(const BasicOperator<R>&);                                                     \
    template R frobenius_inner(const BasicOperator<R>&, const BasicOperator<R>&);                          \
    template bool is_hermitian(const BasicOperator<R>&, double);                                            \
    template BasicOperator<R> solve(const BasicOperator<R>&, const BasicOperator<R>&);                      \
    template BasicOperator<R> kron(const BasicOperator<R>&, const BasicOperator<R>&);

CPF_INSTANTIATE(double)
CPF_INSTANTIATE(quad)

#undef CPF_INSTANTIATE

}  // namespace cpf
