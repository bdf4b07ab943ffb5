#pragma once

// Dense complex square matrices in planar (split real/imaginary) row-major
// storage. The planar layout turns the complex GEMM inner loop into real
// FMA streams, which is what the SIMD kernels rely on.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpf/error.hpp"
#include "cpf/scalar.hpp"

namespace cpf {

template <class Real>
class BasicOperator {
public:
    using real_type = Real;
    using complex_type = complex_t<Real>;

    BasicOperator() = default;
    explicit BasicOperator(std::size_t dim) : dim_(dim), re_(dim * dim, Real(0)), im_(dim * dim, Real(0)) {}

    static BasicOperator identity(std::size_t dim);
    static BasicOperator zero(std::size_t dim) { return BasicOperator(dim); }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ * dim_; }
    bool empty() const { return dim_ == 0; }
    // log2(dim) when dim is a power of two, otherwise -1.
    int qubits() const;

    complex_type operator()(std::size_t i, std::size_t j) const {
        return complex_type(re_[i * dim_ + j], im_[i * dim_ + j]);
    }
    void set(std::size_t i, std::size_t j, const complex_type& v) {
        re_[i * dim_ + j] = v.real();
        im_[i * dim_ + j] = v.imag();
    }
    void add_to(std::size_t i, std::size_t j, const complex_type& v) {
        re_[i * dim_ + j] += v.real();
        im_[i * dim_ + j] += v.imag();
    }

    Real* re() { return re_.data(); }
    Real* im() { return im_.data(); }
    const Real* re() const { return re_.data(); }
    const Real* im() const { return im_.data(); }

    BasicOperator& operator+=(const BasicOperator& o);
    BasicOperator& operator-=(const BasicOperator& o);
    BasicOperator& operator*=(const complex_type& z);
    BasicOperator& operator*=(const Real& x);
    // this += z * o
    BasicOperator& axpy(const complex_type& z, const BasicOperator& o);

    BasicOperator adjoint() const;
    complex_type trace() const;
    bool all_finite() const;

    template <class Other>
    BasicOperator<Other> cast() const {
        BasicOperator<Other> out(dim_);
        for (std::size_t k = 0; k < size(); ++k) {
            out.re()[k] = static_cast<Other>(re_[k]);
            out.im()[k] = static_cast<Other>(im_[k]);
        }
        return out;
    }

    friend bool operator==(const BasicOperator& a, const BasicOperator& b) {
        return a.dim_ == b.dim_ && a.re_ == b.re_ && a.im_ == b.im_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Real> re_;
    std::vector<Real> im_;
};

using DenseOperator = BasicOperator<double>;
using QuadOperator = BasicOperator<quad>;

template <class Real> BasicOperator<Real> operator+(BasicOperator<Real> a, const BasicOperator<Real>& b) { return a += b; }
template <class Real> BasicOperator<Real> operator-(BasicOperator<Real> a, const BasicOperator<Real>& b) { return a -= b; }
template <class Real> BasicOperator<Real> operator*(const complex_t<Real>& z, BasicOperator<Real> a) { return a *= z; }
template <class Real> BasicOperator<Real> operator*(const BasicOperator<Real>& a, const BasicOperator<Real>& b);

template <class Real> BasicOperator<Real> multiply(const BasicOperator<Real>& a, const BasicOperator<Real>& b);
template <class Real> BasicOperator<Real> commutator(const BasicOperator<Real>& a, const BasicOperator<Real>& b);

// ad_A^j(B); j = 0 returns B.
template <class Real>
BasicOperator<Real> adjoint_power(const BasicOperator<Real>& a, const BasicOperator<Real>& b, int j);

// exp(z * M) by scaling and squaring with a diagonal Pade approximant.
template <class Real>
BasicOperator<Real> expm(const BasicOperator<Real>& m, const complex_t<Real>& z);

// M^r by repeated squaring.
template <class Real>
BasicOperator<Real> power(const BasicOperator<Real>& m, std::uint64_t r);

// Largest singular value. Quad inputs are rounded to double first; the norm
// keeps double relative accuracy because rounding is entrywise relative.
template <class Real>
double spectral_norm(const BasicOperator<Real>& m);
template <> double spectral_norm<double>(const BasicOperator<double>& m);
template <> double spectral_norm<quad>(const BasicOperator<quad>& m);

template <class Real> Real norm1(const BasicOperator<Real>& m);
template <class Real> Real frobenius_norm(const BasicOperator<Real>& m);
// Real part of tr(a^dagger b).
template <class Real> Real frobenius_inner(const BasicOperator<Real>& a, const BasicOperator<Real>& b);

template <class Real>
bool is_hermitian(const BasicOperator<Real>& m, double rel_tol = 1e-12);

// Solves a X = b for square a by partial-pivot LU.
template <class Real>
BasicOperator<Real> solve(const BasicOperator<Real>& a, const BasicOperator<Real>& b);

// Kronecker product, first argument most significant.
template <class Real>
BasicOperator<Real> kron(const BasicOperator<Real>& a, const BasicOperator<Real>& b);

namespace detail {
void require_same_dim(std::size_t a, std::size_t b, const char* what);
}

}  // namespace cpf
