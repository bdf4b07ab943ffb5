#pragma once

// Real/complex scalar types used across the engine. Matrices are templated on
// the real type; formula coefficients are always carried in quad precision.

#include <complex>
#include <string>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

namespace cpf {

using quad = boost::multiprecision::float128;
using qcomplex = boost::multiprecision::complex128;

template <class Real>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    using complex = std::complex<double>;
    static constexpr const char* name = "double";
    static constexpr double epsilon = 2.220446049250313e-16;
};

template <>
struct scalar_traits<quad> {
    using complex = qcomplex;
    static constexpr const char* name = "quad";
    static constexpr double epsilon = 1.925929944387236e-34;
};

template <class Real>
using complex_t = typename scalar_traits<Real>::complex;

template <class Real>
inline complex_t<Real> to_complex(const qcomplex& z) {
    return complex_t<Real>(static_cast<Real>(z.real()), static_cast<Real>(z.imag()));
}

inline qcomplex qc(double re, double im = 0.0) { return qcomplex(quad(re), quad(im)); }
inline qcomplex qc(quad re, quad im = 0) { return qcomplex(re, im); }

inline bool is_zero(const qcomplex& z) { return z.real() == 0 && z.imag() == 0; }

std::string to_string(const qcomplex& z);

}  // namespace cpf
