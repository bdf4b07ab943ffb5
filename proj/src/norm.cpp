#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

#include "cpf/operator.hpp"

namespace cpf {

namespace {

constexpr std::size_t svd_limit = 512;

Eigen::MatrixXcd to_eigen(const DenseOperator& m) {
    const std::size_t n = m.dim();
    Eigen::MatrixXcd out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = {m.re()[i * n + j], m.im()[i * n + j]};
    return out;
}

// Power iteration on M^dagger M; returns sqrt of the dominant eigenvalue.
double power_iteration_norm(const DenseOperator& m) {
    const Eigen::MatrixXcd a = to_eigen(m);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(a.cols()) / std::sqrt(double(a.cols()));
    double prev = 0.0;
    for (int it = 0; it < 10000; ++it) {
        Eigen::VectorXcd w = a.adjoint() * (a * v);
        const double lam = w.norm();
        if (lam == 0.0) return 0.0;
        v = w / lam;
        if (std::abs(lam - prev) <= 1e-12 * lam) return std::sqrt(lam);
        prev = lam;
    }
    return std::sqrt(prev);
}

}  // namespace

template <>
double spectral_norm<double>(const DenseOperator& m) {
    if (!m.all_finite()) throw NumericError("spectral_norm: non-finite entries");
    if (m.dim() == 0) return 0.0;
    if (m.dim() > svd_limit) return power_iteration_norm(m);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    return svd.singularValues()(0);
}

template <>
double spectral_norm<quad>(const QuadOperator& m) {
    if (!m.all_finite()) throw NumericError("spectral_norm: non-finite entries");
    return spectral_norm(m.cast<double>());
}

std::string to_string(const qcomplex& z) {
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(z.real());
    const double im = static_cast<double>(z.imag());
    if (im != 0.0) os << (im < 0 ? "-" : "+") << std::abs(im) << "i";
    return os.str();
}

}  // namespace cpf
