#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cpf/corrector.hpp"
#include "cpf/estimate.hpp"
#include "cpf/fit.hpp"
#include "cpf/lattice.hpp"
#include "cpf/product.hpp"

namespace cpf::test {

using Builder = std::function<ExpProduct(const qcomplex&)>;

inline qcomplex minus_i(const quad& x) { return qcomplex(quad(0), -x); }

inline std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return v;
}

// ||exp(-i tau H) - S(-i tau)|| over a tau grid; tau parsed in quad from
// the double grid value.
template <class Real>
std::vector<std::pair<double, double>> one_step_errors(const Builder& build, const Partition<Real>& p,
                                                       const std::vector<double>& taus) {
    std::vector<std::pair<double, double>> pts;
    const auto h = p.full();
    for (double t : taus) {
        const qcomplex l = minus_i(quad(t));
        const auto s = evaluate(build(l), p);
        pts.emplace_back(t, spectral_norm(expm(h, to_complex<Real>(l)) - s));
    }
    return pts;
}

template <class Real = quad>
double tau_slope(const Builder& build, const Partition<Real>& p, double lo = 1e-3, double hi = 1e-2, int n = 8) {
    return fit_loglog_slope(one_step_errors(build, p, log_points(lo, hi, n))).slope;
}

// Total error at t = 1, r = 100 (tau = 1/100 formed in quad) over alpha.
inline std::vector<std::pair<double, double>> alpha_errors(const Builder& build,
                                                           const std::function<HamiltonianSpec(double)>& model,
                                                           const std::vector<double>& alphas = {1e-1, 1e-2, 1e-3,
                                                                                                1e-4}) {
    std::vector<std::pair<double, double>> pts;
    const std::uint64_t r = 100;
    const qcomplex l = minus_i(quad(1) / quad(r));
    for (double a : alphas) {
        const auto p = make_partition<quad>(model(a));
        const auto s = evaluate(trotterize(build(l), r), p);
        const auto u = expm(p.full(), minus_i(quad(1)));
        pts.emplace_back(a, spectral_norm(u - s));
    }
    return pts;
}

inline double alpha_slope(const Builder& build, const std::function<HamiltonianSpec(double)>& model) {
    return fit_loglog_slope(alpha_errors(build, model)).slope;
}

inline HamiltonianSpec tfim_weak(double a) { return build_tfim(4, a, 1.0, TfimRegime::weak_coupling); }
inline HamiltonianSpec hubbard_weak_hopping(double a) {
    return build_hubbard_spinless(4, a, 1.0, HubbardRegime::weak_hopping);
}

template <class Real>
double distance(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    return spectral_norm(a - b);
}

}  // namespace cpf::test
