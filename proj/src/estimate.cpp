#include "cpf/estimate.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace cpf {

namespace {

using QMatrix = std::vector<std::vector<quad>>;

// Gaussian elimination with partial pivoting, several right-hand sides.
QMatrix solve_small(QMatrix g, QMatrix rhs) {
    const std::size_t n = g.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (boost::multiprecision::abs(g[r][c]) > boost::multiprecision::abs(g[piv][c])) piv = r;
        if (g[piv][c] == 0) throw EstimationError("singular least-squares system");
        std::swap(g[c], g[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const quad f = g[r][c] / g[c][c];
            if (f == 0) continue;
            for (std::size_t k = c; k < n; ++k) g[r][k] -= f * g[c][k];
            for (std::size_t k = 0; k < rhs[r].size(); ++k) rhs[r][k] -= f * rhs[c][k];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t k = 0; k < rhs[c].size(); ++k) {
            quad s = rhs[c][k];
            for (std::size_t j = c + 1; j < n; ++j) s -= g[c][j] * rhs[j][k];
            rhs[c][k] = s / g[c][c];
        }
    }
    return rhs;
}

double design_condition(const QMatrix& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(g[i][j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(hi / lo);
}

std::vector<double> default_lambdas() {
    std::vector<double> l;
    for (int i = 0; i < 16; ++i) l.push_back(0.02 + 0.1 * i / 15.0);
    return l;
}

}  // namespace

QuadOperator random_hermitian(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    QuadOperator m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.set(i, i, qcomplex(quad(nd(rng)), quad(0)));
        for (std::size_t j = i + 1; j < dim; ++j) {
            const qcomplex z(quad(nd(rng)), quad(nd(rng)));
            m.set(i, j, z);
            m.set(j, i, qcomplex(z.real(), -z.imag()));
        }
    }
    m *= quad(1) / quad(spectral_norm(m));
    return m;
}

Partition<quad> random_partition(std::size_t dim, std::uint64_t seed, double alpha) {
    return Partition<quad>{random_hermitian(dim, seed), random_hermitian(dim, seed ^ 0x9e3779b97f4a7c15ULL), alpha};
}

QuadOperator kernel_residual(const ExpProduct& s, const Partition<quad>& p, const qcomplex& lambda) {
    QuadOperator r = multiply(expm(p.full(), -lambda), evaluate(s, p));
    r -= QuadOperator::identity(p.dim());
    return r;
}

KernelFit fit_first_order_kernel(const FormulaBuilder& build, const QuadOperator& A, const QuadOperator& B,
                                 const KernelFitOptions& opt) {
    const std::vector<double> lams = opt.lambdas.empty() ? default_lambdas() : opt.lambdas;
    const int nw = opt.max_word + 1;
    if (nw < 1 || lams.size() < static_cast<std::size_t>(nw))
        throw EstimationError("kernel fit needs at least max_word + 1 step sizes");
    const Partition<quad> plus{A, B, opt.alpha};
    const Partition<quad> minus{A, B, -opt.alpha};

    std::vector<QuadOperator> w;
    std::vector<quad> wn;
    for (int m = 0; m < nw; ++m) {
        QuadOperator x = adjoint_power(A, B, m);
        const quad n = frobenius_norm(x);
        if (n == 0) throw EstimationError("ad_A^m(B) vanishes; basis is degenerate");
        x *= quad(1) / n;
        w.push_back(std::move(x));
        wn.push_back(n);
    }
    quad lmax = 0;
    for (double l : lams) lmax = std::max(lmax, quad(l));

    std::vector<QuadOperator> r1;
    for (double l : lams) {
        const ExpProduct s = build(qc(l));
        QuadOperator d = kernel_residual(s, plus, qc(l)) - kernel_residual(s, minus, qc(l));
        d *= quad(1) / (2 * quad(opt.alpha));
        r1.push_back(std::move(d));
    }

    QMatrix gw(nw, std::vector<quad>(nw));
    for (int m = 0; m < nw; ++m)
        for (int n = m; n < nw; ++n) gw[m][n] = gw[n][m] = frobenius_inner(w[m], w[n]);
    QMatrix g(nw, std::vector<quad>(nw, quad(0)));
    QMatrix rhs(nw, std::vector<quad>(1, quad(0)));
    std::vector<std::vector<quad>> tp(lams.size(), std::vector<quad>(nw));
    for (std::size_t i = 0; i < lams.size(); ++i) {
        const quad t = quad(lams[i]) / lmax;
        quad p = t;
        for (int m = 0; m < nw; ++m, p *= t) tp[i][m] = p;
        for (int m = 0; m < nw; ++m) {
            rhs[m][0] += tp[i][m] * frobenius_inner(w[m], r1[i]);
            for (int n = 0; n < nw; ++n) g[m][n] += tp[i][m] * tp[i][n] * gw[m][n];
        }
    }
    KernelFit fit;
    fit.condition = design_condition(g);
    if (!(fit.condition <= opt.max_condition))
        throw EstimationError("kernel fit ill-conditioned (condition " + std::to_string(fit.condition) + ")");
    const QMatrix x = solve_small(g, rhs);

    quad num = 0, den = 0;
    for (std::size_t i = 0; i < lams.size(); ++i) {
        QuadOperator model(A.dim());
        for (int m = 0; m < nw; ++m) model.axpy(qcomplex(x[m][0] * tp[i][m], quad(0)), w[m]);
        const quad e = frobenius_norm(model - r1[i]);
        const quad f = frobenius_norm(r1[i]);
        num += e * e;
        den += f * f;
    }
    fit.residual = den > 0 ? static_cast<double>(boost::multiprecision::sqrt(num / den)) : 0.0;
    quad lp = lmax;
    for (int m = 0; m < nw; ++m, lp *= lmax) fit.r.push_back(static_cast<double>(x[m][0] / (lp * wn[m])));
    return fit;
}

LeadingEstimate estimate_leading_coefficient(const FormulaBuilder& build, int j, int trials, std::uint64_t seed,
                                             const KernelFitOptions& opt) {
    if (j < 1 || trials < 1) throw EstimationError("estimate_leading_coefficient needs j >= 1 and trials >= 1");
    KernelFitOptions o = opt;
    o.max_word = std::max(o.max_word, 2 * j + 2);
    LeadingEstimate est;
    for (int t = 0; t < trials; ++t) {
        const auto p = random_partition(8, seed + static_cast<std::uint64_t>(t));
        const KernelFit f = fit_first_order_kernel(build, p.A, p.B, o);
        est.trials.push_back(f.r[static_cast<std::size_t>(2 * j)]);
    }
    double s = 0;
    for (double v : est.trials) s += v;
    est.mean = s / trials;
    for (double v : est.trials) est.spread = std::max(est.spread, std::abs(v - est.mean));
    return est;
}

std::vector<QuadOperator> fit_matrix_series(const std::vector<double>& lambdas, const std::vector<QuadOperator>& m,
                                            int p_min, int p_max) {
    const int np = p_max - p_min + 1;
    if (np < 1 || lambdas.size() != m.size() || lambdas.size() < static_cast<std::size_t>(np))
        throw EstimationError("series fit needs at least as many samples as powers");
    quad lmax = 0;
    for (double l : lambdas) lmax = std::max(lmax, quad(l));
    const std::size_t dim = m.front().dim();
    const std::size_t ncol = 2 * dim * dim;
    QMatrix g(np, std::vector<quad>(np, quad(0)));
    QMatrix rhs(np, std::vector<quad>(ncol, quad(0)));
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const quad t = quad(lambdas[i]) / lmax;
        std::vector<quad> tp(np);
        for (int p = 0; p < np; ++p) tp[p] = boost::multiprecision::pow(t, p_min + p);
        for (int p = 0; p < np; ++p) {
            for (int q = 0; q < np; ++q) g[p][q] += tp[p] * tp[q];
            for (std::size_t k = 0; k < dim * dim; ++k) {
                rhs[p][k] += tp[p] * m[i].re()[k];
                rhs[p][dim * dim + k] += tp[p] * m[i].im()[k];
            }
        }
    }
    const QMatrix x = solve_small(g, rhs);
    std::vector<QuadOperator> out;
    for (int p = 0; p < np; ++p) {
        QuadOperator c(dim);
        const quad scale = boost::multiprecision::pow(lmax, p_min + p);
        for (std::size_t k = 0; k < dim * dim; ++k) {
            c.re()[k] = x[p][k] / scale;
            c.im()[k] = x[p][dim * dim + k] / scale;
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace cpf
