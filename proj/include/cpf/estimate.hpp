#pragma once

// Numerical kernel expansion. For S(lambda) = exp(K(lambda)) the part of
// R(lambda) = exp(-lambda H) S(lambda) - I that is linear in alpha lies in the
// span of ad_A^m(B); its coefficients r_m (of lambda^{m+1} ad_A^m(B)) start
// with the leading kernel error of S. r_{2j} is the constant a symplectic
// corrector c lambda^{2j} ad_A^{2j-1}(alpha B) has to cancel.

#include <cstdint>
#include <functional>
#include <vector>

#include "cpf/lattice.hpp"
#include "cpf/product.hpp"

namespace cpf {

using FormulaBuilder = std::function<ExpProduct(const qcomplex& lambda)>;

// Random Hermitian with unit spectral norm, normal entries from the seed.
QuadOperator random_hermitian(std::size_t dim, std::uint64_t seed);
Partition<quad> random_partition(std::size_t dim, std::uint64_t seed, double alpha = 1.0);

struct KernelFitOptions {
    std::vector<double> lambdas;  // real step sizes; default 16 points on [0.02, 0.12]
    double alpha = 1e-10;         // finite alpha for the odd part
    int max_word = 14;            // fit ad_A^m(B) for m = 0..max_word
    double max_condition = 1e8;
};

struct KernelFit {
    std::vector<double> r;  // r_0..r_max_word
    double condition = 0;   // of the scaled least-squares design
    double residual = 0;    // relative Frobenius misfit
};

// First-order-in-alpha kernel coefficients of the builder's formula on (A, B).
// Throws EstimationError when the design is worse conditioned than allowed.
KernelFit fit_first_order_kernel(const FormulaBuilder& build, const QuadOperator& A, const QuadOperator& B,
                                 const KernelFitOptions& opt = {});

struct LeadingEstimate {
    double mean = 0;
    double spread = 0;  // max |trial - mean|
    std::vector<double> trials;
};

// r_{2j} averaged over random 8x8 Hermitian pairs.
LeadingEstimate estimate_leading_coefficient(const FormulaBuilder& build, int j, int trials = 4,
                                             std::uint64_t seed = 1, const KernelFitOptions& opt = {});

// Least-squares fit M(l) ~ sum_{p=p_min..p_max} l^p X_p over the given samples.
std::vector<QuadOperator> fit_matrix_series(const std::vector<double>& lambdas, const std::vector<QuadOperator>& m,
                                            int p_min, int p_max);

// exp(-lambda H) S(lambda) - I on a quad partition (alpha from the partition).
QuadOperator kernel_residual(const ExpProduct& s, const Partition<quad>& p, const qcomplex& lambda);

}  // namespace cpf
