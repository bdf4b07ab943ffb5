#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cpf/scalar.hpp"

namespace cpf {

// Always normalised: lowest terms, positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

std::string to_string(const Rational& r);
quad to_quad(const Rational& r);
double to_double(const Rational& r);
Rational factorial(int n);

// Bernoulli numbers B_n = B_n(0), with B_1 = -1/2.
Rational bernoulli_number(int n);
// B_j(1/2); zero for odd j.
Rational bernoulli_half(int j);

// V[i][l] = x_l^i.
RationalMatrix vandermonde(const RationalVector& nodes);
// Exact inverse through the lower-bidiagonal/diagonal factorisation of V^{-1}.
RationalMatrix vandermonde_inverse(const RationalVector& nodes);
// Solves V(nodes) y = rhs by applying the same factors to rhs.
RationalVector vandermonde_solve(const RationalVector& nodes, RationalVector rhs);

// Default compilation nodes a_l = l + 1, l = 0..k-1.
RationalVector default_nodes(int k);

// Matrix of sum_l b_l a_l^{2j-1} = rhs_j, i.e. A = V(a^2) D with D = diag(a).
RationalMatrix compilation_matrix(const RationalVector& nodes);

// b with sum_l b_l a_l^{2j-1} = B_{2j}(1/2)/(8j), j = 1..k.
RationalVector solve_vandermonde_b(int k, const std::optional<RationalVector>& nodes = std::nullopt);

// b with rhs (0, ..., 0, c (2m-1)!/4); compiles c lambda^{2m} ad_A^{2m-1}(B).
RationalVector solve_single_term_b(int m, const Rational& c,
                                   const std::optional<RationalVector>& nodes = std::nullopt);
std::vector<quad> solve_single_term_b(int m, const quad& c,
                                      const std::optional<RationalVector>& nodes = std::nullopt);

RationalVector mat_vec(const RationalMatrix& a, const RationalVector& x);
RationalMatrix mat_mul(const RationalMatrix& a, const RationalMatrix& b);

}  // namespace cpf
