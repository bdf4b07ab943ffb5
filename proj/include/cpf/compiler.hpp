#pragma once

// Compilation of corrector exponentials into products of e^{xA} and e^{y alpha B}.
// Y(a,b) = X(a,b) X(-a,-b), X(a,b) = e^{a lambda A} e^{b lambda B} e^{-a lambda A}.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cpf/commutator.hpp"
#include "cpf/product.hpp"
#include "cpf/rational.hpp"

namespace cpf {

enum class Table3Row { sym_pair, symp_adab, sym_adb2a, symp_b_plus_adab, high_order_Ck };
Table3Row parse_table3_row(const std::string& s);
std::string to_string(Table3Row r);

struct Table3Params {
    Rational c1{0};
    Rational c2{0};
    Rational c3{0};
    int k = 1;
};

struct CompiledCorrector {
    StepList raw;             // recipe sequence before merging
    ExpProduct product;       // merged A/B steps
    CommutatorExpr target;    // the exponent realized (sign applied)
    int error_lambda_power = 0;
    int error_alpha_power = 0;
    int exp_cost = 0;         // recipe count (see recipe_cost)

    std::uint64_t merged_exp_count() const { return product.exp_count(); }
};

// The 6-step X(a,b) X(-a,-b) sequence; merged it has 5 exponentials.
StepList y_steps(const quad& a, const quad& b, const qcomplex& lambda);
ExpProduct build_Y(const quad& a, const quad& b, const qcomplex& lambda);

// Recipe counting rule: adjacent exponentials of the same generator merge
// only when their coefficients are identical.
int recipe_cost(const StepList& raw);

// sign = -1 compiles e^{-C} with the row's sign-flipped recipe.
CompiledCorrector compile_table3(Table3Row row, const Table3Params& params, const qcomplex& lambda, int sign = 1);
CompiledCorrector compile_Ck(int k, const qcomplex& lambda, int sign = 1,
                             const std::optional<RationalVector>& nodes = std::nullopt);
// c lambda^{2m} ad_A^{2m-1}(alpha B)
CompiledCorrector compile_single_term(int m, const quad& c, const qcomplex& lambda, int sign = 1);

// Exact inverse of a compiled product (reversed, negated steps).
StepList inverse_steps(const StepList& steps);

struct ErrorPoint {
    double x = 0;
    double error = 0;
};

struct CompilationErrorReport {
    std::vector<ErrorPoint> points;  // all grid points
    std::vector<ErrorPoint> fitted;  // points kept for the slope fit
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    bool fit_ok = false;
};

// ||expm(exact target) - evaluate(compiled)|| at one lambda.
template <class Real>
double compilation_error(const CompiledCorrector& cc, const Partition<Real>& p, const qcomplex& lambda);

// 12 log-spaced points per decade on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int per_decade = 12);

// Error over a lambda grid (real lambda) with a log-log fit. Points within
// 10x of the noise floor are dropped from the fit. The floor is
// 1e-13 * ||H|| * dim in double and scales with the epsilon of Real.
template <class Real>
CompilationErrorReport compilation_error_scan(const std::function<CompiledCorrector(const qcomplex&)>& build,
                                              const Partition<Real>& p, const std::vector<double>& lambdas);

}  // namespace cpf
