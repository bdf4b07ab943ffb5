#pragma once

// Product-formula IR. An ExpProduct is prefix * body^repetitions * suffix,
// each part an ordered list of exponential steps exp(coeff * G) with G one of
// A, alpha*B or a bound corrector exponent. Matrix products are taken left to
// right in list order.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "cpf/commutator.hpp"
#include "cpf/lattice.hpp"

namespace cpf {

enum class Generator { A, B, corrector };

struct ExpStep {
    Generator gen = Generator::A;
    qcomplex coeff;
    std::shared_ptr<const CorrectorExponent> corrector;

    static ExpStep a(const qcomplex& c) { return ExpStep{Generator::A, c, nullptr}; }
    static ExpStep b(const qcomplex& c) { return ExpStep{Generator::B, c, nullptr}; }
    static ExpStep corr(std::shared_ptr<const CorrectorExponent> e, const qcomplex& c = qc(1.0));

    bool same_operator(const ExpStep& o) const;
};

using StepList = std::vector<ExpStep>;

// Appends with merging: equal generators add coefficients, an exact zero
// coefficient removes the step (which may expose a further merge).
void push_merged(StepList& out, const ExpStep& s);
void push_merged(StepList& out, const StepList& more);
StepList merged(const StepList& steps);

class ExpProduct {
public:
    StepList prefix;
    StepList body;
    std::uint64_t repetitions = 1;
    StepList suffix;
    int order = 0;
    std::string tag;

    ExpProduct() = default;
    static ExpProduct from_steps(const StepList& steps, int order = 0, std::string tag = {});

    // Full merged step list. Throws ResourceError past max_flat_steps.
    StepList flatten() const;
    // Exponentials after merging, including merges across repetition
    // boundaries. Computed without expanding all repetitions.
    std::uint64_t exp_count() const;
    std::uint64_t count(Generator g) const;
    // sum of coefficients of the given generator over the flattened product
    qcomplex coefficient_sum(Generator g) const;
    bool has_corrector_steps() const;

    static constexpr std::uint64_t max_flat_steps = 50'000'000;
};

// Concatenation (left factor first). Inputs must have repetitions == 1 or
// are flattened first.
ExpProduct concat(const std::vector<ExpProduct>& parts, int order = 0, std::string tag = {});

ExpProduct pf1(const qcomplex& lambda);
// first = A: e^{lambda A/2} e^{lambda B} e^{lambda A/2}; first = B swaps roles.
ExpProduct pf2(const qcomplex& lambda, Generator first = Generator::A);

// Suzuki parameter p_k = 1/(4 - 4^{1/(2k-1)}).
quad suzuki_p(int k);

// Weights w of the recursion S_{2k}(l) = [S_{2k-2}(p l)]^2 S_{2k-2}((1-4p) l) [S_{2k-2}(p l)]^2
// unrolled down to the base: S_{2k}(l) = prod_i S_base(w_i l). level_param(j)
// is the p used to go from order 2j-2 to 2j.
template <class T, class F>
std::vector<T> recursive_weights(int k, F level_param) {
    std::vector<T> w{T(1)};
    for (int j = 2; j <= k; ++j) {
        const T p = level_param(j);
        const T mid = T(1) - 4 * p;
        std::vector<T> next;
        next.reserve(w.size() * 5);
        for (int rep = 0; rep < 5; ++rep) {
            const T s = rep == 2 ? mid : p;
            for (const auto& x : w) next.push_back(s * x);
        }
        w = std::move(next);
    }
    return w;
}

std::vector<quad> suzuki_weights(int order);

// prod_i base(w_i lambda), merged.
template <class Base>
ExpProduct compose(const std::vector<quad>& weights, const qcomplex& lambda, Base base, int order, std::string tag) {
    StepList steps;
    for (const auto& w : weights) push_merged(steps, base(lambda * qcomplex(w, quad(0))).flatten());
    return ExpProduct::from_steps(steps, order, std::move(tag));
}

ExpProduct suzuki(int order, const qcomplex& lambda);

struct YoshidaWeights {
    int m = 0;
    std::vector<quad> w;  // w_0..w_m

    // w_0 + 2 sum_{l>=1} w_l - 1
    quad order_condition_residual() const;
    void validate() const;
    // S2 argument sequence w_m..w_1 w_0 w_1..w_m
    std::vector<quad> sequence() const;

    // Text format: first non-comment line m, then m+1 reals w_0..w_m. If only
    // m reals follow, w_0 = 1 - 2 sum w_l is derived. '#' starts a comment.
    static YoshidaWeights parse(const std::string& text);
    static YoshidaWeights load(const std::string& path);
};

ExpProduct yoshida(const YoshidaWeights& weights, const qcomplex& lambda);

// r-fold repetition. Mirror-inverse end pairs X(c) ... X(-c) of the body are
// peeled into prefix/suffix so that (e^C S e^{-C})^r is stored as e^C S^r e^{-C}.
ExpProduct trotterize(const ExpProduct& p, std::uint64_t r);

template <class Real>
class Evaluator {
public:
    explicit Evaluator(const Partition<Real>& p) : p_(p), words_(p) {}

    const BasicOperator<Real>& step_matrix(const ExpStep& s);
    BasicOperator<Real> product(const StepList& steps);
    BasicOperator<Real> evaluate(const ExpProduct& prod);
    const Partition<Real>& partition() const { return p_; }

private:
    int corrector_index(const CorrectorExponent& e);

    const Partition<Real>& p_;
    WordCache<Real> words_;
    std::vector<CorrectorExponent> correctors_;
    std::vector<BasicOperator<Real>> corrector_mats_;
    std::map<std::tuple<int, int, quad, quad>, BasicOperator<Real>> exp_cache_;
};

template <class Real>
BasicOperator<Real> evaluate(const ExpProduct& prod, const Partition<Real>& p) {
    Evaluator<Real> ev(p);
    return ev.evaluate(prod);
}

template <class Real>
BasicOperator<Real> evaluate(const ExpProduct& prod, const HamiltonianSpec& spec) {
    const auto p = make_partition<Real>(spec);
    return evaluate(prod, p);
}

std::string to_string(const ExpProduct& p);

}  // namespace cpf
