#pragma once

// Nested-commutator expressions over the two partitions. A word is a string
// over {A, B} read as a right-nested commutator: "B" = B, "AB" = [A,B],
// "AAB" = [A,[A,B]] = ad_A^2(B), "BBA" = [B,[B,A]] = ad_B^2(A).

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cpf/lattice.hpp"
#include "cpf/rational.hpp"

namespace cpf {

std::string ad_word(char base, int j, char target);  // ad_base^j(target)
bool valid_word(const std::string& w);

struct CommutatorTerm {
    Rational rational{1};
    quad real_factor{1};  // irrational constant multiplier (s, c, ...); 1 for pure rationals
    int lambda_power = 0;
    int alpha_power = 0;
    std::string word;

    quad value() const { return to_quad(rational) * real_factor; }
};

class CorrectorExponent;

class CommutatorExpr {
public:
    CommutatorExpr() = default;
    explicit CommutatorExpr(std::vector<CommutatorTerm> terms);

    static CommutatorExpr term(Rational r, int lambda_power, int alpha_power, std::string word, quad real_factor = 1);

    const std::vector<CommutatorTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    // every word well formed and of length lambda_power (depth = lambda_power - 1)
    bool well_formed() const;

    CommutatorExpr operator+(const CommutatorExpr& o) const;
    CommutatorExpr operator-() const;
    CommutatorExpr operator-(const CommutatorExpr& o) const { return *this + (-o); }
    CommutatorExpr scaled(const Rational& r) const;
    // lambda -> x lambda
    CommutatorExpr rescale_lambda(const quad& x) const;

    // Fixes lambda; alpha stays symbolic until evaluation against a partition.
    CorrectorExponent bind(const qcomplex& lambda) const;

    std::string to_string() const;

private:
    std::vector<CommutatorTerm> terms_;
};

struct BoundTerm {
    qcomplex weight;
    int alpha_power = 0;
    std::string word;
};

// A corrector with lambda fixed: sum_t weight_t alpha^{p_t} word_t(A, B).
// Kept canonical (sorted, like terms merged, zeros dropped) so that equality
// is structural.
class CorrectorExponent {
public:
    CorrectorExponent() = default;
    explicit CorrectorExponent(std::vector<BoundTerm> terms);

    const std::vector<BoundTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // a single alpha^1 "B" term: exp of it is an ordinary B step
    bool is_plain_B() const;

    CorrectorExponent operator+(const CorrectorExponent& o) const;
    CorrectorExponent operator-() const;
    CorrectorExponent operator-(const CorrectorExponent& o) const { return *this + (-o); }

    friend bool operator==(const CorrectorExponent& a, const CorrectorExponent& b);

    std::string to_string() const;

private:
    static bool is_zero_weight(const qcomplex& w);
    std::vector<BoundTerm> terms_;
};

template <class Real>
class WordCache {
public:
    explicit WordCache(const Partition<Real>& p) : p_(p) {}
    const BasicOperator<Real>& get(const std::string& word);

private:
    const Partition<Real>& p_;
    std::map<std::string, BasicOperator<Real>> memo_;
};

template <class Real>
BasicOperator<Real> corrector_matrix(const CorrectorExponent& e, const Partition<Real>& p, WordCache<Real>& cache);

template <class Real>
BasicOperator<Real> corrector_matrix(const CorrectorExponent& e, const Partition<Real>& p) {
    WordCache<Real> cache(p);
    return corrector_matrix(e, p, cache);
}

}  // namespace cpf
