#include "cpf/commutator.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace cpf {

std::string ad_word(char base, int j, char target) { return std::string(static_cast<std::size_t>(j), base) + target; }

bool valid_word(const std::string& w) {
    if (w.empty()) return false;
    return std::all_of(w.begin(), w.end(), [](char c) { return c == 'A' || c == 'B'; });
}

CommutatorExpr::CommutatorExpr(std::vector<CommutatorTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (!valid_word(t.word)) throw Error("commutator word must be a nonempty string over {A,B}: '" + t.word + "'");
}

CommutatorExpr CommutatorExpr::term(Rational r, int lambda_power, int alpha_power, std::string word, quad real_factor) {
    CommutatorTerm t;
    t.rational = std::move(r);
    t.real_factor = real_factor;
    t.lambda_power = lambda_power;
    t.alpha_power = alpha_power;
    t.word = std::move(word);
    return CommutatorExpr({t});
}

bool CommutatorExpr::well_formed() const {
    for (const auto& t : terms_)
        if (!valid_word(t.word) || static_cast<int>(t.word.size()) != t.lambda_power || t.alpha_power < 0) return false;
    return true;
}

CommutatorExpr CommutatorExpr::operator+(const CommutatorExpr& o) const {
    std::vector<CommutatorTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return CommutatorExpr(std::move(all));
}

CommutatorExpr CommutatorExpr::operator-() const { return scaled(Rational(-1)); }

CommutatorExpr CommutatorExpr::scaled(const Rational& r) const {
    CommutatorExpr out = *this;
    for (auto& t : out.terms_) t.rational *= r;
    return out;
}

CommutatorExpr CommutatorExpr::rescale_lambda(const quad& x) const {
    CommutatorExpr out = *this;
    for (auto& t : out.terms_) t.real_factor *= boost::multiprecision::pow(x, t.lambda_power);
    return out;
}

CorrectorExponent CommutatorExpr::bind(const qcomplex& lambda) const {
    std::vector<BoundTerm> bound;
    for (const auto& t : terms_) {
        qcomplex lp(quad(1), quad(0));
        for (int k = 0; k < t.lambda_power; ++k) lp *= lambda;
        bound.push_back(BoundTerm{lp * t.value(), t.alpha_power, t.word});
    }
    return CorrectorExponent(std::move(bound));
}

std::string CommutatorExpr::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << cpf::to_string(t.rational);
        if (t.real_factor != 1) os << "*" << static_cast<double>(t.real_factor);
        os << ")";
        if (t.lambda_power) os << " lambda^" << t.lambda_power;
        if (t.alpha_power) os << " alpha^" << t.alpha_power;
        os << " [" << t.word << "]";
    }
    return first ? "0" : os.str();
}

CorrectorExponent::CorrectorExponent(std::vector<BoundTerm> terms) {
    std::sort(terms.begin(), terms.end(), [](const BoundTerm& a, const BoundTerm& b) {
        return std::tie(a.word, a.alpha_power) < std::tie(b.word, b.alpha_power);
    });
    for (auto& t : terms) {
        if (!valid_word(t.word)) throw Error("corrector word must be a nonempty string over {A,B}");
        if (!terms_.empty() && terms_.back().word == t.word && terms_.back().alpha_power == t.alpha_power) {
            terms_.back().weight += t.weight;
            if (is_zero_weight(terms_.back().weight)) terms_.pop_back();
            continue;
        }
        if (!is_zero_weight(t.weight)) terms_.push_back(t);
    }
}

bool CorrectorExponent::is_zero_weight(const qcomplex& w) { return cpf::is_zero(w); }

bool CorrectorExponent::is_plain_B() const {
    return terms_.size() == 1 && terms_[0].word == "B" && terms_[0].alpha_power == 1;
}

CorrectorExponent CorrectorExponent::operator+(const CorrectorExponent& o) const {
    std::vector<BoundTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return CorrectorExponent(std::move(all));
}

CorrectorExponent CorrectorExponent::operator-() const {
    CorrectorExponent out = *this;
    for (auto& t : out.terms_) t.weight = -t.weight;
    return out;
}

bool operator==(const CorrectorExponent& a, const CorrectorExponent& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k) {
        const auto& x = a.terms_[k];
        const auto& y = b.terms_[k];
        if (x.word != y.word || x.alpha_power != y.alpha_power || x.weight.real() != y.weight.real() ||
            x.weight.imag() != y.weight.imag())
            return false;
    }
    return true;
}

std::string CorrectorExponent::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << cpf::to_string(t.weight) << ")";
        if (t.alpha_power) os << " alpha^" << t.alpha_power;
        os << " [" << t.word << "]";
    }
    return first ? "0" : os.str();
}

template <class Real>
const BasicOperator<Real>& WordCache<Real>::get(const std::string& word) {
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
    if (!valid_word(word)) throw Error("invalid commutator word '" + word + "'");
    BasicOperator<Real> m;
    if (word.size() == 1) {
        m = word[0] == 'A' ? p_.A : p_.B;
    } else {
        const BasicOperator<Real>& inner = get(word.substr(1));
        m = commutator(word[0] == 'A' ? p_.A : p_.B, inner);
    }
    return memo_.emplace(word, std::move(m)).first->second;
}

template <class Real>
BasicOperator<Real> corrector_matrix(const CorrectorExponent& e, const Partition<Real>& p, WordCache<Real>& cache) {
    BasicOperator<Real> out(p.dim());
    for (const auto& t : e.terms()) {
        Real ap(1);
        for (int k = 0; k < t.alpha_power; ++k) ap *= Real(p.alpha);
        complex_t<Real> w = to_complex<Real>(t.weight);
        w *= ap;
        out.axpy(w, cache.get(t.word));
    }
    return out;
}

template class WordCache<double>;
template class WordCache<quad>;
template DenseOperator corrector_matrix(const CorrectorExponent&, const Partition<double>&, WordCache<double>&);
template QuadOperator corrector_matrix(const CorrectorExponent&, const Partition<quad>&, WordCache<quad>&);

}  // namespace cpf
