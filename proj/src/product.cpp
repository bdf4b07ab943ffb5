#include "cpf/product.hpp"

#include <fstream>
#include <sstream>

namespace cpf {

ExpStep ExpStep::corr(std::shared_ptr<const CorrectorExponent> e, const qcomplex& c) {
    if (!e) throw Error("corrector step without exponent");
    return ExpStep{Generator::corrector, c, std::move(e)};
}

bool ExpStep::same_operator(const ExpStep& o) const {
    if (gen != o.gen) return false;
    if (gen != Generator::corrector) return true;
    return corrector == o.corrector || *corrector == *o.corrector;
}

void push_merged(StepList& out, const ExpStep& s) {
    if (is_zero(s.coeff)) return;
    if (!out.empty() && out.back().same_operator(s)) {
        out.back().coeff += s.coeff;
        if (is_zero(out.back().coeff)) out.pop_back();
        return;
    }
    // e^{c1 E} e^{c2 (-E)} = e^{(c1 - c2) E}
    if (!out.empty() && s.gen == Generator::corrector && out.back().gen == Generator::corrector &&
        (*out.back().corrector + *s.corrector).is_zero()) {
        out.back().coeff -= s.coeff;
        if (is_zero(out.back().coeff)) out.pop_back();
        return;
    }
    out.push_back(s);
}

void push_merged(StepList& out, const StepList& more) {
    for (const auto& s : more) push_merged(out, s);
}

StepList merged(const StepList& steps) {
    StepList out;
    push_merged(out, steps);
    return out;
}

ExpProduct ExpProduct::from_steps(const StepList& steps, int order, std::string tag) {
    ExpProduct p;
    p.body = merged(steps);
    p.order = order;
    p.tag = std::move(tag);
    return p;
}

namespace {

StepList flatten_reps(const ExpProduct& p, std::uint64_t reps) {
    const std::uint64_t total = p.prefix.size() + p.suffix.size() + reps * p.body.size();
    if (reps != 0 && total / reps < p.body.size()) throw ResourceError("product too large to flatten");
    if (total > ExpProduct::max_flat_steps) throw ResourceError("product too large to flatten");
    StepList out;
    push_merged(out, p.prefix);
    for (std::uint64_t k = 0; k < reps; ++k) push_merged(out, p.body);
    push_merged(out, p.suffix);
    return out;
}

}  // namespace

StepList ExpProduct::flatten() const { return flatten_reps(*this, repetitions); }

std::uint64_t ExpProduct::exp_count() const {
    if (repetitions <= 3) return flatten().size();
    const auto c1 = flatten_reps(*this, 1).size();
    const auto c2 = flatten_reps(*this, 2).size();
    const auto c3 = flatten_reps(*this, 3).size();
    if (c3 - c2 == c2 - c1 && c2 >= c1) return c1 + (repetitions - 1) * (c2 - c1);
    return flatten().size();
}

std::uint64_t ExpProduct::count(Generator g) const {
    std::uint64_t n = 0;
    for (const auto& s : flatten())
        if (s.gen == g) ++n;
    return n;
}

qcomplex ExpProduct::coefficient_sum(Generator g) const {
    qcomplex sum(quad(0), quad(0));
    auto add = [&](const StepList& l, const quad& w) {
        for (const auto& s : l)
            if (s.gen == g) sum += s.coeff * qcomplex(w, quad(0));
    };
    add(prefix, 1);
    add(body, quad(repetitions));
    add(suffix, 1);
    return sum;
}

bool ExpProduct::has_corrector_steps() const {
    for (const StepList* l : {&prefix, &body, &suffix})
        for (const auto& s : *l)
            if (s.gen == Generator::corrector) return true;
    return false;
}

ExpProduct concat(const std::vector<ExpProduct>& parts, int order, std::string tag) {
    StepList steps;
    for (const auto& p : parts) push_merged(steps, p.flatten());
    return ExpProduct::from_steps(steps, order, std::move(tag));
}

ExpProduct pf1(const qcomplex& lambda) {
    return ExpProduct::from_steps({ExpStep::a(lambda), ExpStep::b(lambda)}, 1, "pf1");
}

ExpProduct pf2(const qcomplex& lambda, Generator first) {
    const qcomplex half = lambda / qcomplex(quad(2), quad(0));
    if (first == Generator::B)
        return ExpProduct::from_steps({ExpStep::b(half), ExpStep::a(lambda), ExpStep::b(half)}, 2, "pf2-bab");
    if (first != Generator::A) throw Error("pf2 ordering must start with A or B");
    return ExpProduct::from_steps({ExpStep::a(half), ExpStep::b(lambda), ExpStep::a(half)}, 2, "pf2");
}

quad suzuki_p(int k) {
    if (k < 1) throw Error("suzuki parameter needs k >= 1");
    return quad(1) / (quad(4) - boost::multiprecision::pow(quad(4), quad(1) / quad(2 * k - 1)));
}

std::vector<quad> suzuki_weights(int order) {
    if (order < 2 || order % 2 != 0) throw Error("suzuki order must be even and >= 2, got " + std::to_string(order));
    return recursive_weights<quad>(order / 2, [](int j) { return suzuki_p(j); });
}

ExpProduct suzuki(int order, const qcomplex& lambda) {
    const auto w = suzuki_weights(order);
    return compose(w, lambda, [](const qcomplex& l) { return pf2(l); }, order, "pf" + std::to_string(order));
}

quad YoshidaWeights::order_condition_residual() const {
    quad s = w.empty() ? quad(0) : w[0];
    for (std::size_t l = 1; l < w.size(); ++l) s += 2 * w[l];
    return s - 1;
}

void YoshidaWeights::validate() const {
    if (m < 0 || static_cast<int>(w.size()) != m + 1)
        throw ConfigError("yoshida weights: expected m+1 = " + std::to_string(m + 1) + " values, got " +
                          std::to_string(w.size()));
    for (const auto& x : w)
        if (!boost::multiprecision::isfinite(x)) throw ConfigError("yoshida weights: non-finite value");
    if (boost::multiprecision::abs(order_condition_residual()) > 1e-12)
        throw ConfigError("yoshida weights violate w0 + 2 sum w_l = 1 (residual " +
                          std::to_string(static_cast<double>(order_condition_residual())) + ")");
}

std::vector<quad> YoshidaWeights::sequence() const {
    std::vector<quad> seq;
    for (int l = m; l >= 1; --l) seq.push_back(w[l]);
    seq.push_back(w[0]);
    for (int l = 1; l <= m; ++l) seq.push_back(w[l]);
    return seq;
}

YoshidaWeights YoshidaWeights::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> tokens;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.empty()) throw ConfigError("yoshida weights: empty file");
    YoshidaWeights y;
    try {
        std::size_t used = 0;
        y.m = std::stoi(tokens[0], &used);
        if (used != tokens[0].size() || y.m < 0) throw ConfigError("bad m");
        std::vector<quad> vals;
        for (std::size_t k = 1; k < tokens.size(); ++k) vals.push_back(quad(tokens[k]));
        if (static_cast<int>(vals.size()) == y.m + 1) {
            y.w = vals;
        } else if (static_cast<int>(vals.size()) == y.m) {
            quad s = 0;
            for (const auto& v : vals) s += v;
            y.w.push_back(1 - 2 * s);
            y.w.insert(y.w.end(), vals.begin(), vals.end());
        } else {
            throw ConfigError("yoshida weights: expected " + std::to_string(y.m) + " or " + std::to_string(y.m + 1) +
                              " values after m, got " + std::to_string(vals.size()));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("yoshida weights: unparsable value (") + e.what() + ")");
    }
    y.validate();
    return y;
}

YoshidaWeights YoshidaWeights::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open yoshida weights file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

ExpProduct yoshida(const YoshidaWeights& weights, const qcomplex& lambda) {
    weights.validate();
    return compose(weights.sequence(), lambda, [](const qcomplex& l) { return pf2(l); }, 0,
                   "ypf:m=" + std::to_string(weights.m));
}

namespace {

bool mirror_inverse(const ExpStep& front, const ExpStep& back) {
    if (front.same_operator(back) && is_zero(front.coeff + back.coeff)) return true;
    return front.gen == Generator::corrector && back.gen == Generator::corrector && front.coeff == back.coeff &&
           (*front.corrector + *back.corrector).is_zero();
}

}  // namespace

ExpProduct trotterize(const ExpProduct& p, std::uint64_t r) {
    if (r < 1) throw Error("trotterize needs r >= 1");
    ExpProduct out = p;
    if (!p.prefix.empty() && merged([&] {
            StepList j = p.suffix;
            j.insert(j.end(), p.prefix.begin(), p.prefix.end());
            return j;
        }()).empty()) {
        out.repetitions = p.repetitions * r;
        return out;
    }
    StepList body = p.flatten();
    StepList prefix, suffix_rev;
    std::size_t lo = 0, hi = body.size();
    while (hi - lo > 2 && mirror_inverse(body[lo], body[hi - 1])) {
        prefix.push_back(body[lo]);
        suffix_rev.push_back(body[hi - 1]);
        ++lo;
        --hi;
    }
    out.prefix = prefix;
    out.body.assign(body.begin() + static_cast<std::ptrdiff_t>(lo), body.begin() + static_cast<std::ptrdiff_t>(hi));
    out.suffix.assign(suffix_rev.rbegin(), suffix_rev.rend());
    out.repetitions = r;
    return out;
}

template <class Real>
int Evaluator<Real>::corrector_index(const CorrectorExponent& e) {
    for (std::size_t k = 0; k < correctors_.size(); ++k)
        if (correctors_[k] == e) return static_cast<int>(k);
    correctors_.push_back(e);
    corrector_mats_.push_back(corrector_matrix(e, p_, words_));
    return static_cast<int>(correctors_.size() - 1);
}

template <class Real>
const BasicOperator<Real>& Evaluator<Real>::step_matrix(const ExpStep& s) {
    const int ci = s.gen == Generator::corrector ? corrector_index(*s.corrector) : -1;
    const auto key = std::make_tuple(static_cast<int>(s.gen), ci, s.coeff.real(), s.coeff.imag());
    auto it = exp_cache_.find(key);
    if (it != exp_cache_.end()) return it->second;
    complex_t<Real> z = to_complex<Real>(s.coeff);
    BasicOperator<Real> m;
    switch (s.gen) {
        case Generator::A: m = expm(p_.A, z); break;
        case Generator::B:
            z *= Real(p_.alpha);
            m = expm(p_.B, z);
            break;
        case Generator::corrector: m = expm(corrector_mats_[static_cast<std::size_t>(ci)], z); break;
    }
    return exp_cache_.emplace(key, std::move(m)).first->second;
}

template <class Real>
BasicOperator<Real> Evaluator<Real>::product(const StepList& steps) {
    auto out = BasicOperator<Real>::identity(p_.dim());
    bool first = true;
    for (const auto& s : steps) {
        if (first) {
            out = step_matrix(s);
            first = false;
        } else {
            out = multiply(out, step_matrix(s));
        }
    }
    return out;
}

template <class Real>
BasicOperator<Real> Evaluator<Real>::evaluate(const ExpProduct& prod) {
    BasicOperator<Real> core = power(product(prod.body), prod.repetitions);
    if (!prod.prefix.empty()) core = multiply(product(prod.prefix), core);
    if (!prod.suffix.empty()) core = multiply(core, product(prod.suffix));
    return core;
}

template class Evaluator<double>;
template class Evaluator<quad>;

std::string to_string(const ExpProduct& p) {
    std::ostringstream os;
    auto dump = [&](const StepList& l) {
        for (const auto& s : l) {
            switch (s.gen) {
                case Generator::A: os << " A"; break;
                case Generator::B: os << " B"; break;
                case Generator::corrector: os << " C{" << s.corrector->to_string() << "}"; break;
            }
            os << "(" << cpf::to_string(s.coeff) << ")";
        }
    };
    os << (p.tag.empty() ? "product" : p.tag) << ":";
    if (!p.prefix.empty()) {
        os << " [";
        dump(p.prefix);
        os << " ]";
    }
    os << " (";
    dump(p.body);
    os << " )^" << p.repetitions;
    if (!p.suffix.empty()) {
        os << " [";
        dump(p.suffix);
        os << " ]";
    }
    return os.str();
}

}  // namespace cpf
