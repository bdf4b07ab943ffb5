#include "cpf/corrector.hpp"

#include <boost/multiprecision/float128.hpp>

#include "cpf/compiler.hpp"

namespace cpf {

namespace bmp = boost::multiprecision;

CommutatorExpr corrector_Ck(int k) {
    if (k < 1) throw Error("C(k) needs k >= 1");
    CommutatorExpr out;
    for (int j = 1; j <= k; ++j)
        out = out + CommutatorExpr::term(bernoulli_half(2 * j) / factorial(2 * j), 2 * j, 1, ad_word('A', 2 * j - 1, 'B'));
    return out;
}

CommutatorExpr single_term_corrector(int degree, const quad& c) {
    if (degree < 1) throw Error("single-term corrector needs degree >= 1");
    return CommutatorExpr::term(Rational(1), 2 * degree, 1, ad_word('A', 2 * degree - 1, 'B'), c);
}

namespace {

quad cpf4_c(const quad& s, const quad& second) {
    const quad t = 1 - 4 * s;
    return quad(7) / 5760 * (4 * bmp::pow(s, 5) + bmp::pow(t, 5)) +
           second * s * (1 - 2 * s) * (1 - 3 * s) * (1 - 4 * s) * (1 - 5 * s);
}

}  // namespace

Cpf4Constants cpf4_constants() {
    const quad s = suzuki_p(2);
    return {s, cpf4_c(s, quad(1) / 72)};
}

quad cpf4_constant_as_printed() { return cpf4_c(suzuki_p(2), quad(1) / 36); }

quad nonpert_a(int k) {
    if (k < 2) throw Error("non-perturbed recursion parameter needs k >= 2");
    return quad(1) / (quad(4) - bmp::pow(quad(4), quad(1) / quad(2 * k + 1)));
}

std::string to_string(SymmetryTag t) {
    switch (t) {
        case SymmetryTag::symplectic: return "symplectic";
        case SymmetryTag::symmetric: return "symmetric";
        case SymmetryTag::composite: return "composite";
    }
    return "?";
}

std::vector<std::string> table2_names() {
    return {"pf1-symp-basic", "pf1-symp-ext", "pf1-sym", "pf1-com", "pf2-symp", "pf2-com", "pf2-symp-k", "pf4-symp"};
}

Table2Entry table2_corrector(const std::string& name, int k) {
    using CE = CommutatorExpr;
    const CE pf1_sym = CE::term(Rational(-1, 4), 2, 1, "AB") + CE::term(Rational(-1, 12), 3, 2, "BBA");
    Table2Entry e;
    e.name = name;
    if (name == "pf1-symp-basic") {
        e.base = "pf1";
        e.symp = CE::term(Rational(1, 2), 1, 1, "B");
    } else if (name == "pf1-symp-ext") {
        e.base = "pf1";
        e.symp = CE::term(Rational(1, 2), 1, 1, "B") + CE::term(Rational(1, 12), 2, 1, "AB");
    } else if (name == "pf1-sym") {
        e.base = "pf1";
        e.tag = SymmetryTag::symmetric;
        e.sym = pf1_sym;
    } else if (name == "pf1-com") {
        e.base = "pf1";
        e.tag = SymmetryTag::composite;
        e.symp = CE::term(Rational(1, 12), 2, 1, "AB");
        e.sym = pf1_sym;
    } else if (name == "pf2-symp") {
        e.base = "pf2";
        e.symp = CE::term(Rational(-1, 24), 2, 1, "AB");
    } else if (name == "pf2-com") {
        e.base = "pf2";
        e.tag = SymmetryTag::composite;
        e.symp = CE::term(Rational(-1, 24), 2, 1, "AB");
        e.sym = CE::term(Rational(-1, 48), 3, 2, "BBA");
    } else if (name == "pf2-symp-k") {
        e.base = "pf2";
        e.symp = corrector_Ck(k);
        e.k = k;
    } else if (name == "pf4-symp") {
        e.base = "pf4";
        e.c = cpf4_constants().c;
        e.k = 2;
        e.symp = single_term_corrector(2, e.c);
    } else {
        throw ConfigError("unknown corrector '" + name + "'");
    }
    return e;
}

bool CorrectedFormula::wraps_consistent() const {
    if (left_wrap.size() != right_wrap.size()) return false;
    if (left_wrap.empty()) return true;
    switch (tag) {
        case SymmetryTag::symplectic:
            return left_wrap.size() == 1 && left_wrap[0].sign == -right_wrap[0].sign;
        case SymmetryTag::symmetric:
            return left_wrap.size() == 1 && left_wrap[0].sign == right_wrap[0].sign;
        case SymmetryTag::composite:
            return left_wrap.size() == 2 && left_wrap[0].sign == -right_wrap[1].sign &&
                   left_wrap[1].sign == right_wrap[0].sign;
    }
    return false;
}

namespace {

enum class Part { symp, sym };

StepList exact_exp(const CommutatorExpr& expr, const qcomplex& lambda, int sign) {
    CorrectorExponent e = expr.bind(lambda);
    if (sign < 0) e = -e;
    if (e.is_zero()) return {};
    if (e.is_plain_B()) return {ExpStep::b(e.terms()[0].weight)};
    return {ExpStep::corr(std::make_shared<const CorrectorExponent>(std::move(e)))};
}

StepList compiled_exp(const Table2Entry& entry, Part part, const qcomplex& lambda, int sign) {
    const CommutatorExpr& expr = part == Part::symp ? entry.symp : entry.sym;
    const CorrectorExponent probe = expr.bind(qc(1.0));
    if (probe.is_zero() || probe.is_plain_B()) return exact_exp(expr, lambda, sign);
    Table3Params prm;
    Table3Row row;
    const std::string& n = entry.name;
    if (n == "pf1-symp-ext") {
        row = Table3Row::symp_b_plus_adab;
        prm.c1 = Rational(1, 2);
        prm.c2 = Rational(1, 12);
    } else if (n == "pf1-sym" || (n == "pf1-com" && part == Part::sym)) {
        row = Table3Row::sym_pair;
        prm.c2 = Rational(-1, 4);
        prm.c3 = Rational(1, 12);
    } else if (n == "pf1-com") {
        row = Table3Row::symp_adab;
        prm.c2 = Rational(1, 12);
    } else if (n == "pf2-symp" || (n == "pf2-com" && part == Part::symp)) {
        row = Table3Row::symp_adab;
        prm.c2 = Rational(-1, 24);
    } else if (n == "pf2-com") {
        row = Table3Row::sym_adb2a;
        prm.c3 = Rational(1, 48);
    } else if (n == "pf2-symp-k") {
        return compile_Ck(entry.k, lambda, sign).product.flatten();
    } else if (n == "pf4-symp" || n == "single-term") {
        return compile_single_term(entry.k, entry.c, lambda, sign).product.flatten();
    } else {
        throw ConfigError("no compilation recipe for corrector '" + n + "'");
    }
    return compile_table3(row, prm, lambda, sign).product.flatten();
}

StepList part_exp(const Table2Entry& entry, Part part, const qcomplex& lambda, int sign, CorrectorMode mode) {
    if (mode == CorrectorMode::compiled) return compiled_exp(entry, part, lambda, sign);
    return exact_exp(part == Part::symp ? entry.symp : entry.sym, lambda, sign);
}

}  // namespace

CorrectedFormula wrap_formula(const ExpProduct& core, const Table2Entry& entry, const qcomplex& lambda,
                              CorrectorMode mode) {
    CorrectedFormula f;
    f.core = core;
    f.tag = entry.tag;
    const StepList core_steps = core.flatten();
    auto factor = [&](Part part, int sign) { return WrapFactor{part_exp(entry, part, lambda, sign, mode), sign}; };
    StepList body;
    switch (entry.tag) {
        case SymmetryTag::symplectic: {
            f.left_wrap = {factor(Part::symp, 1)};
            f.right_wrap = {factor(Part::symp, -1)};
            f.product.prefix = merged(f.left_wrap[0].steps);
            body = core_steps;
            f.product.suffix = merged(f.right_wrap[0].steps);
            break;
        }
        case SymmetryTag::symmetric: {
            f.left_wrap = {factor(Part::sym, 1)};
            f.right_wrap = {factor(Part::sym, 1)};
            body = f.left_wrap[0].steps;
            body.insert(body.end(), core_steps.begin(), core_steps.end());
            body.insert(body.end(), f.right_wrap[0].steps.begin(), f.right_wrap[0].steps.end());
            break;
        }
        case SymmetryTag::composite: {
            f.left_wrap = {factor(Part::symp, 1), factor(Part::sym, 1)};
            f.right_wrap = {factor(Part::sym, 1), factor(Part::symp, -1)};
            f.product.prefix = merged(f.left_wrap[0].steps);
            body = f.left_wrap[1].steps;
            body.insert(body.end(), core_steps.begin(), core_steps.end());
            body.insert(body.end(), f.right_wrap[0].steps.begin(), f.right_wrap[0].steps.end());
            f.product.suffix = merged(f.right_wrap[1].steps);
            break;
        }
    }
    f.product.body = merged(body);
    f.product.order = core.order;
    f.product.tag = "c" + entry.name + (mode == CorrectorMode::compiled ? "+compiled" : "");
    return f;
}

CorrectedFormula cpf1(const std::string& variant, const qcomplex& lambda, CorrectorMode mode) {
    return wrap_formula(pf1(lambda), table2_corrector("pf1-" + variant), lambda, mode);
}

CorrectedFormula cpf2_symplectic(int k, const qcomplex& lambda, CorrectorMode mode) {
    auto f = wrap_formula(pf2(lambda), table2_corrector("pf2-symp-k", k), lambda, mode);
    f.product.tag = "cpf2-symp:" + std::to_string(k);
    return f;
}

CorrectedFormula cpf2_composite(const qcomplex& lambda, CorrectorMode mode) {
    return wrap_formula(pf2(lambda), table2_corrector("pf2-com"), lambda, mode);
}

CorrectedFormula cpf4_symplectic(const qcomplex& lambda, CorrectorMode mode, std::optional<quad> c) {
    Table2Entry e = table2_corrector("pf4-symp");
    if (c) {
        e.c = *c;
        e.symp = single_term_corrector(2, e.c);
    }
    return wrap_formula(suzuki(4, lambda), e, lambda, mode);
}

namespace {

CorrectedFormula recursion(const std::vector<quad>& w, const qcomplex& lambda, int order, const std::string& tag,
                           SymmetryTag sym, const std::function<ExpProduct(const qcomplex&)>& base) {
    CorrectedFormula f;
    f.tag = sym;
    // apply base directly so that any prefix/suffix of the base is included
    f.product = compose(w, lambda, base, order, tag);
    f.core = f.product;
    return f;
}

}  // namespace

CorrectedFormula cpf2k_perturbed(int order, int k_corr, const qcomplex& lambda, CorrectorMode mode) {
    if (order < 2 || order % 2) throw ConfigError("cpf2k-pert order must be even and >= 2");
    if (k_corr < 1) throw ConfigError("cpf2k-pert needs k_corr >= 1");
    if (order == 2) return cpf2_symplectic(k_corr, lambda, mode);
    const auto w = recursive_weights<quad>(order / 2, [](int j) { return suzuki_p(j); });
    return recursion(w, lambda, order, "cpf2k-pert:" + std::to_string(order / 2), SymmetryTag::symplectic,
                     [&](const qcomplex& l) { return cpf2_symplectic(k_corr, l, mode).product; });
}

CorrectedFormula cpf2k_nonperturbed(int order, const qcomplex& lambda, CorrectorMode mode) {
    if (order < 2 || order % 2) throw ConfigError("cpf2k-nonpert order must be even and >= 2");
    if (order == 2) return cpf2_composite(lambda, mode);
    const auto w = recursive_weights<quad>(order / 2, [](int j) { return nonpert_a(j); });
    return recursion(w, lambda, order + 2, "cpf2k-nonpert:" + std::to_string(order / 2), SymmetryTag::composite,
                     [&](const qcomplex& l) { return cpf2_composite(l, mode).product; });
}

CorrectedFormula corrected_yoshida(const YoshidaWeights& weights, int k_corr, const qcomplex& lambda) {
    weights.validate();
    const auto seq = weights.sequence();
    const CommutatorExpr ck = corrector_Ck(k_corr);
    std::vector<CorrectorExponent> c;
    for (const auto& v : seq) c.push_back(ck.rescale_lambda(v).bind(lambda));
    auto corr = [](CorrectorExponent e, const qcomplex& coeff) {
        return ExpStep::corr(std::make_shared<const CorrectorExponent>(std::move(e)), coeff);
    };
    CorrectedFormula f;
    f.tag = SymmetryTag::symplectic;
    f.core = yoshida(weights, lambda);
    f.left_wrap = {WrapFactor{{corr(c.front(), qc(1.0))}, 1}};
    f.right_wrap = {WrapFactor{{corr(c.back(), qc(-1.0))}, -1}};
    StepList body;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) {
            CorrectorExponent d = c[i] - c[i - 1];
            if (!d.is_zero()) push_merged(body, corr(std::move(d), qc(1.0)));
        }
        push_merged(body, pf2(lambda * qcomplex(seq[i], quad(0))).flatten());
    }
    f.product.prefix = f.left_wrap[0].steps;
    f.product.body = body;
    f.product.suffix = f.right_wrap[0].steps;
    f.product.order = 0;
    f.product.tag = "cypf:m=" + std::to_string(weights.m) + ":" + std::to_string(k_corr);
    return f;
}

CorrectedFormula yoshida_symplectic(const YoshidaWeights& weights, int degree, const quad& c, const qcomplex& lambda,
                                    CorrectorMode mode) {
    Table2Entry e;
    e.name = "single-term";
    e.base = "ypf";
    e.k = degree;
    e.c = c;
    e.symp = single_term_corrector(degree, c);
    auto f = wrap_formula(yoshida(weights, lambda), e, lambda, mode);
    f.product.tag = "ypf-symp:m=" + std::to_string(weights.m);
    return f;
}

}  // namespace cpf
