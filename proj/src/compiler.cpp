#include "cpf/compiler.hpp"

#include <cmath>

#include "cpf/corrector.hpp"
#include "cpf/fit.hpp"

namespace cpf {

Table3Row parse_table3_row(const std::string& s) {
    if (s == "sym-pair") return Table3Row::sym_pair;
    if (s == "symp-adab") return Table3Row::symp_adab;
    if (s == "sym-adb2a") return Table3Row::sym_adb2a;
    if (s == "symp-b-plus-adab") return Table3Row::symp_b_plus_adab;
    if (s == "high-order-Ck") return Table3Row::high_order_Ck;
    throw ConfigError("unknown compilation row '" + s + "'");
}

std::string to_string(Table3Row r) {
    switch (r) {
        case Table3Row::sym_pair: return "sym-pair";
        case Table3Row::symp_adab: return "symp-adab";
        case Table3Row::sym_adb2a: return "sym-adb2a";
        case Table3Row::symp_b_plus_adab: return "symp-b-plus-adab";
        case Table3Row::high_order_Ck: return "high-order-Ck";
    }
    return "?";
}

namespace {

qcomplex scaled(const qcomplex& lambda, const quad& x) { return lambda * qcomplex(x, quad(0)); }

void append(StepList& out, const StepList& more) { out.insert(out.end(), more.begin(), more.end()); }

CompiledCorrector finish(StepList raw, CommutatorExpr target, int lam_pow, int alpha_pow, const std::string& tag) {
    CompiledCorrector cc;
    cc.exp_cost = recipe_cost(raw);
    cc.product = ExpProduct::from_steps(raw, 0, tag);
    cc.raw = std::move(raw);
    cc.target = std::move(target);
    cc.error_lambda_power = lam_pow;
    cc.error_alpha_power = alpha_pow;
    return cc;
}

void check_sign(int sign) {
    if (sign != 1 && sign != -1) throw Error("compilation sign must be +1 or -1");
}

// prod_{l=k-1..0} Y(a_l, s b_l) prod_{l=0..k-1} Y(-a_l, -s b_l)
StepList y_ladder(const std::vector<quad>& a, const std::vector<quad>& b, int sign, const qcomplex& lambda) {
    StepList raw;
    const std::size_t k = a.size();
    for (std::size_t l = k; l-- > 0;) append(raw, y_steps(a[l], sign * b[l], lambda));
    for (std::size_t l = 0; l < k; ++l) append(raw, y_steps(-a[l], -sign * b[l], lambda));
    return raw;
}

std::vector<quad> to_quads(const RationalVector& v) {
    std::vector<quad> out;
    for (const auto& x : v) out.push_back(to_quad(x));
    return out;
}

}  // namespace

StepList y_steps(const quad& a, const quad& b, const qcomplex& lambda) {
    return {ExpStep::a(scaled(lambda, a)),  ExpStep::b(scaled(lambda, b)),  ExpStep::a(scaled(lambda, -a)),
            ExpStep::a(scaled(lambda, -a)), ExpStep::b(scaled(lambda, -b)), ExpStep::a(scaled(lambda, a))};
}

ExpProduct build_Y(const quad& a, const quad& b, const qcomplex& lambda) {
    return ExpProduct::from_steps(y_steps(a, b, lambda), 0, "Y");
}

int recipe_cost(const StepList& raw) {
    int cost = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (is_zero(raw[i].coeff)) continue;
        ++cost;
        if (i + 1 < raw.size() && raw[i].same_operator(raw[i + 1]) && raw[i].coeff == raw[i + 1].coeff) ++i;
    }
    return cost;
}

CompiledCorrector compile_table3(Table3Row row, const Table3Params& prm, const qcomplex& lambda, int sign) {
    check_sign(sign);
    const Rational sg(sign);
    StepList raw;
    switch (row) {
        case Table3Row::sym_pair: {
            if (prm.c2 == 0 || prm.c3 == 0) throw Error("sym-pair compilation needs c2 != 0 and c3 != 0");
            const Rational a = prm.c2 * prm.c2 / (4 * prm.c3);
            const Rational b = 2 * prm.c3 / prm.c2;
            raw = y_steps(to_quad(sg * a), to_quad(b), lambda);
            auto target = CommutatorExpr::term(prm.c2, 2, 1, "AB") + CommutatorExpr::term(-prm.c3, 3, 2, "BBA");
            return finish(raw, target.scaled(sg), 4, 0, "sym-pair");
        }
        case Table3Row::symp_adab: {
            raw.push_back(ExpStep::b(scaled(lambda, quad(-0.5))));
            append(raw, y_steps(to_quad(sg * prm.c2 / 2), 1, lambda));
            raw.push_back(ExpStep::b(scaled(lambda, quad(0.5))));
            return finish(raw, CommutatorExpr::term(sg * prm.c2, 2, 1, "AB"), 4, 0, "symp-adab");
        }
        case Table3Row::sym_adb2a: {
            const quad a = to_quad(sg * prm.c3 / 2);
            raw = y_steps(a, 1, lambda);
            append(raw, y_steps(a, -1, lambda));
            return finish(raw, CommutatorExpr::term(-sg * prm.c3, 3, 2, "BBA"), 5, 0, "sym-adb2a");
        }
        case Table3Row::symp_b_plus_adab: {
            const quad b = to_quad(prm.c1 / 2);
            const quad a = to_quad(prm.c2 / 4);
            raw.push_back(ExpStep::b(scaled(lambda, sign * b)));
            append(raw, y_steps(a, quad(sign), lambda));
            append(raw, y_steps(-a, quad(-sign), lambda));
            raw.push_back(ExpStep::b(scaled(lambda, sign * b)));
            auto target = CommutatorExpr::term(prm.c1, 1, 1, "B") + CommutatorExpr::term(prm.c2, 2, 1, "AB");
            return finish(raw, target.scaled(sg), 4, 0, "symp-b-plus-adab");
        }
        case Table3Row::high_order_Ck: return compile_Ck(prm.k, lambda, sign);
    }
    throw Error("unhandled compilation row");
}

CompiledCorrector compile_Ck(int k, const qcomplex& lambda, int sign, const std::optional<RationalVector>& nodes) {
    check_sign(sign);
    if (k < 1) throw Error("compile_Ck needs k >= 1");
    const RationalVector a = nodes ? *nodes : default_nodes(k);
    const RationalVector b = solve_vandermonde_b(k, a);
    StepList raw = y_ladder(to_quads(a), to_quads(b), sign, lambda);
    return finish(raw, corrector_Ck(k).scaled(Rational(sign)), 3, 3, "C(" + std::to_string(k) + ")");
}

CompiledCorrector compile_single_term(int m, const quad& c, const qcomplex& lambda, int sign) {
    check_sign(sign);
    if (m < 1) throw Error("compile_single_term needs m >= 1");
    const RationalVector a = default_nodes(m);
    const std::vector<quad> b = solve_single_term_b(m, c, a);
    StepList raw = y_ladder(to_quads(a), b, sign, lambda);
    return finish(raw, single_term_corrector(m, c).scaled(Rational(sign)), 3, 3,
                  "single-term(" + std::to_string(m) + ")");
}

StepList inverse_steps(const StepList& steps) {
    StepList out(steps.rbegin(), steps.rend());
    for (auto& s : out) s.coeff = -s.coeff;
    return out;
}

template <class Real>
double compilation_error(const CompiledCorrector& cc, const Partition<Real>& p, const qcomplex& lambda) {
    const CorrectorExponent e = cc.target.bind(lambda);
    const BasicOperator<Real> exact = expm(corrector_matrix(e, p), complex_t<Real>(Real(1), Real(0)));
    const BasicOperator<Real> compiled = evaluate(cc.product, p);
    return spectral_norm(exact - compiled);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0) || !(hi > lo) || per_decade < 1) throw Error("log_grid needs 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const int n = static_cast<int>(std::lround(decades * per_decade));
    std::vector<double> g;
    for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(10.0, decades * i / n));
    return g;
}

template <class Real>
CompilationErrorReport compilation_error_scan(const std::function<CompiledCorrector(const qcomplex&)>& build,
                                              const Partition<Real>& p, const std::vector<double>& lambdas) {
    CompilationErrorReport rep;
    const double floor = 1e-13 * (scalar_traits<Real>::epsilon / scalar_traits<double>::epsilon) *
                         spectral_norm(p.full()) * static_cast<double>(p.dim());
    std::vector<std::pair<double, double>> pts;
    for (double l : lambdas) {
        const qcomplex lambda = qc(l);
        const double err = compilation_error(build(lambda), p, lambda);
        rep.points.push_back({l, err});
        if (err > 10 * floor) {
            rep.fitted.push_back({l, err});
            pts.emplace_back(l, err);
        }
    }
    if (pts.size() >= 4) {
        const SlopeFit f = fit_loglog_slope(pts);
        rep.slope = f.slope;
        rep.intercept = f.intercept;
        rep.r2 = f.r2;
        rep.fit_ok = true;
    }
    return rep;
}

template double compilation_error(const CompiledCorrector&, const Partition<double>&, const qcomplex&);
template double compilation_error(const CompiledCorrector&, const Partition<quad>&, const qcomplex&);
template CompilationErrorReport compilation_error_scan(const std::function<CompiledCorrector(const qcomplex&)>&,
                                                       const Partition<double>&, const std::vector<double>&);
template CompilationErrorReport compilation_error_scan(const std::function<CompiledCorrector(const qcomplex&)>&,
                                                       const Partition<quad>&, const std::vector<double>&);

}  // namespace cpf
