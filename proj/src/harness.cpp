#include "cpf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cpf/estimate.hpp"

namespace cpf {

Precision parse_precision(const std::string& s) {
    if (s == "double" || s == "fp64") return Precision::fp64;
    if (s == "quad" || s == "fp128") return Precision::fp128;
    throw ConfigError("unknown precision '" + s + "' (double|quad)");
}

std::string to_string(Precision p) { return p == Precision::fp64 ? "double" : "quad"; }

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer for " + what + ", got '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected a number for " + what + ", got '" + s + "'");
    }
}

}  // namespace

FormulaSelector FormulaSelector::parse(const std::string& raw) {
    FormulaSelector f;
    f.text = trim(raw);
    std::string s = f.text;
    const std::string suffix = "+compiled";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
        f.compiled = true;
        s.erase(s.size() - suffix.size());
    }
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto need_k = [&](const std::string& what) {
        if (rest.empty()) throw ConfigError("selector '" + f.text + "' needs " + what);
    };
    auto no_args = [&] {
        if (colon != std::string::npos) throw ConfigError("selector '" + f.text + "' takes no arguments");
    };
    using K = Kind;
    if (head == "pf1") {
        no_args();
        f.kind = K::pf1;
    } else if (head == "pf2") {
        no_args();
        f.kind = K::pf2;
    } else if (head == "pf4") {
        no_args();
        f.kind = K::suzuki;
        f.k = 2;
    } else if (head == "pf2k") {
        need_k("an order parameter k");
        f.kind = K::suzuki;
        f.k = parse_int(rest, "pf2k:<k>");
    } else if (head == "cpf1-symp") {
        no_args();
        f.kind = K::cpf1_symp;
    } else if (head == "cpf1-sym") {
        no_args();
        f.kind = K::cpf1_sym;
    } else if (head == "cpf1-com") {
        no_args();
        f.kind = K::cpf1_com;
    } else if (head == "cpf2-symp") {
        f.kind = K::cpf2_symp;
        f.k = rest.empty() ? 1 : parse_int(rest, "cpf2-symp:<k>");
    } else if (head == "cpf2-com") {
        no_args();
        f.kind = K::cpf2_com;
    } else if (head == "cpf4-symp") {
        no_args();
        f.kind = K::cpf4_symp;
    } else if (head == "cpf2k-pert") {
        need_k("an order parameter k");
        f.kind = K::cpf2k_pert;
        const auto parts = split(rest, ':');
        f.k = parse_int(parts[0], "cpf2k-pert:<k>");
        f.kcorr = parts.size() > 1 ? parse_int(parts[1], "cpf2k-pert:<k>:<kcorr>") : f.k;
        if (parts.size() > 2) throw ConfigError("selector '" + f.text + "' has too many fields");
    } else if (head == "cpf2k-nonpert") {
        need_k("an order parameter k");
        f.kind = K::cpf2k_nonpert;
        f.k = parse_int(rest, "cpf2k-nonpert:<k>");
    } else if (head == "ypf" || head == "cypf" || head == "ypf-symp") {
        need_k("a weights file");
        f.file = rest;
        if (head == "ypf") {
            f.kind = K::ypf;
        } else {
            const auto last = rest.rfind(':');
            if (last == std::string::npos) throw ConfigError("selector '" + f.text + "' needs <file>:<k>");
            f.file = rest.substr(0, last);
            f.k = parse_int(rest.substr(last + 1), head + " parameter");
            f.kind = head == "cypf" ? K::cypf : K::ypf_symp;
        }
        f.weights = YoshidaWeights::load(f.file);
    } else {
        throw ConfigError("unknown formula selector '" + f.text + "'");
    }
    if (f.kind == K::suzuki && f.k < 1) throw ConfigError("pf2k needs k >= 1");
    if ((f.kind == K::cpf2_symp || f.kind == K::cpf2k_pert || f.kind == K::cpf2k_nonpert || f.kind == K::cypf ||
         f.kind == K::ypf_symp) &&
        f.k < 1)
        throw ConfigError("selector '" + f.text + "' needs k >= 1");
    if (f.kind == K::cpf2k_pert && f.kcorr < 1) throw ConfigError("cpf2k-pert needs kcorr >= 1");
    if (f.compiled && (!f.is_corrected() || f.kind == K::cypf))
        throw ConfigError("no compiled variant for selector '" + f.text + "'");
    if (f.kind == K::ypf_symp) {
        const auto w = f.weights;
        f.constant = quad(estimate_leading_coefficient([w](const qcomplex& l) { return yoshida(w, l); }, f.k, 2).mean);
    }
    return f;
}

bool FormulaSelector::is_corrected() const {
    return !(kind == Kind::pf1 || kind == Kind::pf2 || kind == Kind::suzuki || kind == Kind::ypf);
}

ExpProduct FormulaSelector::build(const qcomplex& lambda) const {
    const CorrectorMode mode = compiled ? CorrectorMode::compiled : CorrectorMode::exact;
    ExpProduct p;
    switch (kind) {
        case Kind::pf1: p = pf1(lambda); break;
        case Kind::pf2: p = pf2(lambda); break;
        case Kind::suzuki: p = suzuki(2 * k, lambda); break;
        case Kind::cpf1_symp: p = cpf1("symp-ext", lambda, mode).product; break;
        case Kind::cpf1_sym: p = cpf1("sym", lambda, mode).product; break;
        case Kind::cpf1_com: p = cpf1("com", lambda, mode).product; break;
        case Kind::cpf2_symp: p = cpf2_symplectic(k, lambda, mode).product; break;
        case Kind::cpf2_com: p = cpf2_composite(lambda, mode).product; break;
        case Kind::cpf4_symp: p = cpf4_symplectic(lambda, mode).product; break;
        case Kind::cpf2k_pert: p = cpf2k_perturbed(2 * k, kcorr, lambda, mode).product; break;
        case Kind::cpf2k_nonpert: p = cpf2k_nonperturbed(2 * k, lambda, mode).product; break;
        case Kind::ypf: p = yoshida(weights, lambda); break;
        case Kind::cypf: p = corrected_yoshida(weights, k, lambda).product; break;
        case Kind::ypf_symp: p = yoshida_symplectic(weights, k, constant, lambda, mode).product; break;
    }
    p.tag = text;
    return p;
}

HamiltonianSpec build_model(const ModelChoice& m, double alpha) {
    auto require_unit = [&](const std::string& what) {
        if (alpha != 1.0) throw ConfigError(what + " is non-perturbed; alpha must be 1");
    };
    if (m.model == "heisenberg") {
        if (!m.regime.empty() && m.regime != "nonperturbed") throw ConfigError("heisenberg has no regime '" + m.regime + "'");
        require_unit("heisenberg");
        return build_heisenberg(m.n);
    }
    if (m.model == "tfim") {
        if (m.regime.empty() || m.regime == "nonperturbed") {
            require_unit("tfim nonperturbed");
            return build_tfim(m.n, 1.0, 1.0, TfimRegime::nonperturbed);
        }
        if (m.regime == "weak-coupling") return build_tfim(m.n, alpha, 1.0, TfimRegime::weak_coupling);
        throw ConfigError("tfim has no regime '" + m.regime + "'");
    }
    if (m.model == "hubbard") {
        if (m.regime.empty() || m.regime == "intermediate") {
            require_unit("hubbard intermediate");
            return build_hubbard_spinless(m.n, 1.0, 1.0, HubbardRegime::intermediate);
        }
        if (m.regime == "weak-coupling") return build_hubbard_spinless(m.n, 1.0, alpha, HubbardRegime::weak_coupling);
        if (m.regime == "weak-hopping") return build_hubbard_spinless(m.n, alpha, 1.0, HubbardRegime::weak_hopping);
        throw ConfigError("hubbard has no regime '" + m.regime + "'");
    }
    if (m.model == "random") {
        if (m.n < 1 || m.n > max_sites) throw ConfigError("random model needs 1 <= n <= 12");
        HamiltonianSpec s;
        s.n = m.n;
        s.alpha = alpha;
        s.model_tag = "random";
        return s;
    }
    throw ConfigError("unknown model '" + m.model + "'");
}

std::string model_tag(const ModelChoice& m) {
    if (m.model == "random") return "random";
    double a = 1.0;
    if (m.regime == "weak-coupling" || m.regime == "weak-hopping") a = 0.5;
    return build_model(m, a).model_tag;
}

namespace {

template <class Real>
Partition<Real> partition_for(const HamiltonianSpec& spec, std::uint64_t seed) {
    if (spec.model_tag == "random") {
        const auto p = random_partition(std::size_t(1) << spec.n, seed, spec.alpha);
        return Partition<Real>{p.A.template cast<Real>(), p.B.template cast<Real>(), spec.alpha};
    }
    return make_partition<Real>(spec);
}

qcomplex minus_i(const quad& x) { return qcomplex(quad(0), -x); }

template <class Real>
double total_error_impl(const Partition<Real>& p, const FormulaSelector& f, double t, std::uint64_t r) {
    if (t == 0) return 0.0;
    const quad tau = quad(t) / quad(r);
    const ExpProduct s = trotterize(f.build(minus_i(tau)), r);
    const BasicOperator<Real> approx = evaluate(s, p);
    const BasicOperator<Real> exact = expm(p.full(), to_complex<Real>(minus_i(quad(t))));
    return spectral_norm(exact - approx);
}

template <class Real>
double per_step_impl(const Partition<Real>& p, const FormulaSelector& f, const quad& tau, std::uint64_t r) {
    const BasicOperator<Real> approx = evaluate(f.build(minus_i(tau)), p);
    const BasicOperator<Real> exact = expm(p.full(), to_complex<Real>(minus_i(tau)));
    return static_cast<double>(r) * spectral_norm(exact - approx);
}

void check_size(const HamiltonianSpec& spec) {
    if (spec.n > 10) throw ResourceError("exact reference limited to n <= 10");
}

}  // namespace

double total_error(const HamiltonianSpec& spec, const FormulaSelector& f, double t, std::uint64_t r, Precision prec) {
    check_size(spec);
    if (r < 1) throw ConfigError("r must be >= 1");
    if (prec == Precision::fp128) return total_error_impl(partition_for<quad>(spec, 1), f, t, r);
    return total_error_impl(partition_for<double>(spec, 1), f, t, r);
}

double per_step_triangle_estimate(const HamiltonianSpec& spec, const FormulaSelector& f, double tau, std::uint64_t r,
                                  Precision prec) {
    check_size(spec);
    if (prec == Precision::fp128) return per_step_impl(partition_for<quad>(spec, 1), f, quad(tau), r);
    return per_step_impl(partition_for<double>(spec, 1), f, quad(tau), r);
}

std::uint64_t trotter_exp_count(const FormulaSelector& f, double tau, std::uint64_t r) {
    return trotterize(f.build(minus_i(quad(tau))), r).exp_count();
}

namespace detail {

// Used by the sweep engine: errors with tau = t/r formed in quad.
double sweep_point_error(const HamiltonianSpec& spec, std::uint64_t seed, const FormulaSelector& f, double t,
                         std::uint64_t r, ErrorMode mode, Precision prec) {
    check_size(spec);
    if (mode == ErrorMode::total) {
        if (prec == Precision::fp128) return total_error_impl(partition_for<quad>(spec, seed), f, t, r);
        return total_error_impl(partition_for<double>(spec, seed), f, t, r);
    }
    const quad tau = quad(t) / quad(r);
    if (prec == Precision::fp128) return per_step_impl(partition_for<quad>(spec, seed), f, tau, r);
    return per_step_impl(partition_for<double>(spec, seed), f, tau, r);
}

}  // namespace detail

SweepConfig SweepConfig::parse(const std::string& text) {
    SweepConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto list = [&] {
            std::vector<std::string> out;
            for (const auto& x : split(val, ','))
                if (!trim(x).empty()) out.push_back(trim(x));
            return out;
        };
        if (key == "model") c.model.model = val;
        else if (key == "regime") c.model.regime = val;
        else if (key == "n") c.model.n = parse_int(val, key);
        else if (key == "seed") c.model.seed = static_cast<std::uint64_t>(parse_int(val, key));
        else if (key == "formula" || key == "formulas") c.formulas = list();
        else if (key == "alpha" || key == "alphas") {
            c.alphas.clear();
            for (const auto& x : list()) c.alphas.push_back(parse_double(x, key));
        } else if (key == "t_min") c.t_min = parse_double(val, key);
        else if (key == "t_max") c.t_max = parse_double(val, key);
        else if (key == "t_points") c.t_points = parse_int(val, key);
        else if (key == "t_spacing") {
            if (val != "log" && val != "linear") throw ConfigError("t_spacing must be log or linear");
            c.t_log = val == "log";
        } else if (key == "r") c.r = static_cast<std::uint64_t>(parse_int(val, key));
        else if (key == "error_mode") {
            if (val == "total") c.error_mode = ErrorMode::total;
            else if (val == "per-step") c.error_mode = ErrorMode::per_step;
            else throw ConfigError("error_mode must be total or per-step");
        } else if (key == "precision") c.precision = parse_precision(val);
        else if (key == "output") c.output = val;
        else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

void SweepConfig::validate() const {
    if (formulas.empty()) throw ConfigError("config needs at least one formula");
    if (alphas.empty()) throw ConfigError("config needs at least one alpha");
    for (double a : alphas)
        if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("alpha must be finite and nonnegative");
    if (t_points < 1) throw ConfigError("t grid is empty (t_points < 1)");
    if (!(t_min > 0) || !(t_max >= t_min) || !std::isfinite(t_max))
        throw ConfigError("t grid must be positive and ascending");
    if (t_points > 1 && t_max == t_min) throw ConfigError("t grid must be ascending");
    if (r < 1) throw ConfigError("r must be >= 1");
    if (model.n < 1) throw ConfigError("n must be positive");
}

std::vector<double> SweepConfig::t_grid() const {
    validate();
    std::vector<double> g;
    if (t_points == 1) return {t_min};
    for (int i = 0; i < t_points; ++i) {
        const double u = static_cast<double>(i) / (t_points - 1);
        g.push_back(t_log ? t_min * std::pow(t_max / t_min, u) : t_min + (t_max - t_min) * u);
    }
    g.back() = t_max;
    return g;
}

}  // namespace cpf
