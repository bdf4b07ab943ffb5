#include "cpf/lattice.hpp"

#include <bit>
#include <cstdint>
#include <string>

namespace cpf {

OperatorTerm OperatorTerm::pauli(double c, std::vector<std::pair<int, char>> f) {
    OperatorTerm t;
    t.kind = Kind::pauli;
    t.coefficient = c;
    t.factors = std::move(f);
    return t;
}

OperatorTerm OperatorTerm::hop(double c, int from, int to) {
    OperatorTerm t;
    t.kind = Kind::hop;
    t.coefficient = c;
    t.hop_from = from;
    t.hop_to = to;
    return t;
}

HamiltonianSpec build_heisenberg(int n) {
    if (n < 2 || n > max_sites) throw PartitionError("heisenberg: n must lie in [2, 12], got " + std::to_string(n));
    if (n % 2 != 0) throw PartitionError("heisenberg: even/odd bond split needs even n, got " + std::to_string(n));
    HamiltonianSpec s;
    s.n = n;
    s.alpha = 1.0;
    s.model_tag = "heisenberg";
    for (int j = 0; j < n; ++j) {
        const int k = (j + 1) % n;
        auto& part = (j % 2 == 0) ? s.terms_A : s.terms_B;
        for (char p : {'X', 'Y', 'Z'}) part.push_back(OperatorTerm::pauli(1.0, {{j, p}, {k, p}}));
    }
    return s;
}

HamiltonianSpec build_tfim(int n, double J, double h, TfimRegime regime) {
    if (n < 2) throw PartitionError("tfim: n must be at least 2");
    HamiltonianSpec s;
    s.n = n;
    if (regime == TfimRegime::nonperturbed) {
        s.model_tag = "tfim";
        s.alpha = 1.0;
        for (int j = 0; j < n; ++j) s.terms_A.push_back(OperatorTerm::pauli(h, {{j, 'Z'}}));
        if (J != 0.0)
            for (int j = 0; j < n; ++j) s.terms_B.push_back(OperatorTerm::pauli(J, {{j, 'X'}, {(j + 1) % n, 'X'}}));
    } else {
        if (J < 0.0) throw PartitionError("tfim weak coupling: alpha = J must be nonnegative");
        s.model_tag = "tfim-weak-coupling";
        s.alpha = J;
        for (int j = 0; j < n; ++j) s.terms_A.push_back(OperatorTerm::pauli(h, {{j, 'Z'}}));
        for (int j = 0; j < n; ++j) s.terms_B.push_back(OperatorTerm::pauli(1.0, {{j, 'X'}, {(j + 1) % n, 'X'}}));
    }
    return s;
}

HamiltonianSpec build_hubbard_spinless(int n, double t_hop, double U_int, HubbardRegime regime) {
    if (n < 2) throw PartitionError("hubbard: n must be at least 2");
    if (!(t_hop > 0.0) || !(U_int > 0.0)) throw PartitionError("hubbard: couplings must be positive");
    std::vector<OperatorTerm> kinetic, potential;
    auto build = [&](double t, double u) {
        kinetic.clear();
        potential.clear();
        for (int j = 0; j < n; ++j) kinetic.push_back(OperatorTerm::hop(-t, j, (j + 1) % n));
        for (int j = 0; j < n; ++j) potential.push_back(OperatorTerm::pauli(u, {{j, 'N'}, {(j + 1) % n, 'N'}}));
    };
    HamiltonianSpec s;
    s.n = n;
    switch (regime) {
        case HubbardRegime::intermediate:
            build(t_hop, U_int);
            s.model_tag = "hubbard";
            s.terms_A = potential;
            s.terms_B = kinetic;
            s.alpha = 1.0;
            break;
        case HubbardRegime::weak_coupling:
            build(1.0, 1.0);
            s.model_tag = "hubbard-weak-coupling";
            s.terms_A = kinetic;
            s.terms_B = potential;
            s.alpha = U_int;
            break;
        case HubbardRegime::weak_hopping:
            build(1.0, 1.0);
            s.model_tag = "hubbard-weak-hopping";
            s.terms_A = potential;
            s.terms_B = kinetic;
            s.alpha = t_hop;
            break;
    }
    return s;
}

namespace {

inline bool occupied(std::uint64_t state, int n, int site) { return (state >> (n - 1 - site)) & 1u; }
inline std::uint64_t site_mask(int n, int site) { return std::uint64_t(1) << (n - 1 - site); }

// Parity of occupied modes strictly before `site` (Jordan-Wigner string).
inline int parity_before(std::uint64_t state, int n, int site) {
    if (site == 0) return 0;
    const std::uint64_t before = state >> (n - site);
    return std::popcount(before) & 1;
}

// c^dag_i c_j |state>; returns false when annihilated.
bool hop_apply(std::uint64_t state, int n, int i, int j, std::uint64_t& out, int& sign) {
    if (!occupied(state, n, j)) return false;
    int s = parity_before(state, n, j);
    std::uint64_t mid = state & ~site_mask(n, j);
    if (occupied(mid, n, i)) return false;
    s ^= parity_before(mid, n, i);
    out = mid | site_mask(n, i);
    sign = s ? -1 : 1;
    return true;
}

}  // namespace

template <class Real>
void accumulate_term(BasicOperator<Real>& out, int n, const OperatorTerm& term, double scale) {
    const std::uint64_t dim = std::uint64_t(1) << n;
    const Real c = Real(term.coefficient) * Real(scale);
    if (term.kind == OperatorTerm::Kind::hop) {
        const int a = term.hop_from, b = term.hop_to;
        if (a < 0 || a >= n || b < 0 || b >= n || a == b) throw PartitionError("hop: invalid sites");
        for (std::uint64_t s = 0; s < dim; ++s) {
            std::uint64_t t;
            int sign;
            if (hop_apply(s, n, a, b, t, sign)) out.add_to(t, s, complex_t<Real>(c * Real(sign), Real(0)));
            if (hop_apply(s, n, b, a, t, sign)) out.add_to(t, s, complex_t<Real>(c * Real(sign), Real(0)));
        }
        return;
    }
    for (const auto& [site, label] : term.factors)
        if (site < 0 || site >= n) throw PartitionError("term: site index out of range");
    for (std::uint64_t s = 0; s < dim; ++s) {
        std::uint64_t t = s;
        // amplitude as i^phase * real factor
        int phase = 0;
        bool zero = false;
        for (const auto& [site, label] : term.factors) {
            const bool occ = occupied(t, n, site);
            switch (label) {
                case 'I': break;
                case 'X': t ^= site_mask(n, site); break;
                case 'Y':
                    // Y|0> = i|1>, Y|1> = -i|0>
                    phase += occ ? 3 : 1;
                    t ^= site_mask(n, site);
                    break;
                case 'Z': if (occ) phase += 2; break;
                case 'N': if (!occ) zero = true; break;
                default: throw PartitionError(std::string("term: unknown label ") + label);
            }
            if (zero) break;
        }
        if (zero) continue;
        phase &= 3;
        const Real one(1);
        const complex_t<Real> amp = phase == 0   ? complex_t<Real>(c * one, Real(0))
                                    : phase == 1 ? complex_t<Real>(Real(0), c)
                                    : phase == 2 ? complex_t<Real>(-c, Real(0))
                                                 : complex_t<Real>(Real(0), -c);
        out.add_to(t, s, amp);
    }
}

template <class Real>
BasicOperator<Real> assemble_terms(int n, const std::vector<OperatorTerm>& terms) {
    if (n > max_sites) throw ResourceError("assemble: n = " + std::to_string(n) + " exceeds 12 sites");
    if (n < 1) throw PartitionError("assemble: n must be positive");
    BasicOperator<Real> out(std::size_t(1) << n);
    for (const auto& t : terms) accumulate_term(out, n, t);
    return out;
}

template <class Real>
BasicOperator<Real> assemble(const HamiltonianSpec& spec, Which which) {
    switch (which) {
        case Which::A: return assemble_terms<Real>(spec.n, spec.terms_A);
        case Which::B: return assemble_terms<Real>(spec.n, spec.terms_B);
        case Which::full: {
            BasicOperator<Real> h = assemble_terms<Real>(spec.n, spec.terms_A);
            for (const auto& t : spec.terms_B) accumulate_term(h, spec.n, t, spec.alpha);
            return h;
        }
    }
    return {};
}

template void accumulate_term<double>(DenseOperator&, int, const OperatorTerm&, double);
template void accumulate_term<quad>(QuadOperator&, int, const OperatorTerm&, double);
template DenseOperator assemble_terms<double>(int, const std::vector<OperatorTerm>&);
template QuadOperator assemble_terms<quad>(int, const std::vector<OperatorTerm>&);
template DenseOperator assemble<double>(const HamiltonianSpec&, Which);
template QuadOperator assemble<quad>(const HamiltonianSpec&, Which);

}  // namespace cpf
