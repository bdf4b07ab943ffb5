#include <doctest.h>

#include <algorithm>

#include <Eigen/Dense>

#include "cpf/lattice.hpp"

using namespace cpf;
using cd = std::complex<double>;

namespace {

DenseOperator single(char c) {
    DenseOperator p(2);
    switch (c) {
        case 'I': p.set(0, 0, 1); p.set(1, 1, 1); break;
        case 'X': p.set(0, 1, 1); p.set(1, 0, 1); break;
        case 'Y': p.set(0, 1, cd(0, -1)); p.set(1, 0, cd(0, 1)); break;
        case 'Z': p.set(0, 0, 1); p.set(1, 1, -1); break;
        case 'a': p.set(0, 1, 1); break;  // |0><1|: annihilates an occupied mode
    }
    return p;
}

// Tensor product with site 0 most significant; unspecified sites get fill.
DenseOperator chain(int n, const std::vector<std::pair<int, char>>& ops, char fill = 'I') {
    DenseOperator m = DenseOperator::identity(1);
    for (int s = 0; s < n; ++s) {
        char c = fill;
        for (auto [site, label] : ops)
            if (site == s) c = label;
        m = kron(m, single(c));
    }
    return m;
}

DenseOperator annihilate(int n, int j) {
    std::vector<std::pair<int, char>> ops;
    for (int k = 0; k < j; ++k) ops.emplace_back(k, 'Z');
    ops.emplace_back(j, 'a');
    return chain(n, ops);
}

DenseOperator kinetic_oracle(int n, double t) {
    DenseOperator k(std::size_t(1) << n);
    for (int j = 0; j < n; ++j) {
        const auto cj = annihilate(n, j);
        const auto cn = annihilate(n, (j + 1) % n);
        k.axpy(cd(-t, 0), multiply(cj.adjoint(), cn));
        k.axpy(cd(-t, 0), multiply(cn.adjoint(), cj));
    }
    return k;
}

DenseOperator number(int n, int j) { return multiply(annihilate(n, j).adjoint(), annihilate(n, j)); }

double max_commutator(int n, const std::vector<OperatorTerm>& terms) {
    double worst = 0;
    for (std::size_t a = 0; a < terms.size(); ++a)
        for (std::size_t b = a + 1; b < terms.size(); ++b)
            worst = std::max(worst, spectral_norm(commutator(assemble_terms<double>(n, {terms[a]}),
                                                             assemble_terms<double>(n, {terms[b]}))));
    return worst;
}

}  // namespace

TEST_CASE("heisenberg n=2 matches a hand-built matrix") {
    const auto s = build_heisenberg(2);
    DenseOperator bond = chain(2, {{0, 'X'}, {1, 'X'}}) + chain(2, {{0, 'Y'}, {1, 'Y'}}) + chain(2, {{0, 'Z'}, {1, 'Z'}});
    CHECK(spectral_norm(assemble<double>(s, Which::A) - bond) == 0.0);
    CHECK(spectral_norm(assemble<double>(s, Which::B) - bond) == 0.0);
    CHECK(s.alpha == 1.0);
}

TEST_CASE("heisenberg partitions") {
    for (int n : {4, 6}) {
        const auto s = build_heisenberg(n);
        CHECK(max_commutator(n, s.terms_A) == 0.0);
        CHECK(max_commutator(n, s.terms_B) == 0.0);
        const auto a = assemble<double>(s, Which::A);
        const auto b = assemble<double>(s, Which::B);
        CHECK(spectral_norm(a) == doctest::Approx(spectral_norm(b)).epsilon(1e-12));
        CHECK(is_hermitian(assemble<double>(s, Which::full), 1e-14));
    }
    CHECK_THROWS_AS(build_heisenberg(5), PartitionError);
    CHECK_THROWS_AS(build_heisenberg(14), PartitionError);
}

TEST_CASE("tfim n=3 matches a Pauli-sum oracle") {
    const int n = 3;
    const double J = 0.7, h = 1.3;
    const auto s = build_tfim(n, J, h, TfimRegime::nonperturbed);
    DenseOperator field(8), coupling(8);
    for (int j = 0; j < n; ++j) {
        field.axpy(cd(h, 0), chain(n, {{j, 'Z'}}));
        coupling.axpy(cd(J, 0), chain(n, {{j, 'X'}, {(j + 1) % n, 'X'}}));
    }
    CHECK(spectral_norm(assemble<double>(s, Which::A) - field) < 1e-15);
    CHECK(spectral_norm(assemble<double>(s, Which::B) - coupling) < 1e-15);
    CHECK(spectral_norm(assemble<double>(s, Which::full) - (field + coupling)) < 1e-14);
}

TEST_CASE("tfim weak coupling") {
    const auto s = build_tfim(4, 1e-3, 1.0, TfimRegime::weak_coupling);
    CHECK(s.alpha == 1e-3);
    DenseOperator xx(16);
    for (int j = 0; j < 4; ++j) xx += chain(4, {{j, 'X'}, {(j + 1) % 4, 'X'}});
    CHECK(spectral_norm(assemble<double>(s, Which::B) - xx) == 0.0);
    const auto diag = assemble<double>(build_tfim(4, 0.0, 1.0, TfimRegime::weak_coupling), Which::full);
    for (std::size_t i = 0; i < diag.dim(); ++i)
        for (std::size_t j = 0; j < diag.dim(); ++j)
            if (i != j) CHECK(diag(i, j) == cd(0, 0));
    CHECK_THROWS_AS(build_tfim(1, 1, 1, TfimRegime::nonperturbed), PartitionError);
    CHECK_THROWS_AS(build_tfim(-2, 1, 1, TfimRegime::nonperturbed), PartitionError);
}

TEST_CASE("hubbard kinetic term matches explicit Jordan-Wigner fermions") {
    for (int n : {2, 3, 4, 5}) {
        const auto s = build_hubbard_spinless(n, 0.8, 1.0, HubbardRegime::intermediate);
        CHECK(spectral_norm(assemble<double>(s, Which::B) - kinetic_oracle(n, 0.8)) < 1e-14);
        DenseOperator pot(std::size_t(1) << n);
        for (int j = 0; j < n; ++j) pot += multiply(number(n, j), number(n, (j + 1) % n));
        CHECK(spectral_norm(assemble<double>(s, Which::A) - pot) < 1e-14);
    }
}

TEST_CASE("hubbard single-particle spectrum is tight binding") {
    const int n = 4;
    const double t = 0.6;
    const auto k = assemble<double>(build_hubbard_spinless(n, t, 1.0, HubbardRegime::intermediate), Which::B);
    // one-particle basis states have exactly one bit set
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k.dim(); ++i)
        if (__builtin_popcountll(i) == 1) idx.push_back(i);
    Eigen::MatrixXcd sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = k(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    std::vector<double> want;
    for (int q = 0; q < n; ++q) want.push_back(-2 * t * std::cos(2 * M_PI * q / n));
    std::sort(want.begin(), want.end());
    for (int q = 0; q < n; ++q) CHECK(std::abs(es.eigenvalues()(q) - want[q]) < 1e-12);
}

TEST_CASE("hubbard regimes") {
    const auto wc = build_hubbard_spinless(4, 1.0, 1e-3, HubbardRegime::weak_coupling);
    CHECK(wc.alpha == 1e-3);
    CHECK(spectral_norm(assemble<double>(wc, Which::A) - kinetic_oracle(4, 1.0)) < 1e-14);
    const auto wh = build_hubbard_spinless(4, 1e-3, 1.0, HubbardRegime::weak_hopping);
    CHECK(wh.alpha == 1e-3);
    CHECK(spectral_norm(assemble<double>(wh, Which::B) - kinetic_oracle(4, 1.0)) < 1e-14);
    CHECK(wh.model_tag != wc.model_tag);
    CHECK_THROWS_AS(build_hubbard_spinless(4, 0.0, 1.0, HubbardRegime::intermediate), PartitionError);
    CHECK_THROWS_AS(build_hubbard_spinless(4, 1.0, -1.0, HubbardRegime::intermediate), PartitionError);
}

TEST_CASE("commuting partitions are exactly simulatable") {
    const HamiltonianSpec specs[] = {build_heisenberg(4), build_tfim(4, 1, 1, TfimRegime::nonperturbed),
                                     build_hubbard_spinless(4, 1, 1, HubbardRegime::intermediate)};
    const cd z(0, -0.37);
    for (const auto& s : specs) {
        for (Which w : {Which::A, Which::B}) {
            const auto& terms = w == Which::A ? s.terms_A : s.terms_B;
            if (max_commutator(s.n, terms) != 0.0) continue;  // hopping terms overlap
            DenseOperator prod = DenseOperator::identity(16);
            for (const auto& t : terms) prod = multiply(prod, expm(assemble_terms<double>(s.n, {t}), z));
            CHECK(spectral_norm(prod - expm(assemble<double>(s, w), z)) < 1e-12);
        }
    }
}

TEST_CASE("assembly is Hermitian and bounded in size") {
    const HamiltonianSpec specs[] = {build_heisenberg(6), build_tfim(5, 0.3, 1, TfimRegime::nonperturbed),
                                     build_hubbard_spinless(5, 1e-2, 1, HubbardRegime::weak_hopping)};
    for (const auto& s : specs) CHECK(is_hermitian(assemble<double>(s, Which::full), 1e-14));
    HamiltonianSpec big = build_tfim(13, 1, 1, TfimRegime::nonperturbed);
    CHECK_THROWS_AS(assemble<double>(big, Which::A), ResourceError);
}
