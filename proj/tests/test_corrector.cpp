#include <doctest.h>

#include "support.hpp"

using namespace cpf;
using namespace cpf::test;

namespace {

const Partition<quad>& heis4() {
    static const auto p = make_partition<quad>(build_heisenberg(4));
    return p;
}

YoshidaWeights yoshida6() { return YoshidaWeights::load(CPF_DATA_DIR "/yoshida6_a.txt"); }

double reversal_defect(const Builder& b, const Partition<double>& p, double lam) {
    const auto fwd = evaluate(b(qc(lam)), p);
    const auto bwd = evaluate(b(qc(-lam)), p);
    return spectral_norm(multiply(fwd, bwd) - DenseOperator::identity(p.dim()));
}

}  // namespace

TEST_CASE("C(k) coefficients") {
    const auto c1 = corrector_Ck(1);
    REQUIRE(c1.terms().size() == 1);
    CHECK(c1.terms()[0].rational == Rational(-1, 24));
    CHECK(c1.terms()[0].lambda_power == 2);
    CHECK(c1.terms()[0].alpha_power == 1);
    CHECK(c1.terms()[0].word == "AB");
    const auto c2 = corrector_Ck(2);
    REQUIRE(c2.terms().size() == 2);
    CHECK(c2.terms()[1].rational == Rational(7, 5760));
    CHECK(c2.terms()[1].lambda_power == 4);
    CHECK(c2.terms()[1].word == "AAAB");
    for (int k = 1; k <= 5; ++k) CHECK(corrector_Ck(k).well_formed());
}

TEST_CASE("C(k) matrix matches explicit nested commutators") {
    const auto p = make_partition<double>(build_tfim(2, 0.3, 1.0, TfimRegime::weak_coupling));
    const double lam = 0.4;
    const auto got = corrector_matrix(corrector_Ck(3).bind(qc(lam)), p);
    DenseOperator want(4);
    DenseOperator ad = p.B;
    ad *= p.alpha;
    const double coeffs[] = {-1.0 / 24, 7.0 / 5760, -31.0 / 967680};
    for (int j = 1; j <= 3; ++j) {
        const DenseOperator term = j == 1 ? commutator(p.A, ad) : commutator(p.A, commutator(p.A, ad));
        ad = term;
        want.axpy(std::complex<double>(coeffs[j - 1] * std::pow(lam, 2 * j), 0), ad);
    }
    CHECK(spectral_norm(got - want) < 1e-15);
}

TEST_CASE("word evaluation") {
    const auto p = make_partition<double>(build_heisenberg(4));
    WordCache<double> wc(p);
    CHECK(spectral_norm(wc.get("BBA") - commutator(p.B, commutator(p.B, p.A))) < 1e-12);
    CHECK(spectral_norm(wc.get("AAB") - adjoint_power(p.A, p.B, 2)) < 1e-12);
    CHECK(ad_word('A', 3, 'B') == "AAAB");
    CHECK(valid_word("BBA"));
    CHECK_FALSE(valid_word(""));
    CHECK_FALSE(valid_word("AXB"));
}

TEST_CASE("CPF4 constants") {
    const auto k = cpf4_constants();
    CHECK(double(k.s) == doctest::Approx(0.4144907717943757).epsilon(1e-15));
    // frozen regression value
    CHECK(double(k.c) == doctest::Approx(-2.5953090500659786e-4).epsilon(1e-13));
    CHECK(double(cpf4_constant_as_printed()) == doctest::Approx(-4.2867e-4).epsilon(1e-4));
    const quad s = k.s;
    const quad want = quad(7) / 5760 * (4 * pow(s, 5) + pow(1 - 4 * s, 5)) +
                      quad(1) / 72 * s * (1 - 2 * s) * (1 - 3 * s) * (1 - 4 * s) * (1 - 5 * s);
    CHECK(double(abs(k.c - want)) < 1e-33);
}

TEST_CASE("leading kernel coefficients recovered from residual fits") {
    const auto pf2_est = estimate_leading_coefficient([](const qcomplex& l) { return pf2(l); }, 1, 3);
    CHECK(pf2_est.mean == doctest::Approx(-1.0 / 24).epsilon(1e-10));
    const auto pf4_est = estimate_leading_coefficient([](const qcomplex& l) { return suzuki(4, l); }, 2, 3);
    const double c = double(cpf4_constants().c);
    CHECK(std::abs(pf4_est.mean - c) <= 1e-6 * std::abs(c));
    CHECK(std::abs(pf4_est.mean - double(cpf4_constant_as_printed())) > 1e-5);
    // C(k)-corrected PF2 cancels the first k coefficients; the next one is B_{2k+2}(1/2)/(2k+2)!
    const auto p = random_partition(8, 3);
    for (int kk = 1; kk <= 3; ++kk) {
        const auto fit = fit_first_order_kernel([kk](const qcomplex& l) { return cpf2_symplectic(kk, l).product; },
                                                p.A, p.B);
        for (int j = 1; j <= kk; ++j) CHECK(std::abs(fit.r[2 * j]) < 1e-10);
        const double next = to_double(bernoulli_half(2 * kk + 2) / factorial(2 * kk + 2));
        CHECK(fit.r[2 * kk + 2] == doctest::Approx(next).epsilon(1e-8));
    }
    KernelFitOptions strict;
    strict.max_condition = 10;
    CHECK_THROWS_AS(fit_first_order_kernel([](const qcomplex& l) { return pf2(l); }, p.A, p.B, strict),
                    EstimationError);
}

TEST_CASE("table 2 entries") {
    for (const auto& name : table2_names()) {
        const auto e = table2_corrector(name, 2);
        CHECK(e.symp.well_formed());
        CHECK(e.sym.well_formed());
    }
    const auto sym = table2_corrector("pf1-sym");
    CHECK(sym.tag == SymmetryTag::symmetric);
    CHECK(table2_corrector("pf2-com").tag == SymmetryTag::composite);
    CHECK_THROWS_AS(table2_corrector("pf3-symp"), ConfigError);
    for (const char* v : {"symp-basic", "symp-ext", "sym", "com"}) CHECK(cpf1(v, qc(0.1)).wraps_consistent());
    CHECK(cpf2_composite(qc(0.1)).wraps_consistent());
    CHECK(cpf4_symplectic(qc(0.1)).wraps_consistent());
}

TEST_CASE("basic PF1 corrector maps PF1 to the B-first PF2") {
    const auto p = make_partition<double>(build_heisenberg(4));
    for (double lam : {0.01, 0.1, 0.5}) {
        const auto lhs = evaluate(cpf1("symp-basic", qc(0.0, -lam)).product, p);
        const auto rhs = evaluate(pf2(qc(0.0, -lam), Generator::B), p);
        CHECK(spectral_norm(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("time reversal of symmetric corrected formulas") {
    const auto p = make_partition<double>(build_heisenberg(4));
    const std::vector<Builder> builders = {
        [](const qcomplex& l) { return cpf2_symplectic(1, l).product; },
        [](const qcomplex& l) { return cpf2_symplectic(3, l).product; },
        [](const qcomplex& l) { return cpf2_composite(l).product; },
        [](const qcomplex& l) { return cpf4_symplectic(l).product; },
        [](const qcomplex& l) { return cpf2k_perturbed(4, 2, l).product; },
        [](const qcomplex& l) { return cpf2k_nonperturbed(4, l).product; },
        [](const qcomplex& l) { return cpf2k_nonperturbed(6, l).product; }};
    for (const auto& b : builders) CHECK(reversal_defect(b, p, 0.05) < 1e-12);
}

TEST_CASE("non-perturbed recursion parameter") {
    CHECK(double(nonpert_a(2)) == doctest::Approx(1 / (4 - std::pow(4.0, 0.2))).epsilon(1e-15));
    CHECK(double(nonpert_a(2)) == doctest::Approx(0.3730658277332728).epsilon(1e-14));
}

TEST_CASE("corrected formula orders on heisenberg n=4") {
    const auto& p = heis4();
    CHECK(tau_slope([](const qcomplex& l) { return cpf1("symp-ext", l).product; }, p) ==
          doctest::Approx(3).epsilon(0.05));
    CHECK(tau_slope([](const qcomplex& l) { return cpf1("sym", l).product; }, p) == doctest::Approx(3).epsilon(0.05));
    CHECK(tau_slope([](const qcomplex& l) { return cpf1("com", l).product; }, p) == doctest::Approx(4).epsilon(0.05));
    CHECK(tau_slope([](const qcomplex& l) { return cpf2_composite(l).product; }, p) ==
          doctest::Approx(5).epsilon(0.05));
    CHECK(tau_slope([](const qcomplex& l) { return cpf2k_nonperturbed(2, l).product; }, p) ==
          doctest::Approx(5).epsilon(0.05));
    CHECK(tau_slope([](const qcomplex& l) { return cpf2k_nonperturbed(4, l).product; }, p) ==
          doctest::Approx(7).epsilon(0.05));
}

TEST_CASE("perturbative alpha scaling") {
    CHECK(alpha_slope([](const qcomplex& l) { return pf2(l); }, tfim_weak) == doctest::Approx(1).epsilon(0.1));
    CHECK(alpha_slope([](const qcomplex& l) { return cpf2_symplectic(1, l).product; }, tfim_weak) ==
          doctest::Approx(2).epsilon(0.1));
    const auto pts = alpha_errors([](const qcomplex& l) { return cpf2_symplectic(1, l).product; }, tfim_weak,
                                  {1e-2, 1e-3});
    CHECK(pts[0].second / pts[1].second == doctest::Approx(100).epsilon(0.2));
    CHECK(alpha_slope([](const qcomplex& l) { return cpf2k_perturbed(4, 2, l).product; }, hubbard_weak_hopping) ==
          doctest::Approx(2).epsilon(0.1));
    const auto hp = make_partition<quad>(hubbard_weak_hopping(1e-3));
    CHECK(tau_slope([](const qcomplex& l) { return cpf2k_perturbed(4, 2, l).product; }, hp, 1e-2, 1e-1) ==
          doctest::Approx(5).epsilon(0.05));
}

TEST_CASE("cpf4 symplectic") {
    CHECK(alpha_slope([](const qcomplex& l) { return cpf4_symplectic(l).product; }, tfim_weak) ==
          doctest::Approx(2).epsilon(0.1));
    const auto tp = make_partition<quad>(tfim_weak(1e-3));
    CHECK(tau_slope([](const qcomplex& l) { return cpf4_symplectic(l).product; }, tp, 1e-2, 5e-2) ==
          doctest::Approx(5).epsilon(0.06));
    auto zero = make_partition<double>(tfim_weak(1e-3));
    zero.alpha = 0;
    const qcomplex l = qc(0.0, -0.05);
    CHECK(spectral_norm(evaluate(cpf4_symplectic(l).product, zero) - evaluate(suzuki(4, l), zero)) < 1e-14);
    // telescoping: two extra exponentials regardless of r
    for (std::uint64_t r : {1, 7, 10000})
        CHECK(trotterize(cpf4_symplectic(l).product, r).exp_count() == trotterize(suzuki(4, l), r).exp_count() + 2);
}

TEST_CASE("compiled correctors keep the alpha scaling") {
    CHECK(alpha_slope([](const qcomplex& l) { return cpf2_symplectic(2, l, CorrectorMode::compiled).product; },
                      tfim_weak) == doctest::Approx(2).epsilon(0.1));
    CHECK(alpha_slope([](const qcomplex& l) { return cpf4_symplectic(l, CorrectorMode::compiled).product; },
                      hubbard_weak_hopping) == doctest::Approx(2).epsilon(0.1));
    const auto c = cpf2_symplectic(2, qc(0.1), CorrectorMode::compiled).product;
    CHECK_FALSE(c.has_corrector_steps());
}

TEST_CASE("structured system with vanishing ad_B^2(A)") {
    // B nilpotent, A block upper triangular: [B,[A,B]] = 2BAB = 0.
    QuadOperator a = random_hermitian(4, 5);
    for (std::size_t i = 2; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) a.set(i, j, qc(0.0));
    QuadOperator b(4);
    b.set(0, 2, qc(1.0));
    b.set(1, 3, qc(0.5));
    const Partition<quad> p{a, b, 1.0};
    REQUIRE(spectral_norm(commutator(b, commutator(a, b))) == 0.0);
    REQUIRE(spectral_norm(commutator(a, b)) > 0.1);
    CHECK(tau_slope([](const qcomplex& l) { return pf2(l); }, p, 1e-2, 1e-1) == doctest::Approx(3).epsilon(0.05));
    CHECK(tau_slope([](const qcomplex& l) { return cpf2_symplectic(1, l).product; }, p, 1e-2, 1e-1) ==
          doctest::Approx(5).epsilon(0.05));
}

TEST_CASE("corrected yoshida") {
    const auto w = yoshida6();
    const auto cf = corrected_yoshida(w, 3, qc(0.0, -0.01));
    CHECK(cf.product.count(Generator::corrector) == std::uint64_t(2 * w.m + 2));
    auto zero = make_partition<double>(hubbard_weak_hopping(1e-3));
    zero.alpha = 0;
    CHECK(spectral_norm(evaluate(cf.product, zero) - evaluate(yoshida(w, qc(0.0, -0.01)), zero)) < 1e-14);
    const Builder cy = [&](const qcomplex& l) { return corrected_yoshida(w, 3, l).product; };
    CHECK(alpha_slope(cy, hubbard_weak_hopping) == doctest::Approx(2).epsilon(0.1));
    CHECK(alpha_slope(cy, tfim_weak) == doctest::Approx(2).epsilon(0.1));
    const auto plain = alpha_errors([&](const qcomplex& l) { return yoshida(w, l); }, hubbard_weak_hopping, {1e-4});
    const auto corr = alpha_errors(cy, hubbard_weak_hopping, {1e-4});
    CHECK(corr[0].second * 10 < plain[0].second);
}

TEST_CASE("yoshida with an estimated symplectic corrector") {
    const auto w = yoshida6();
    const auto est = estimate_leading_coefficient([&](const qcomplex& l) { return yoshida(w, l); }, 3, 3);
    CHECK(est.spread < 1e-6 * std::abs(est.mean));
    const Builder b = [&](const qcomplex& l) { return yoshida_symplectic(w, 3, quad(est.mean), l).product; };
    CHECK(alpha_slope(b, hubbard_weak_hopping) == doctest::Approx(2).epsilon(0.1));
    CHECK(alpha_slope(b, tfim_weak) == doctest::Approx(2).epsilon(0.1));
}

TEST_CASE("kernel projections on a few seeds") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto p = random_partition(8, seed, 1.0);
        std::vector<double> ls;
        std::vector<QuadOperator> ms;
        for (double l : log_points(0.01, 0.03, 12)) {
            ls.push_back(l);
            ms.push_back(kernel_residual(cpf1("symp-ext", qc(l)).product, p, qc(l)));
        }
        const auto x = fit_matrix_series(ls, ms, 3, 7);
        WordCache<quad> wc(p);
        QuadOperator want = wc.get("BBA");
        want *= quad(1) / 24;
        CHECK(spectral_norm(x[0] - want) <= 1e-6 * spectral_norm(want));
    }
}
