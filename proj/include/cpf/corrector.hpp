#pragma once

// Corrector expressions and corrected product formulas. lambda is kept
// symbolic in CommutatorExpr and fixed when a formula is built; alpha stays
// symbolic until evaluation against a Partition.

#include <optional>
#include <string>
#include <vector>

#include "cpf/commutator.hpp"
#include "cpf/product.hpp"

namespace cpf {

// C(k) = alpha sum_{j=1..k} B_{2j}(1/2)/(2j)! lambda^{2j} ad_A^{2j-1}(B)
CommutatorExpr corrector_Ck(int k);

struct Cpf4Constants {
    quad s;
    quad c;
};
// s = 1/(4 - 4^{1/3}); c = (7/5760)(4s^5 + (1-4s)^5) + (1/72) s(1-2s)(1-3s)(1-4s)(1-5s)
Cpf4Constants cpf4_constants();
// Same expression with 1/36 in the second term.
quad cpf4_constant_as_printed();

// Step parameter of the non-perturbed recursion, a_k = 1/(4 - 4^{1/(2k+1)}).
quad nonpert_a(int k);

enum class SymmetryTag { symplectic, symmetric, composite };
std::string to_string(SymmetryTag t);

// Corrector ingredients. For composite entries the symplectic part is the
// outer layer: e^{symp} e^{sym} S e^{sym} e^{-symp}.
struct Table2Entry {
    std::string name;
    std::string base;  // pf1, pf2, pf4
    SymmetryTag tag = SymmetryTag::symplectic;
    CommutatorExpr symp;
    CommutatorExpr sym;
    int k = 1;       // C(k) order, or the degree d of a single-term corrector
    quad c = 0;      // single-term constant
};

// name in {pf1-symp-basic, pf1-symp-ext, pf1-sym, pf1-com, pf2-symp, pf2-com,
// pf2-symp-k, pf4-symp}; k only used by pf2-symp-k.
Table2Entry table2_corrector(const std::string& name, int k = 1);
std::vector<std::string> table2_names();

enum class CorrectorMode { exact, compiled };

struct WrapFactor {
    StepList steps;
    int sign = 1;  // +1 realizes e^{C}, -1 realizes e^{-C}
};

struct CorrectedFormula {
    ExpProduct core;
    std::vector<WrapFactor> left_wrap;   // outermost first
    std::vector<WrapFactor> right_wrap;  // innermost first
    SymmetryTag tag = SymmetryTag::symplectic;
    // Assembled formula. For a symplectic or composite top layer the
    // outermost pair sits in prefix/suffix so trotterize telescopes it.
    ExpProduct product;

    bool wraps_consistent() const;
};

// Builds the wrapped formula from ingredients at a fixed lambda.
CorrectedFormula wrap_formula(const ExpProduct& core, const Table2Entry& entry, const qcomplex& lambda,
                              CorrectorMode mode = CorrectorMode::exact);

// variant: symp-basic, symp-ext, sym, com
CorrectedFormula cpf1(const std::string& variant, const qcomplex& lambda, CorrectorMode mode = CorrectorMode::exact);
CorrectedFormula cpf2_symplectic(int k, const qcomplex& lambda, CorrectorMode mode = CorrectorMode::exact);
CorrectedFormula cpf2_composite(const qcomplex& lambda, CorrectorMode mode = CorrectorMode::exact);
CorrectedFormula cpf4_symplectic(const qcomplex& lambda, CorrectorMode mode = CorrectorMode::exact,
                                 std::optional<quad> c = std::nullopt);
CorrectedFormula cpf2k_perturbed(int order, int k_corr, const qcomplex& lambda,
                                 CorrectorMode mode = CorrectorMode::exact);
CorrectedFormula cpf2k_nonperturbed(int order, const qcomplex& lambda, CorrectorMode mode = CorrectorMode::exact);

// Each S2(w_l lambda) of the Yoshida product wrapped with C(k_corr, w_l lambda);
// neighbouring e^{-C(w)} e^{C(w')} are combined into e^{C(w') - C(w)}, leaving
// 2m+2 corrector exponentials.
CorrectedFormula corrected_yoshida(const YoshidaWeights& weights, int k_corr, const qcomplex& lambda);

// e^C Y(lambda) e^{-C} with C = c lambda^{2d} ad_A^{2d-1}(alpha B).
CorrectedFormula yoshida_symplectic(const YoshidaWeights& weights, int degree, const quad& c,
                                    const qcomplex& lambda, CorrectorMode mode = CorrectorMode::exact);

// c lambda^{2d} ad_A^{2d-1}(alpha B)
CommutatorExpr single_term_corrector(int degree, const quad& c);

}  // namespace cpf
