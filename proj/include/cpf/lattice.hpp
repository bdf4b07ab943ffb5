#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpf/operator.hpp"

namespace cpf {

// Single-site labels: I, X, Y, Z, and N = |1><1| (occupation of a fermion mode).
struct OperatorTerm {
    enum class Kind { pauli, hop };
    Kind kind = Kind::pauli;
    double coefficient = 1.0;
    std::vector<std::pair<int, char>> factors;  // pauli: (site, label)
    int hop_from = 0;                           // hop: c^dag_from c_to + h.c.
    int hop_to = 0;

    static OperatorTerm pauli(double c, std::vector<std::pair<int, char>> f);
    static OperatorTerm hop(double c, int from, int to);
};

enum class Which { A, B, full };

struct HamiltonianSpec {
    int n = 0;
    std::vector<OperatorTerm> terms_A;
    std::vector<OperatorTerm> terms_B;
    double alpha = 1.0;
    std::string model_tag;
};

constexpr int max_sites = 12;

HamiltonianSpec build_heisenberg(int n);

enum class TfimRegime { nonperturbed, weak_coupling };
HamiltonianSpec build_tfim(int n, double J, double h, TfimRegime regime);

enum class HubbardRegime { intermediate, weak_coupling, weak_hopping };
HamiltonianSpec build_hubbard_spinless(int n, double t_hop, double U_int, HubbardRegime regime);

// Applies one term to the computational basis (site 0 most significant).
template <class Real>
void accumulate_term(BasicOperator<Real>& out, int n, const OperatorTerm& term, double scale = 1.0);

template <class Real>
BasicOperator<Real> assemble_terms(int n, const std::vector<OperatorTerm>& terms);

template <class Real>
BasicOperator<Real> assemble(const HamiltonianSpec& spec, Which which);

// Partition pair with the perturbation parameter; B is stored without alpha.
template <class Real>
struct Partition {
    BasicOperator<Real> A;
    BasicOperator<Real> B;
    double alpha = 1.0;

    std::size_t dim() const { return A.dim(); }
    BasicOperator<Real> full() const {
        BasicOperator<Real> h = A;
        h.axpy(complex_t<Real>(Real(alpha), Real(0)), B);
        return h;
    }
};

template <class Real>
Partition<Real> make_partition(const HamiltonianSpec& spec) {
    return Partition<Real>{assemble<Real>(spec, Which::A), assemble<Real>(spec, Which::B), spec.alpha};
}

}  // namespace cpf
