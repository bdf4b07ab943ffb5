#include "cpf/rational.hpp"

#include <map>
#include <mutex>

#include "cpf/error.hpp"

namespace cpf {

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

quad to_quad(const Rational& r) {
    return static_cast<quad>(boost::multiprecision::numerator(r)) /
           static_cast<quad>(boost::multiprecision::denominator(r));
}

double to_double(const Rational& r) { return static_cast<double>(to_quad(r)); }

Rational factorial(int n) {
    if (n < 0) throw Error("factorial of a negative integer");
    Rational f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

namespace {

Rational binomial(int n, int k) {
    Rational b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

Rational bernoulli_number(int n) {
    if (n < 0) throw Error("bernoulli_number: negative index");
    static std::mutex mu;
    static std::vector<Rational> table{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    // sum_{k=0}^{m} C(m+1, k) B_k = 0
    while (static_cast<int>(table.size()) <= n) {
        const int m = static_cast<int>(table.size());
        Rational s = 0;
        for (int k = 0; k < m; ++k) s += binomial(m + 1, k) * table[k];
        table.push_back(-s / (m + 1));
    }
    return table[n];
}

Rational bernoulli_half(int j) {
    if (j < 0) throw Error("bernoulli_half: negative index");
    if (j % 2 == 1) return 0;
    // B_j(x) = sum_k C(j,k) B_k x^{j-k}
    Rational s = 0;
    Rational half_pow = 1;  // (1/2)^{j-k}, built from k = j downwards
    for (int k = j; k >= 0; --k) {
        s += binomial(j, k) * bernoulli_number(k) * half_pow;
        half_pow /= 2;
    }
    return s;
}

RationalMatrix vandermonde(const RationalVector& nodes) {
    const std::size_t n = nodes.size();
    RationalMatrix v(n, RationalVector(n));
    for (std::size_t l = 0; l < n; ++l) {
        Rational p = 1;
        for (std::size_t i = 0; i < n; ++i) {
            v[i][l] = p;
            p *= nodes[l];
        }
    }
    return v;
}

RationalVector vandermonde_solve(const RationalVector& x, RationalVector b) {
    const std::size_t size = x.size();
    if (size == 0) return b;
    if (b.size() != size) throw DimensionError("vandermonde_solve: rhs length mismatch");
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = i + 1; j < size; ++j)
            if (x[i] == x[j]) throw SingularityError("vandermonde: duplicate node " + to_string(x[i]));
    const std::size_t n = size - 1;
    // Lower-bidiagonal factors L_k(x_k): subdiagonal -x_k.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = n; i > k; --i) b[i] -= x[k] * b[i - 1];
    // D_k then L_k(1)^T.
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t i = k + 1; i <= n; ++i) b[i] /= (x[i] - x[i - k - 1]);
        for (std::size_t i = k; i < n; ++i) b[i] -= b[i + 1];
    }
    return b;
}

RationalMatrix vandermonde_inverse(const RationalVector& nodes) {
    const std::size_t n = nodes.size();
    RationalMatrix inv(n, RationalVector(n));
    for (std::size_t c = 0; c < n; ++c) {
        RationalVector e(n, Rational(0));
        e[c] = 1;
        const RationalVector col = vandermonde_solve(nodes, e);
        for (std::size_t r = 0; r < n; ++r) inv[r][c] = col[r];
    }
    return inv;
}

RationalVector default_nodes(int k) {
    RationalVector a;
    for (int l = 0; l < k; ++l) a.emplace_back(l + 1);
    return a;
}

RationalMatrix compilation_matrix(const RationalVector& nodes) {
    const std::size_t k = nodes.size();
    RationalMatrix a(k, RationalVector(k));
    for (std::size_t l = 0; l < k; ++l) {
        Rational p = nodes[l];
        for (std::size_t j = 0; j < k; ++j) {
            a[j][l] = p;
            p *= nodes[l] * nodes[l];
        }
    }
    return a;
}

namespace {

RationalVector solve_compilation(const RationalVector& a, const RationalVector& rhs) {
    for (const auto& x : a)
        if (x == 0) throw SingularityError("compilation nodes must be nonzero");
    RationalVector sq;
    for (const auto& x : a) sq.push_back(x * x);
    RationalVector y = vandermonde_solve(sq, rhs);
    for (std::size_t l = 0; l < y.size(); ++l) y[l] /= a[l];
    return y;
}

RationalVector nodes_or_default(int k, const std::optional<RationalVector>& nodes) {
    if (!nodes) return default_nodes(k);
    if (static_cast<int>(nodes->size()) != k) throw DimensionError("node override has wrong length");
    return *nodes;
}

}  // namespace

RationalVector solve_vandermonde_b(int k, const std::optional<RationalVector>& nodes) {
    if (k < 1) throw Error("solve_vandermonde_b: k must be positive");
    RationalVector rhs;
    for (int j = 1; j <= k; ++j) rhs.push_back(bernoulli_half(2 * j) / (8 * j));
    return solve_compilation(nodes_or_default(k, nodes), rhs);
}

RationalVector solve_single_term_b(int m, const Rational& c, const std::optional<RationalVector>& nodes) {
    if (m < 1) throw Error("solve_single_term_b: m must be positive");
    RationalVector rhs(m, Rational(0));
    rhs[m - 1] = c * factorial(2 * m - 1) / 4;
    return solve_compilation(nodes_or_default(m, nodes), rhs);
}

std::vector<quad> solve_single_term_b(int m, const quad& c, const std::optional<RationalVector>& nodes) {
    const RationalVector unit = solve_single_term_b(m, Rational(1), nodes);
    std::vector<quad> out;
    for (const auto& u : unit) out.push_back(c * to_quad(u));
    return out;
}

RationalVector mat_vec(const RationalMatrix& a, const RationalVector& x) {
    RationalVector y(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) throw DimensionError("mat_vec: shape mismatch");
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    }
    return y;
}

RationalMatrix mat_mul(const RationalMatrix& a, const RationalMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    RationalMatrix c(n, RationalVector(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

}  // namespace cpf
