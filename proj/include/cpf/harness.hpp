#pragma once

// Sweep engine: formula selectors, models, error metrics, CSV/JSON output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpf/corrector.hpp"
#include "cpf/fit.hpp"
#include "cpf/lattice.hpp"

namespace cpf {

enum class Precision { fp64, fp128 };
Precision parse_precision(const std::string& s);
std::string to_string(Precision p);

// pf1, pf2, pf4, pf2k:<k>, cpf1-symp, cpf1-sym, cpf1-com, cpf2-symp:<k>,
// cpf2-com, cpf4-symp, cpf2k-pert:<k>[:<kcorr>], cpf2k-nonpert:<k>,
// ypf:<file>, cypf:<file>:<k>, ypf-symp:<file>:<j>.
// Corrected selectors accept a "+compiled" suffix (compiled correctors).
struct FormulaSelector {
    enum class Kind {
        pf1, pf2, suzuki, cpf1_symp, cpf1_sym, cpf1_com, cpf2_symp, cpf2_com, cpf4_symp,
        cpf2k_pert, cpf2k_nonpert, ypf, cypf, ypf_symp
    };
    std::string text;
    Kind kind = Kind::pf1;
    int k = 0;
    int kcorr = 0;
    bool compiled = false;
    std::string file;
    YoshidaWeights weights;
    quad constant = 0;  // ypf-symp corrector constant (estimated at parse time)

    static FormulaSelector parse(const std::string& s);
    ExpProduct build(const qcomplex& lambda) const;
    bool is_corrected() const;
};

struct ModelChoice {
    std::string model = "heisenberg";  // heisenberg | tfim | hubbard | random
    std::string regime;                // model-specific; empty = default
    int n = 4;
    std::uint64_t seed = 1;            // only used by model = random
};

HamiltonianSpec build_model(const ModelChoice& m, double alpha);
std::string model_tag(const ModelChoice& m);

enum class ErrorMode { total, per_step };

struct SweepConfig {
    ModelChoice model;
    std::vector<std::string> formulas;
    std::vector<double> alphas{1.0};
    double t_min = 1;
    double t_max = 10;
    int t_points = 10;
    bool t_log = true;
    std::uint64_t r = 100;
    ErrorMode error_mode = ErrorMode::total;
    Precision precision = Precision::fp64;
    std::string output;

    // "key = value" lines; '#' comments; lists are comma separated.
    static SweepConfig parse(const std::string& text);
    static SweepConfig load(const std::string& path);
    void validate() const;
    std::vector<double> t_grid() const;
};

struct SweepRow {
    std::string model;
    std::string formula;
    double alpha = 0;
    double t = 0;
    std::uint64_t r = 0;
    double tau = 0;
    double error = 0;
    std::uint64_t exp_count = 0;
    double wall_time_s = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

// ||exp(-iHt) - S(-it/r)^r||
double total_error(const HamiltonianSpec& spec, const FormulaSelector& f, double t, std::uint64_t r,
                   Precision prec = Precision::fp64);
// r ||exp(-iH tau) - S(-i tau)||
double per_step_triangle_estimate(const HamiltonianSpec& spec, const FormulaSelector& f, double tau,
                                  std::uint64_t r, Precision prec = Precision::fp64);
std::uint64_t trotter_exp_count(const FormulaSelector& f, double tau, std::uint64_t r);

SweepResult run_sweep(const SweepConfig& cfg, int jobs = 1);
SweepResult run_sweeps(const std::vector<SweepConfig>& cfgs, int jobs = 1);

extern const char* const csv_header;
// deterministic = true writes wall_time_s as 0.
void write_csv(std::ostream& os, const SweepResult& r, bool deterministic = false);
void write_json(std::ostream& os, const SweepResult& r, bool deterministic = false);
SweepResult read_csv(std::istream& is);
std::string format_double(double x);

// Conditions "col=value", "col!=value", "col<x", "col<=x", "col>x", "col>=x"
// joined by ','; string columns compare as text, numeric ones as numbers.
struct RowFilter {
    struct Cond {
        std::string column;
        std::string op;
        std::string value;
    };
    std::vector<Cond> conds;

    static RowFilter parse(const std::string& expr);
    bool matches(const SweepRow& row) const;
};

double row_value(const SweepRow& row, const std::string& column);

// Points (x, error) restricted to the fit window 1e-12 <= error <= 0.5.
std::vector<std::pair<double, double>> slope_window(const std::vector<SweepRow>& rows, const std::string& x_column,
                                                    double lo = 1e-12, double hi = 0.5);

// Compilation-order check. Rows 1-4: lambda-slope of the compilation error
// on Heisenberg n=4 (quad, lambda in [1e-3, 1e-1], both signs). Row 5: alpha-slope
// of C(k) on TFIM weak coupling n=4 at fixed lambda.
struct CompileCheckRow {
    std::string name;
    int sign = 1;
    int cost = 0;
    double expected = 0;
    double slope = 0;
    std::size_t kept = 0;
    bool pass = false;
};
std::vector<CompileCheckRow> compile_check(double tol = 0.25, int row5_k = 5, double row5_lambda = 1e-2);

// Compilation error against |lambda| on Hubbard and Heisenberg (fig-compile).
// Rows use formula = compile:<row>, t = tau = lambda, r = 1, exp_count = recipe cost.
SweepResult compile_sweep(bool full = false);

// Named presets: fig-nonpert, fig-pert. full = n 8, r 10000.
std::vector<SweepConfig> preset(const std::string& name, bool full = false);

}  // namespace cpf
