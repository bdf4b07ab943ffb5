#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cpf/compiler.hpp"
#include "cpf/harness.hpp"

namespace cpf {

namespace detail {
double sweep_point_error(const HamiltonianSpec& spec, std::uint64_t seed, const FormulaSelector& f, double t,
                         std::uint64_t r, ErrorMode mode, Precision prec);
}

namespace {

struct Task {
    const SweepConfig* cfg;
    const HamiltonianSpec* spec;
    const FormulaSelector* formula;
    double alpha;
    double t;
};

// Runs fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs < 1 ? 1 : jobs, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!failure) failure = std::current_exception();
                next = n;
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

SweepResult run_sweeps(const std::vector<SweepConfig>& cfgs, int jobs) {
    // Parse everything up front so that bad configs fail before any work.
    std::vector<std::vector<FormulaSelector>> formulas(cfgs.size());
    std::vector<std::vector<HamiltonianSpec>> specs(cfgs.size());
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cfgs.size(); ++c) {
        cfgs[c].validate();
        for (const auto& s : cfgs[c].formulas) formulas[c].push_back(FormulaSelector::parse(s));
        for (double a : cfgs[c].alphas) specs[c].push_back(build_model(cfgs[c].model, a));
    }
    for (std::size_t c = 0; c < cfgs.size(); ++c) {
        const auto grid = cfgs[c].t_grid();
        for (std::size_t a = 0; a < cfgs[c].alphas.size(); ++a)
            for (const auto& f : formulas[c])
                for (double t : grid) tasks.push_back({&cfgs[c], &specs[c][a], &f, cfgs[c].alphas[a], t});
    }

    SweepResult out;
    out.rows.resize(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
        const Task& tk = tasks[i];
        const auto start = std::chrono::steady_clock::now();
        SweepRow row;
        row.model = tk.spec->model_tag;
        row.formula = tk.formula->text;
        row.alpha = tk.alpha;
        row.t = tk.t;
        row.r = tk.cfg->r;
        row.tau = static_cast<double>(quad(tk.t) / quad(tk.cfg->r));
        row.error = detail::sweep_point_error(*tk.spec, tk.cfg->model.seed, *tk.formula, tk.t, tk.cfg->r,
                                              tk.cfg->error_mode, tk.cfg->precision);
        row.exp_count = trotter_exp_count(*tk.formula, row.tau, tk.cfg->r);
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.rows[i] = std::move(row);
    });
    // Task order is already a deterministic function of the configs.
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg, int jobs) { return run_sweeps({cfg}, jobs); }

const char* const csv_header = "model,formula,alpha,t,r,tau,error,exp_count,wall_time_s";

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double to_num(const std::string& s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad number '" + s + "' in CSV");
    return v;
}

}  // namespace

void write_csv(std::ostream& os, const SweepResult& r, bool deterministic) {
    os << csv_header << '\n';
    for (const auto& row : r.rows) {
        os << csv_field(row.model) << ',' << csv_field(row.formula) << ',' << format_double(row.alpha) << ','
           << format_double(row.t) << ',' << row.r << ',' << format_double(row.tau) << ','
           << format_double(row.error) << ',' << row.exp_count << ','
           << format_double(deterministic ? 0.0 : row.wall_time_s) << '\n';
    }
}

void write_json(std::ostream& os, const SweepResult& r, bool deterministic) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : r.rows) {
        arr.push_back({{"model", row.model},
                       {"formula", row.formula},
                       {"alpha", row.alpha},
                       {"t", row.t},
                       {"r", row.r},
                       {"tau", row.tau},
                       {"error", row.error},
                       {"exp_count", row.exp_count},
                       {"wall_time_s", deterministic ? 0.0 : row.wall_time_s}});
    }
    os << arr.dump(2) << '\n';
}

SweepResult read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty CSV (no header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw ConfigError("CSV header does not match the sweep schema");
    SweepResult res;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = csv_split(line);
        if (f.size() != 9) throw ConfigError("CSV line " + std::to_string(lineno) + ": expected 9 fields");
        SweepRow row;
        row.model = f[0];
        row.formula = f[1];
        row.alpha = to_num(f[2]);
        row.t = to_num(f[3]);
        row.r = static_cast<std::uint64_t>(to_num(f[4]));
        row.tau = to_num(f[5]);
        row.error = to_num(f[6]);
        row.exp_count = static_cast<std::uint64_t>(to_num(f[7]));
        row.wall_time_s = to_num(f[8]);
        res.rows.push_back(std::move(row));
    }
    return res;
}

double row_value(const SweepRow& row, const std::string& c) {
    if (c == "alpha") return row.alpha;
    if (c == "t") return row.t;
    if (c == "r") return static_cast<double>(row.r);
    if (c == "tau") return row.tau;
    if (c == "error") return row.error;
    if (c == "exp_count") return static_cast<double>(row.exp_count);
    if (c == "wall_time_s") return row.wall_time_s;
    throw ConfigError("no numeric column '" + c + "'");
}

RowFilter RowFilter::parse(const std::string& expr) {
    RowFilter f;
    std::istringstream in(expr);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty()) continue;
        std::size_t pos = part.find_first_of("=!<>");
        if (pos == std::string::npos || pos == 0) throw ConfigError("bad filter condition '" + part + "'");
        std::size_t end = pos + 1;
        if (end < part.size() && part[end] == '=') ++end;
        Cond c{part.substr(0, pos), part.substr(pos, end - pos), part.substr(end)};
        static const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
        if (std::find(std::begin(ops), std::end(ops), c.op) == std::end(ops))
            throw ConfigError("bad filter operator in '" + part + "'");
        if (c.column != "model" && c.column != "formula") {
            row_value(SweepRow{}, c.column);
            to_num(c.value);
        } else if (c.op != "=" && c.op != "!=") {
            throw ConfigError("text column '" + c.column + "' only supports = and !=");
        }
        f.conds.push_back(std::move(c));
    }
    return f;
}

bool RowFilter::matches(const SweepRow& row) const {
    for (const auto& c : conds) {
        if (c.column == "model" || c.column == "formula") {
            const std::string& v = c.column == "model" ? row.model : row.formula;
            if ((c.op == "=") != (v == c.value)) return false;
            continue;
        }
        const double x = row_value(row, c.column);
        const double y = to_num(c.value);
        bool ok = false;
        if (c.op == "=") ok = x == y;
        else if (c.op == "!=") ok = x != y;
        else if (c.op == "<") ok = x < y;
        else if (c.op == "<=") ok = x <= y;
        else if (c.op == ">") ok = x > y;
        else ok = x >= y;
        if (!ok) return false;
    }
    return true;
}

std::vector<std::pair<double, double>> slope_window(const std::vector<SweepRow>& rows, const std::string& x_column,
                                                    double lo, double hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (r.error >= lo && r.error <= hi) pts.emplace_back(row_value(r, x_column), r.error);
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<SweepConfig> preset(const std::string& name, bool full) {
    const int n = full ? 8 : 6;
    const std::uint64_t r = full ? 10000 : 100;
    std::vector<SweepConfig> out;
    if (name == "fig-nonpert" || name == "fig-nonpert-triangle") {
        const bool tri = name == "fig-nonpert-triangle";
        for (const char* model : {"heisenberg", "tfim", "hubbard"}) {
            SweepConfig c;
            c.model.model = model;
            c.model.regime = std::string(model) == "hubbard" ? "intermediate" : "";
            c.model.n = n;
            c.formulas = {"pf1", "pf2", "cpf1-symp", "cpf1-com", "cpf2-com", "cpf2k-nonpert:2"};
            c.alphas = {1.0};
            c.t_min = 1;
            c.t_max = full ? 1000 : 100;
            c.t_points = full ? 16 : 11;
            c.t_log = true;
            c.r = r;
            c.error_mode = tri ? ErrorMode::per_step : ErrorMode::total;
            c.output = tri ? "fig_nonpert_triangle.csv" : "fig_nonpert.csv";
            out.push_back(c);
        }
        return out;
    }
    if (name == "fig-pert") {
        const std::pair<const char*, const char*> models[] = {
            {"hubbard", "weak-coupling"}, {"hubbard", "weak-hopping"}, {"tfim", "weak-coupling"}};
        for (const auto& [model, regime] : models) {
            SweepConfig c;
            c.model.model = model;
            c.model.regime = regime;
            c.model.n = n;
            c.formulas = {"pf1", "cpf1-symp", "pf2", "cpf2-symp:2"};
            c.alphas = {1e-1, 1e-2, 1e-3, 1e-4};
            c.t_min = 0.1;
            c.t_max = 10;
            c.t_points = 12;
            c.r = r;
            c.output = "fig_pert.csv";
            out.push_back(c);
        }
        return out;
    }
    throw ConfigError("unknown preset '" + name + "' (fig-nonpert, fig-nonpert-triangle, fig-pert)");
}

namespace {

struct Table3Case {
    const char* name;
    Table3Row row;
    Table3Params prm;
    double expected;
};

std::vector<Table3Case> table3_cases() {
    Table3Params p1;
    p1.c2 = Rational(-1, 4);
    p1.c3 = Rational(1, 12);
    Table3Params p2;
    p2.c2 = Rational(-1, 24);
    Table3Params p3;
    p3.c3 = Rational(1, 48);
    Table3Params p4;
    p4.c1 = Rational(1, 2);
    p4.c2 = Rational(1, 12);
    return {{"sym-pair", Table3Row::sym_pair, p1, 4},
            {"symp-adab", Table3Row::symp_adab, p2, 4},
            {"sym-adb2a", Table3Row::sym_adb2a, p3, 5},
            {"symp-b-plus-adab", Table3Row::symp_b_plus_adab, p4, 4}};
}

}  // namespace

std::vector<CompileCheckRow> compile_check(double tol, int row5_k, double row5_lambda) {
    std::vector<CompileCheckRow> out;
    const auto p = make_partition<quad>(build_heisenberg(4));
    const auto grid = log_grid(1e-3, 1e-1);
    for (const auto& c : table3_cases()) {
        for (int sign : {1, -1}) {
            const auto rep = compilation_error_scan<quad>(
                [&](const qcomplex& l) { return compile_table3(c.row, c.prm, l, sign); }, p, grid);
            CompileCheckRow row;
            row.name = c.name;
            row.sign = sign;
            row.cost = compile_table3(c.row, c.prm, qc(0.1), sign).exp_cost;
            row.expected = c.expected;
            row.slope = rep.slope;
            row.kept = rep.fitted.size();
            row.pass = rep.fit_ok && std::abs(rep.slope - c.expected) <= tol;
            out.push_back(row);
        }
    }
    CompileCheckRow row;
    row.name = "high-order-Ck:" + std::to_string(row5_k);
    row.expected = 3;
    const qcomplex lam = qc(row5_lambda);
    std::vector<std::pair<double, double>> pts;
    for (double a : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto pa = make_partition<quad>(build_tfim(4, a, 1.0, TfimRegime::weak_coupling));
        const auto cc = compile_Ck(row5_k, lam);
        row.cost = cc.exp_cost;
        pts.emplace_back(a, compilation_error(cc, pa, lam));
    }
    row.slope = fit_loglog_slope(pts).slope;
    row.kept = pts.size();
    row.pass = std::abs(row.slope - 3) <= tol;
    out.push_back(row);
    return out;
}

SweepResult compile_sweep(bool full) {
    SweepResult res;
    const int n = full ? 8 : 6;
    const auto grid = log_grid(1e-2, 1, full ? 12 : 6);
    const HamiltonianSpec models[] = {build_hubbard_spinless(n, 1.0, 1.0, HubbardRegime::intermediate),
                                      build_heisenberg(n)};
    for (const auto& spec : models) {
        const auto p = make_partition<double>(spec);
        for (const auto& c : table3_cases()) {
            for (double x : grid) {
                const auto start = std::chrono::steady_clock::now();
                const qcomplex lam = qc(x);
                const auto cc = compile_table3(c.row, c.prm, lam);
                SweepRow row;
                row.model = spec.model_tag;
                row.formula = std::string("compile:") + c.name;
                row.alpha = 1;
                row.t = x;
                row.r = 1;
                row.tau = x;
                row.error = compilation_error(cc, p, lam);
                row.exp_count = static_cast<std::uint64_t>(cc.exp_cost);
                row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                res.rows.push_back(row);
            }
        }
    }
    return res;
}

}  // namespace cpf
