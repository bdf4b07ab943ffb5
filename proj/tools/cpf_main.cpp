#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cpf/compiler.hpp"
#include "cpf/harness.hpp"
#include "cpf/rational.hpp"

using namespace cpf;

namespace {

void emit(const SweepResult& res, const std::string& path, bool json, bool deterministic) {
    if (path.empty()) {
        json ? write_json(std::cout, res, deterministic) : write_csv(std::cout, res, deterministic);
        return;
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    json ? write_json(f, res, deterministic) : write_csv(f, res, deterministic);
    std::fprintf(stderr, "wrote %zu rows to %s\n", res.rows.size(), path.c_str());
}

void scale_full(SweepConfig& c) {
    c.model.n = 8;
    c.r = 10000;
}

int cmd_tables(const std::string& which) {
    if (which.empty() || which == "bernoulli") {
        std::printf("B_j(1/2), nonzero entries\n");
        for (int j = 0; j <= 10; j += 2) std::printf("  B_%-2d %s\n", j, to_string(bernoulli_half(j)).c_str());
    }
    if (which.empty() || which == "vandermonde") {
        std::printf("b_l for nodes a_l = l+1\n");
        for (int k = 1; k <= 5; ++k) {
            const auto b = solve_vandermonde_b(k);
            std::printf("  k=%d", k);
            for (std::size_t l = 0; l < b.size(); ++l) std::printf("  b%zu=%s", l, to_string(b[l]).c_str());
            std::printf("\n");
        }
    }
    if (!which.empty() && which != "bernoulli" && which != "vandermonde")
        throw ConfigError("tables: expected bernoulli or vandermonde");
    return 0;
}

int cmd_compile_check() {
    bool all = true;
    std::printf("%-20s %5s %5s %9s %9s %5s  %s\n", "row", "sign", "cost", "expected", "slope", "kept", "result");
    for (const auto& r : compile_check()) {
        std::printf("%-20s %+5d %5d %9.2f %9.3f %5zu  %s\n", r.name.c_str(), r.sign, r.cost, r.expected, r.slope, r.kept,
                    r.pass ? "pass" : "FAIL");
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

int cmd_slope(const std::string& input, const std::string& filter, const std::string& x) {
    std::ifstream f(input);
    if (!f) throw ConfigError("cannot open '" + input + "'");
    const auto res = read_csv(f);
    const auto flt = RowFilter::parse(filter);
    // One fit per (model, formula, alpha) group that survives the filter.
    std::map<std::tuple<std::string, std::string, double>, std::vector<SweepRow>> groups;
    for (const auto& r : res.rows)
        if (flt.matches(r)) groups[{r.model, r.formula, r.alpha}].push_back(r);
    if (groups.empty()) throw ConfigError("filter matches no rows");
    std::printf("%-28s %-22s %8s %9s %11s %8s %6s\n", "model", "formula", "alpha", "slope", "intercept", "r2", "points");
    for (const auto& [key, rows] : groups) {
        const auto pts = slope_window(rows, x);
        const auto& [model, formula, alpha] = key;
        if (pts.size() < 4) {
            std::printf("%-28s %-22s %8g   (only %zu points in the fit window)\n", model.c_str(), formula.c_str(), alpha,
                        pts.size());
            continue;
        }
        const auto fit = fit_loglog_slope(pts);
        std::printf("%-28s %-22s %8g %9.4f %11.4f %8.5f %6zu\n", model.c_str(), formula.c_str(), alpha, fit.slope,
                    fit.intercept, fit.r2, fit.points);
    }
    return 0;
}

int cmd_repro(const std::string& name, bool full, int jobs, const std::string& dir, bool deterministic) {
    std::filesystem::create_directories(dir);
    auto path = [&](const std::string& f) { return (std::filesystem::path(dir) / f).string(); };
    if (name == "fig-compile") {
        emit(compile_sweep(full), path("fig_compile.csv"), false, deterministic);
        return 0;
    }
    std::vector<std::string> names{name};
    if (name == "fig-nonpert") names.push_back("fig-nonpert-triangle");
    for (const auto& n : names) {
        const auto cfgs = preset(n, full);
        emit(run_sweeps(cfgs, jobs), path(cfgs.front().output), false, deterministic);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corrected product formula toolkit"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "Run an error sweep from a config file");
    std::string config, output;
    bool full = false, json = false, deterministic = false;
    int jobs = 1;
    sweep->add_option("--config", config, "Config file (key = value)")->required()->check(CLI::ExistingFile);
    sweep->add_flag("--full", full, "Full size: n = 8, r = 10000");
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_flag("--json", json, "Write rows as a JSON array");
    sweep->add_flag("--deterministic", deterministic, "Write wall_time_s as 0");
    sweep->add_option("--output", output, "Output file (overrides the config; default stdout)");

    auto* slope = app.add_subcommand("slope", "Log-log slope of error against a column");
    std::string input, filter, xcol = "t";
    slope->add_option("--input", input, "Sweep CSV")->required();
    slope->add_option("--filter", filter, "Conditions like formula=pf2,alpha<=0.01");
    slope->add_option("--x", xcol, "Column for the x axis (t, tau, alpha, r)");

    auto* tables = app.add_subcommand("tables", "Print exact coefficient tables");
    std::string which;
    tables->add_option("which", which, "bernoulli | vandermonde (default both)");

    auto* check = app.add_subcommand("compile-check", "Measure corrector compilation orders");

    auto* repro = app.add_subcommand("repro", "Run a figure preset");
    std::string name, dir = ".";
    repro->add_option("preset", name, "fig-nonpert | fig-pert | fig-compile")
        ->required()
        ->check(CLI::IsMember({"fig-nonpert", "fig-pert", "fig-compile"}));
    repro->add_flag("--full", full, "Full size: n = 8, r = 10000");
    repro->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    repro->add_option("--out-dir", dir, "Directory for the CSV files");
    repro->add_flag("--deterministic", deterministic, "Write wall_time_s as 0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            auto cfg = SweepConfig::load(config);
            if (full) scale_full(cfg);
            emit(run_sweep(cfg, jobs), output.empty() ? cfg.output : output, json, deterministic);
            return 0;
        }
        if (*slope) return cmd_slope(input, filter, xcol);
        if (*tables) return cmd_tables(which);
        if (*check) return cmd_compile_check();
        if (*repro) return cmd_repro(name, full, jobs, dir, deterministic);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
