#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cpf/harness.hpp"
#include "support.hpp"

using namespace cpf;
using namespace cpf::test;

namespace {

ModelChoice heis(int n = 4) {
    ModelChoice m;
    m.model = "heisenberg";
    m.n = n;
    return m;
}

SweepConfig small_config() {
    SweepConfig c;
    c.model = heis();
    c.formulas = {"pf2", "cpf2-com"};
    c.alphas = {1.0};
    c.t_min = 0.5;
    c.t_max = 2;
    c.t_points = 3;
    c.r = 20;
    return c;
}

}  // namespace

TEST_CASE("selector parsing") {
    CHECK(FormulaSelector::parse("pf4").kind == FormulaSelector::Kind::suzuki);
    CHECK(FormulaSelector::parse("pf4").k == 2);
    const auto s = FormulaSelector::parse("cpf2-symp:3");
    CHECK(s.kind == FormulaSelector::Kind::cpf2_symp);
    CHECK(s.k == 3);
    CHECK(FormulaSelector::parse("cpf2-symp").k == 1);
    const auto p = FormulaSelector::parse("cpf2k-pert:2:3");
    CHECK(p.k == 2);
    CHECK(p.kcorr == 3);
    CHECK(FormulaSelector::parse("cpf4-symp+compiled").compiled);
    CHECK(FormulaSelector::parse("cpf1-com").is_corrected());
    CHECK_FALSE(FormulaSelector::parse("pf2").is_corrected());

    CHECK_THROWS_AS(FormulaSelector::parse("pf3"), ConfigError);
    CHECK_THROWS_AS(FormulaSelector::parse("pf2+compiled"), ConfigError);
    CHECK_THROWS_AS(FormulaSelector::parse("pf2k:0"), ConfigError);
    CHECK_THROWS_AS(FormulaSelector::parse("pf1:2"), ConfigError);
    CHECK_THROWS_AS(FormulaSelector::parse("cpf2k-pert"), ConfigError);
    CHECK_THROWS_AS(FormulaSelector::parse("pf2k:x"), ConfigError);
}

TEST_CASE("selector builds carry the selector text") {
    for (const char* s : {"pf1", "pf2", "pf4", "cpf1-symp", "cpf2-com", "cpf2k-nonpert:2"}) {
        CAPTURE(s);
        CHECK(FormulaSelector::parse(s).build(minus_i(quad(0.1))).tag == s);
    }
}

TEST_CASE("model construction") {
    CHECK(build_model(heis(), 1.0).n == 4);
    CHECK_THROWS_AS(build_model(heis(), 0.5), ConfigError);
    ModelChoice t;
    t.model = "tfim";
    t.regime = "weak-coupling";
    CHECK(build_model(t, 1e-2).alpha == 1e-2);
    t.regime = "strong";
    CHECK_THROWS_AS(build_model(t, 1.0), ConfigError);
    ModelChoice u;
    u.model = "ising";
    CHECK_THROWS_AS(build_model(u, 1.0), ConfigError);
}

TEST_CASE("config parsing") {
    const auto c = SweepConfig::parse(
        "# demo\n"
        "model = tfim\n"
        "regime = weak-coupling\n"
        "n = 4\n"
        "formulas = pf2, cpf2-symp:1   # two\n"
        "alphas = 0.1, 0.01\n"
        "t_min = 1\nt_max = 10\nt_points = 3\nt_spacing = log\n"
        "r = 50\nerror_mode = per-step\nprecision = quad\n");
    CHECK(c.formulas.size() == 2);
    CHECK(c.alphas.size() == 2);
    CHECK(c.r == 50);
    CHECK(c.error_mode == ErrorMode::per_step);
    CHECK(c.precision == Precision::fp128);
    const auto g = c.t_grid();
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(std::sqrt(10.0)));

    CHECK_THROWS_AS(SweepConfig::parse("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("r\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("r = many\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("t_spacing = cubic\n"), ConfigError);

    auto bad = small_config();
    bad.t_points = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.t_min = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.formulas.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(SweepConfig::load("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("linear t grid") {
    auto c = small_config();
    c.t_log = false;
    c.t_min = 1;
    c.t_max = 3;
    const auto g = c.t_grid();
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(2.0));
}

TEST_CASE("fit_loglog_slope") {
    std::vector<std::pair<double, double>> cube, seven;
    for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        cube.emplace_back(x, x * x * x);
        seven.emplace_back(x, 5 * std::pow(x, 7));
    }
    CHECK(std::abs(fit_loglog_slope(cube).slope - 3) < 1e-10);
    const auto f = fit_loglog_slope(seven);
    CHECK(std::abs(f.slope - 7) < 1e-10);
    CHECK(std::abs(f.intercept - std::log(5.0)) < 1e-10);
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_loglog_slope({{1, 1}, {2, 8}, {3, 27}}), NumericError);
    CHECK_THROWS_AS(fit_loglog_slope({{1, 1}, {2, 8}, {3, 0}, {4, 64}}), NumericError);
    CHECK_THROWS_AS(fit_loglog_slope({{1, 1}, {-2, 8}, {3, 27}, {4, 64}}), NumericError);
}

TEST_CASE("csv round trip and determinism") {
    const auto res = run_sweep(small_config());
    REQUIRE(res.rows.size() == 6);
    std::ostringstream a, b;
    write_csv(a, res, true);
    write_csv(b, run_sweep(small_config(), 2), true);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind(std::string(csv_header) + "\n", 0) == 0);

    std::istringstream in(a.str());
    const auto back = read_csv(in);
    REQUIRE(back.rows.size() == res.rows.size());
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        CHECK(back.rows[i].formula == res.rows[i].formula);
        CHECK(back.rows[i].error == res.rows[i].error);
        CHECK(back.rows[i].tau == res.rows[i].tau);
        CHECK(back.rows[i].exp_count == res.rows[i].exp_count);
        CHECK(back.rows[i].wall_time_s == 0);
    }

    std::istringstream bad_header("model,formula\n");
    CHECK_THROWS_AS(read_csv(bad_header), ConfigError);
    std::istringstream short_row(std::string(csv_header) + "\nheisenberg,pf2,1\n");
    CHECK_THROWS_AS(read_csv(short_row), ConfigError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), ConfigError);
}

TEST_CASE("csv quoting") {
    SweepResult r;
    SweepRow row;
    row.model = "m";
    row.formula = "ypf:a,b.txt";
    row.alpha = 1;
    row.t = 1;
    row.r = 1;
    row.tau = 1;
    row.error = 1e-3;
    r.rows.push_back(row);
    std::ostringstream os;
    write_csv(os, r);
    std::istringstream in(os.str());
    CHECK(read_csv(in).rows.at(0).formula == "ypf:a,b.txt");
}

TEST_CASE("json output") {
    const auto res = run_sweep(small_config());
    std::ostringstream os;
    write_json(os, res, true);
    const auto j = nlohmann::json::parse(os.str());
    REQUIRE(j.is_array());
    REQUIRE(j.size() == res.rows.size());
    CHECK(j[0]["formula"] == "pf2");
    CHECK(j[0]["error"].get<double>() == res.rows[0].error);
}

TEST_CASE("row filter") {
    SweepRow row;
    row.model = "heisenberg";
    row.formula = "pf2";
    row.alpha = 1e-3;
    row.t = 2;
    CHECK(RowFilter::parse("formula=pf2,t>=2").matches(row));
    CHECK_FALSE(RowFilter::parse("formula!=pf2").matches(row));
    CHECK(RowFilter::parse("alpha<0.01").matches(row));
    CHECK_FALSE(RowFilter::parse("t>2").matches(row));
    CHECK_THROWS_AS(RowFilter::parse("formula<pf2"), ConfigError);
    CHECK_THROWS_AS(RowFilter::parse("=3"), ConfigError);
    CHECK_THROWS_AS(row_value(row, "colour"), ConfigError);
}

TEST_CASE("slope window") {
    std::vector<SweepRow> rows(4);
    const double errs[] = {1e-14, 1e-6, 1e-3, 0.9};
    for (int i = 0; i < 4; ++i) {
        rows[i].t = i + 1;
        rows[i].error = errs[i];
    }
    const auto w = slope_window(rows, "t");
    REQUIRE(w.size() == 2);
    CHECK(w[0].second == 1e-6);
}

TEST_CASE("total error edge cases") {
    const auto spec = build_model(heis(), 1.0);
    const auto pf2 = FormulaSelector::parse("pf2");
    CHECK(total_error(spec, pf2, 0.0, 10) == 0.0);
    CHECK(total_error(spec, pf2, 0.3, 1) ==
          doctest::Approx(per_step_triangle_estimate(spec, pf2, 0.3, 1)).epsilon(1e-12));
    CHECK_THROWS_AS(total_error(build_heisenberg(12), pf2, 1.0, 1), ResourceError);
}

TEST_CASE("per-step errors scale with tau") {
    // Halving tau shrinks a one-step PF2 error by about 2^3.
    const auto spec = build_model(heis(), 1.0);
    const auto pf2 = FormulaSelector::parse("pf2");
    const double e1 = per_step_triangle_estimate(spec, pf2, 0.02, 1, Precision::fp128);
    const double e2 = per_step_triangle_estimate(spec, pf2, 0.01, 1, Precision::fp128);
    CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.2));
}

TEST_CASE("corrected formulas beat their base in the perturbative regime") {
    ModelChoice m;
    m.model = "tfim";
    m.regime = "weak-coupling";
    const auto spec = build_model(m, 1e-3);
    const double base = total_error(spec, FormulaSelector::parse("pf2"), 1.0, 20, Precision::fp128);
    const double corr = total_error(spec, FormulaSelector::parse("cpf2-symp"), 1.0, 20, Precision::fp128);
    CHECK(corr / base < 1e-2);
}

TEST_CASE("total error scales as r^-p") {
    const auto spec = build_model(heis(), 1.0);
    for (auto [sel, p] : {std::pair{"pf2", 2}, {"pf4", 4}, {"cpf2-com", 4}}) {
        CAPTURE(sel);
        const auto f = FormulaSelector::parse(sel);
        std::vector<std::pair<double, double>> pts;
        for (std::uint64_t r : {20, 40, 80, 160}) pts.emplace_back(double(r), total_error(spec, f, 1.0, r, Precision::fp128));
        CHECK(fit_loglog_slope(pts).slope == doctest::Approx(-p).epsilon(0.3 / p));
    }
}

TEST_CASE("total error never exceeds the per-step estimate") {
    const auto spec = build_model(heis(), 1.0);
    for (const char* sel : {"pf1", "pf2", "cpf1-com", "cpf2-com"}) {
        CAPTURE(sel);
        const auto f = FormulaSelector::parse(sel);
        for (double t : {0.5, 2.0, 8.0}) {
            const std::uint64_t r = 16;
            CHECK(total_error(spec, f, t, r) <= per_step_triangle_estimate(spec, f, t / r, r) * (1 + 1e-9));
        }
    }
}

TEST_CASE("symplectic wraps add a constant exponential count") {
    const auto pf2 = FormulaSelector::parse("pf2");
    const auto pf4 = FormulaSelector::parse("pf4");
    for (std::uint64_t r : {1, 7, 100, 1000}) {
        CAPTURE(r);
        CHECK(trotter_exp_count(pf2, 0.1, r) == 2 * r + 1);
        CHECK(trotter_exp_count(FormulaSelector::parse("cpf2-symp"), 0.1, r) == trotter_exp_count(pf2, 0.1, r) + 2);
        CHECK(trotter_exp_count(FormulaSelector::parse("cpf4-symp"), 0.1, r) == trotter_exp_count(pf4, 0.1, r) + 2);
    }
}

TEST_CASE("presets") {
    const auto np = preset("fig-nonpert");
    CHECK(np.size() == 3);
    for (const auto& c : np) CHECK_NOTHROW(c.validate());
    const auto pt = preset("fig-pert");
    CHECK(pt.size() == 3);
    CHECK(pt[0].alphas.size() == 4);
    CHECK(preset("fig-nonpert", true)[0].r == 10000);
    CHECK_THROWS_AS(preset("fig-unknown"), ConfigError);
}

TEST_CASE("precision names") {
    CHECK(parse_precision("double") == Precision::fp64);
    CHECK(parse_precision("fp128") == Precision::fp128);
    CHECK_THROWS_AS(parse_precision("half"), ConfigError);
}
