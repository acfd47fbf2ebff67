#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "nudamp/runner.hpp"

using namespace nudamp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RunConfig config_from(const std::string& text, const std::vector<std::string>& overrides = {}) {
    RawConfig raw = RawConfig::parse_text(text);
    for (const auto& ov : overrides) raw.set(ov);
    return RunConfig::from_raw(raw);
}

double cell_double(const Report& rep, std::size_t row, std::size_t col) {
    return std::get<double>(rep.rows.at(row).at(col));
}

}  // namespace

TEST_CASE("empty config runs the reference-table defaults", "[cli]") {
    const RunConfig cfg = config_from("");
    CHECK(cfg.gamma_cm3_per_s == 1e-22);
    CHECK(cfg.r_c_cm == 1e-5);
    CHECK(cfg.dm2_ev2 == std::vector<double>{7.59e-5});
    CHECK(cfg.mode == DampingMode::Exponential);
    const auto sc = cfg.scenario();
    CHECK(sc.momentum_c_ev() == 1e19);
    CHECK(sc.time_s() == 3.15e18);
    // the default oscillate run surfaces the cosmogenic damping exponent
    const Report rep = cmd_oscillate(cfg);
    bool found = false;
    for (const auto& row : rep.rows) {
        if (std::get<std::string>(row[0]) == "xi_t") {
            found = true;
            CHECK_THAT(std::get<double>(row[3]), WithinRel(2.31e-55, 0.02));
        }
    }
    CHECK(found);
}

TEST_CASE("config parser handles sections, comments, arrays, quotes", "[cli]") {
    const std::string text = R"(
# run setup
mode = "LINEAR"
seed = 99

[collapse]
preset = "GRW"

[model]
dm2_ev2 = [7.59e-5]
theta_rad = 0.61

[scenario]
energy_ev = 1e6   # solar
time_s = 5e2
)";
    const RunConfig cfg = config_from(text);
    CHECK(cfg.mode == DampingMode::Linear);
    CHECK(cfg.seed == 99);
    CHECK(cfg.gamma_cm3_per_s == 1e-30);
    CHECK(cfg.theta_rad == 0.61);
    CHECK(cfg.energy_ev == 1e6);
    CHECK(cfg.time_s == 5e2);
}

TEST_CASE("unknown keys are rejected by name", "[cli]") {
    CHECK_THROWS_WITH(config_from("collapse.gamm = 1e-22"),
                      ContainsSubstring("collapse.gamm"));
    CHECK_THROWS_WITH(config_from("", {"scenaro.time_s=5"}), ContainsSubstring("scenaro.time_s"));
}

TEST_CASE("malformed config lines are reported", "[cli]") {
    CHECK_THROWS_AS(RawConfig::parse_text("mode EXPONENTIAL"), ConfigError);
    CHECK_THROWS_AS(RawConfig::parse_text("= 5"), ConfigError);
    CHECK_THROWS_AS(config_from("seed = abc"), ConfigError);
    CHECK_THROWS_AS(config_from("model.dm2_ev2 = 7.59e-5"), ConfigError);   // list expected
    CHECK_THROWS_AS(config_from("mode = SOMETIMES"), ConfigError);
    CHECK_THROWS_AS(RawConfig{}.set("no_equals"), ConfigError);
}

TEST_CASE("mutually exclusive keys are rejected", "[cli]") {
    CHECK_THROWS_WITH(config_from("scenario.energy_ev = 1e6\nscenario.momentum_ev = 1e6"),
                      ContainsSubstring("mutually exclusive"));
    CHECK_THROWS_AS(config_from("scenario.time_s = 1\nscenario.baseline_cm = 1"), ConfigError);
    CHECK_THROWS_AS(config_from("model.theta_rad = 0.5\nmodel.mixing = [1,0,0,1]"), ConfigError);
    CHECK_THROWS_AS(config_from("collapse.preset = \"ADLER\"\ncollapse.gamma_cm3_per_s = 1e-22"),
                    ConfigError);
}

TEST_CASE("overrides outrank file values", "[cli]") {
    const RunConfig cfg = config_from("scenario.energy_ev = 1e6", {"scenario.energy_ev=1e10"});
    CHECK(cfg.energy_ev == 1e10);
}

TEST_CASE("model validation through the config surface", "[cli]") {
    CHECK_THROWS_AS(config_from("model.n = 1"), ConfigError);
    CHECK_THROWS_AS(config_from("model.n = 3"), ConfigError);                 // needs 2 splittings
    CHECK_THROWS_AS(config_from("model.n = 3\nmodel.dm2_ev2 = [1e-5, 2e-5]"), ConfigError);  // needs mixing
    CHECK_THROWS_AS(config_from("model.theta_rad = 0.5\nmodel.n = 3\nmodel.dm2_ev2 = [1e-5, 2e-5]"),
                    ConfigError);
    CHECK_THROWS_AS(config_from("scenario.flavor = 2"), ConfigError);
    CHECK_THROWS_AS(config_from("model.widths_ev = [1e-16]"), ConfigError);

    const RunConfig three = config_from(
        "model.n = 3\nmodel.dm2_ev2 = [1e-5, 2e-5]\nmodel.mixing = [1,0,0,0,1,0,0,0,1]");
    CHECK(three.model().size() == 3);
}

TEST_CASE("scan grid validation", "[cli]") {
    CHECK_THROWS_AS(config_from("scan.grid = [2e6, 1e6]"), ConfigError);
    CHECK_THROWS_AS(config_from("scan.grid = [-1e6, 1e6]"), ConfigError);
    CHECK_THROWS_AS(cmd_scan(config_from("")), ConfigError);  // empty grid
}

TEST_CASE("reference-table report", "[cli]") {
    const Report rep = cmd_table1(config_from(""));
    REQUIRE(rep.columns == std::vector<std::string>{"scenario", "E_eV", "t_s", "xi_t_dimensionless"});
    REQUIRE(rep.rows.size() == 3);
    CHECK_THAT(cell_double(rep, 0, 3), WithinRel(2.3136187826296258e-55, 1e-12));

    const std::string csv = to_csv(rep);
    CHECK(csv.rfind("scenario,E_eV,t_s,xi_t_dimensionless\n", 0) == 0);
    CHECK_THAT(csv, ContainsSubstring("2.31361878e-55"));
    CHECK_THAT(csv, ContainsSubstring("3.67241077e-45"));
    CHECK_THAT(csv, ContainsSubstring("1.56444699e-57"));
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("oscillate: delta row at t = 0 and textbook null at phase pi", "[cli]") {
    SECTION("no evolution") {
        const Report rep = cmd_oscillate(config_from("scenario.time_s = 0"));
        REQUIRE(std::get<std::string>(rep.rows[0][0]) == "P_csl");
        CHECK_THAT(std::get<double>(rep.rows[0][3]), WithinAbs(1.0, 1e-14));  // beta = 0
        CHECK_THAT(std::get<double>(rep.rows[1][3]), WithinAbs(0.0, 1e-14));  // beta = 1
    }
    SECTION("gamma = 0, maximal mixing, half period") {
        // masses 1 and 3 eV at pc = 10 eV, t tuned to phase pi
        const double gap = std::hypot(10.0, 3.0) - std::hypot(10.0, 1.0);
        const double t = std::numbers::pi * 6.582119569e-16 / gap;
        std::ostringstream text;
        text << "collapse.gamma_cm3_per_s = 0\n"
             << "model.lightest_mass_ev = 1\n"
             << "model.dm2_ev2 = [8]\n"
             << "scenario.momentum_ev = 10\n"
             << "scenario.time_s = " << std::setprecision(17) << t << "\n";
        const Report rep = cmd_oscillate(config_from(text.str()));
        CHECK_THAT(std::get<double>(rep.rows[0][3]), WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("scan: single point agrees with oscillate, damping falls as E^2", "[cli]") {
    const RunConfig scan_cfg =
        config_from("scan.grid = [1e6, 1e7, 1e8]\nscenario.time_s = 5e2");
    const Report rep = cmd_scan(scan_cfg);
    REQUIRE(rep.rows.size() == 3);
    const auto cols = rep.columns;
    REQUIRE(cols[0] == "E_eV");
    const std::size_t xi_col = 2 + 2 * 2;  // E, t, two CSL, two QM columns
    REQUIRE(cols[xi_col] == "xi_t_max_dimensionless");

    SECTION("single point equals the oscillate output") {
        const RunConfig osc_cfg = config_from("scenario.energy_ev = 1e6\nscenario.time_s = 5e2");
        const Report osc = cmd_oscillate(osc_cfg);
        // P_csl for beta = 0 in both reports
        CHECK(cell_double(rep, 0, 2) == std::get<double>(osc.rows[0][3]));
        CHECK(cell_double(rep, 0, 3) == std::get<double>(osc.rows[1][3]));
    }
    SECTION("xi t scales like 1/E^2 along the energy grid") {
        const double r01 = cell_double(rep, 0, xi_col) / cell_double(rep, 1, xi_col);
        const double r12 = cell_double(rep, 1, xi_col) / cell_double(rep, 2, xi_col);
        CHECK(cell_double(rep, 0, xi_col) > cell_double(rep, 1, xi_col));
        CHECK_THAT(r01, WithinRel(100.0, 1e-3));
        CHECK_THAT(r12, WithinRel(100.0, 1e-3));
    }
    SECTION("solar row carries the expected decoherence and damping exponents") {
        CHECK_THAT(cell_double(rep, 0, xi_col), WithinRel(3.66e-45, 0.02));
        const double deco = cell_double(rep, 0, xi_col + 1);
        CHECK(std::abs(std::log10(deco) - std::log10(1e-18)) <= 1.0);
    }
}

TEST_CASE("dp report intersects the expected window", "[cli]") {
    const Report rep = cmd_dp(config_from(""));
    REQUIRE(rep.rows.size() == 14);  // configured pair + 13-point scan
    CHECK_THAT(cell_double(rep, 0, 4), WithinRel(0.0483503314675911489, 1e-6));
    bool window = false;
    for (const auto& [k, v] : rep.summary) {
        if (k == "scan.intersects_window_1e-2_to_1") window = (v == "true");
    }
    CHECK(window);
}

TEST_CASE("decoherence report", "[cli]") {
    const Report rep = cmd_decoherence(config_from("scenario.energy_ev = 1e6\nscenario.time_s = 5e2"));
    REQUIRE(rep.rows.size() >= 4);
    CHECK(std::get<std::string>(rep.rows[0][0]) == "rate");
    const double out_rate = cell_double(rep, 0, 2);
    CHECK_THAT(out_rate, WithinRel(9.6143441e-44 * 1e6, 1e-4));
    // the ratio row shows decoherence dominating the collapse effect
    const auto& last = rep.rows.back();
    CHECK(std::get<std::string>(last[0]) == "exponent_ratio");
    CHECK(std::get<double>(last[2]) > 1e10);
}

TEST_CASE("check command passes on defaults and reports violations as INFO", "[cli]") {
    const auto outcome = cmd_check(config_from(""));
    CHECK(outcome.all_passed);
    for (const auto& row : outcome.report.rows) {
        CHECK(std::get<std::string>(row[4]) != "FAIL");
    }

    const auto with_info = cmd_check(config_from("check.include_violations = true"));
    CHECK(with_info.all_passed);
    bool saw_info = false;
    for (const auto& row : with_info.report.rows) {
        if (std::get<std::string>(row[4]) == "INFO") {
            saw_info = true;
            CHECK_THAT(std::get<std::string>(row[1]), ContainsSubstring("cond=false"));
        }
    }
    CHECK(saw_info);
}

TEST_CASE("gamma = 0 keeps the identity check trivially green", "[cli]") {
    const auto outcome = cmd_check(config_from("collapse.gamma_cm3_per_s = 0"));
    CHECK(outcome.all_passed);
}

TEST_CASE("montecarlo report and byte determinism", "[cli]") {
    const RunConfig cfg = config_from("mc.n_paths = 300\nseed = 7");
    const Report a = cmd_montecarlo(cfg);
    const Report b = cmd_montecarlo(cfg);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_json(a) == to_json(b));
    REQUIRE(a.columns[0] == "t_s");
    CHECK(a.rows.size() == 101);  // t = 0 .. 10 at dt = 0.1
    bool has_fit = false;
    for (const auto& [k, v] : a.summary) has_fit |= (k == "fitted_rate_per_s");
    CHECK(has_fit);
}

TEST_CASE("degenerate masses surface as a warning, not an error", "[cli]") {
    const Report rep = cmd_oscillate(config_from("model.dm2_ev2 = [0]\nmodel.lightest_mass_ev = 0.1"));
    bool warned = false;
    for (const auto& [k, v] : rep.summary) {
        if (k == "warning") warned = v.find("degenerate") != std::string::npos;
    }
    CHECK(warned);
    // with zero splitting the collapse damping vanishes identically
    for (const auto& row : rep.rows) {
        if (std::get<std::string>(row[0]) == "xi_t") CHECK(std::get<double>(row[3]) == 0.0);
    }
}

TEST_CASE("csv escaping follows RFC 4180 for awkward fields", "[cli]") {
    Report rep;
    rep.columns = {"label", "value"};
    rep.rows.push_back({std::string("a,b"), 1.0});
    rep.rows.push_back({std::string("say \"hi\""), 2.0});
    const std::string csv = to_csv(rep);
    CHECK_THAT(csv, ContainsSubstring("\"a,b\",1.00000000e+00"));
    CHECK_THAT(csv, ContainsSubstring("\"say \"\"hi\"\"\",2.00000000e+00"));
}

TEST_CASE("output formats", "[cli]") {
    const Report rep = cmd_table1(config_from(""));

    SECTION("csv trailer carries the summary") {
        CHECK_THAT(to_csv(rep), ContainsSubstring("# eq10_prefactor_per_s_ev2 = 7.34482153e-36"));
    }
    SECTION("json carries config echo and provenance") {
        const std::string js = to_json(rep);
        CHECK_THAT(js, ContainsSubstring("\"config_echo\""));
        CHECK_THAT(js, ContainsSubstring("\"provenance\""));
        CHECK_THAT(js, ContainsSubstring("\"version\": \"0.1.0\""));
        CHECK_THAT(js, ContainsSubstring("\"seed\": 12345"));
        // extreme exponents survive the JSON round trip
        CHECK_THAT(js, ContainsSubstring("e-55"));
    }
    SECTION("run_command writes to a file and returns 0") {
        RunConfig cfg = config_from("output.path = \"/tmp/nudamp_test_table1.csv\"");
        std::ostringstream sink;
        CHECK(run_command("table1", cfg, sink) == 0);
        std::ifstream in("/tmp/nudamp_test_table1.csv");
        REQUIRE(in.good());
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == to_csv(cmd_table1(cfg)));
    }
    SECTION("unknown subcommand is a validation error") {
        std::ostringstream sink;
        CHECK_THROWS_AS(run_command("oscilate", config_from(""), sink), ConfigError);
    }
}
