#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "nudamp/oracles.hpp"
#include "nudamp/config.hpp"
#include "nudamp/csl.hpp"
#include "nudamp/decoherence.hpp"
#include "nudamp/dp.hpp"
#include "nudamp/phase_noise.hpp"
#include "nudamp/report.hpp"

namespace nudamp {

namespace detail {

inline std::string list_to_string(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_sci9(v[i]);
    }
    return out + "]";
}

inline std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("mode", damping_mode_name(cfg.mode));
    e.emplace_back("seed", std::to_string(cfg.seed));
    e.emplace_back("collapse.preset", cfg.collapse_preset);
    e.emplace_back("collapse.gamma_cm3_per_s", format_sci9(cfg.gamma_cm3_per_s));
    e.emplace_back("collapse.r_c_cm", format_sci9(cfg.r_c_cm));
    e.emplace_back("collapse.m0c2_ev", format_sci9(cfg.m0c2_ev));
    e.emplace_back("model.n", std::to_string(cfg.n_flavors));
    e.emplace_back("model.dm2_ev2", list_to_string(cfg.dm2_ev2));
    e.emplace_back("model.lightest_mass_ev", format_sci9(cfg.lightest_mass_ev));
    if (cfg.theta_rad) e.emplace_back("model.theta_rad", format_sci9(*cfg.theta_rad));
    if (cfg.mixing_row_major) e.emplace_back("model.mixing", list_to_string(*cfg.mixing_row_major));
    if (cfg.widths_ev) e.emplace_back("model.widths_ev", list_to_string(*cfg.widths_ev));
    if (cfg.momentum_ev) e.emplace_back("scenario.momentum_ev", format_sci9(*cfg.momentum_ev));
    else e.emplace_back("scenario.energy_ev", format_sci9(cfg.energy_ev.value_or(1e19)));
    if (cfg.baseline_cm) e.emplace_back("scenario.baseline_cm", format_sci9(*cfg.baseline_cm));
    else e.emplace_back("scenario.time_s", format_sci9(cfg.time_s.value_or(3.15e18)));
    e.emplace_back("scenario.flavor", std::to_string(cfg.initial_flavor));
    e.emplace_back("output.format", cfg.format == OutputFormat::Csv ? "csv" : "json");
    e.emplace_back("output.path", cfg.output_path);
    return e;
}

inline Report make_report(const char* command, const RunConfig& cfg) {
    Report r;
    r.command = command;
    r.seed = cfg.seed;
    r.config_echo = config_echo(cfg);
    return r;
}

inline double max_xi_t(const OscillationResult& res) {
    double best = 0.0;
    for (double x : res.xi_t_matrix) best = std::max(best, x);
    return best;
}

}  // namespace detail

/// Per-flavor probabilities (collapse and standard side by side), the xi
/// matrix, damping factors and log-deficits, in tidy layout.
inline Report cmd_oscillate(const RunConfig& cfg) {
    Report rep = detail::make_report("oscillate", cfg);
    const auto params = cfg.collapse_params();
    const auto model = cfg.model();
    const auto sc = cfg.scenario();
    const auto res = oscillate(params, model, sc, cfg.mode);
    CollapseParams qm = params;
    qm.gamma_cm3_per_s = 0.0;
    const auto res_qm = oscillate(qm, model, sc, cfg.mode);

    rep.columns = {"quantity", "row", "col", "value", "unit"};
    const auto n = static_cast<std::int64_t>(model.size());
    for (std::int64_t b = 0; b < n; ++b) {
        rep.rows.push_back({std::string("P_csl"), b, std::int64_t(cfg.initial_flavor),
                            res.probabilities[b], std::string("dimensionless")});
    }
    for (std::int64_t b = 0; b < n; ++b) {
        rep.rows.push_back({std::string("P_qm"), b, std::int64_t(cfg.initial_flavor),
                            res_qm.probabilities[b], std::string("dimensionless")});
    }
    for (std::int64_t j = 0; j < n; ++j) {
        for (std::int64_t k = j + 1; k < n; ++k) {
            rep.rows.push_back({std::string("xi"), j, k, res.xi_at(j, k), std::string("1/s")});
            rep.rows.push_back({std::string("xi_t"), j, k, res.xi_t_at(j, k), std::string("dimensionless")});
            rep.rows.push_back({std::string("damping"), j, k, res.damping_at(j, k), std::string("dimensionless")});
            rep.rows.push_back({std::string("log_deficit"), j, k, res.log_deficit_at(j, k), std::string("dimensionless")});
        }
    }
    if (model.has_widths()) {
        for (std::int64_t k = 0; k < n; ++k) {
            rep.rows.push_back({std::string("survival_weight"), k, k, res.survival_weights[k], std::string("dimensionless")});
        }
    }
    rep.summary.emplace_back("mode", damping_mode_name(cfg.mode));
    if (model.degenerate_masses()) {
        rep.summary.emplace_back("warning", "degenerate masses: the degenerate pair has zero collapse damping");
    }
    return rep;
}

/// One row per grid point with the full comparison set: collapse and
/// standard probabilities, damping exponent, decoherence exponent along
/// the reference path, and the ultra-relativistic phase-error exponent.
inline Report cmd_scan(const RunConfig& cfg) {
    if (cfg.scan_grid.empty()) throw ConfigError("scan.grid: a non-empty grid is required");
    Report rep = detail::make_report("scan", cfg);
    const auto params = cfg.collapse_params();
    const auto model = cfg.model();
    CollapseParams qm = params;
    qm.gamma_cm3_per_s = 0.0;

    rep.columns = {"E_eV", "t_s"};
    for (std::size_t b = 0; b < model.size(); ++b)
        rep.columns.push_back("P_csl_" + std::to_string(b) + "_dimensionless");
    for (std::size_t b = 0; b < model.size(); ++b)
        rep.columns.push_back("P_qm_" + std::to_string(b) + "_dimensionless");
    rep.columns.push_back("xi_t_max_dimensionless");
    rep.columns.push_back("deco_exponent_dimensionless");
    rep.columns.push_back("ur_error_t_dimensionless");

    const Scenario base = cfg.scenario();
    const double m_lo = model.mass_c2(0), m_hi = model.mass_c2(model.size() - 1);
    for (double g : cfg.scan_grid) {
        const Scenario sc = cfg.scan_axis == "energy"
                                ? Scenario::from_energy_time(g, base.time_s(), cfg.initial_flavor)
                                : Scenario::from_momentum_time(base.momentum_c_ev(), g, cfg.initial_flavor);
        const auto res = oscillate(params, model, sc, cfg.mode);
        const auto res_qm = oscillate(qm, model, sc, cfg.mode);
        std::vector<Cell> row = {sc.momentum_c_ev(), sc.time_s()};
        for (double p : res.probabilities) row.emplace_back(p);
        for (double p : res_qm.probabilities) row.emplace_back(p);
        row.emplace_back(detail::max_xi_t(res));
        const auto path = standard_path(sc.time_s());
        row.emplace_back(decoherence_damping(path, sc.momentum_c_ev()));
        row.emplace_back(ur_expansion_error_rate(sc.momentum_c_ev(), m_lo, m_hi) * sc.time_s());
        rep.rows.push_back(std::move(row));
    }
    rep.summary.emplace_back("scan.axis", cfg.scan_axis);
    return rep;
}

/// The three reference scenarios and their damping exponents.
inline Report cmd_table1(const RunConfig& cfg) {
    Report rep = detail::make_report("table1", cfg);
    const auto params = cfg.collapse_params();
    const double dm2 = cfg.dm2_ev2.front();
    rep.columns = {"scenario", "E_eV", "t_s", "xi_t_dimensionless"};
    for (const auto& row : table1(params, dm2)) {
        rep.rows.push_back({std::string(row.label), row.energy_ev, row.time_s, row.xi_t});
    }
    rep.summary.emplace_back("eq10_prefactor_per_s_ev2", format_sci9(eq10_prefactor(params, dm2)));
    return rep;
}

/// Gravity-collapse damping for the configured mass pair plus an
/// equal-mass scan across the plausible range.
inline Report cmd_dp(const RunConfig& cfg) {
    Report rep = detail::make_report("dp", cfg);
    DpParams p = cfg.dp_preset == "NUCLEAR"     ? DpParams::nuclear()
                 : cfg.dp_preset == "GRW_SCALE" ? DpParams::grw_scale()
                                                : DpParams::paper_chen();
    p.energy_ev = cfg.dp_energy_ev;
    p.baseline_m = cfg.dp_baseline_m;

    rep.columns = {"m_j_eV", "m_k_eV", "E_eV", "L_m", "lambda_g_dimensionless",
                   "bulk_term_dimensionless", "log_term_dimensionless"};
    auto add_row = [&](double mj, double mk) {
        DpParams q = p;
        q.m_j_c2_ev = mj;
        q.m_k_c2_ev = mk;
        const auto res = lambda_g(q);
        rep.rows.push_back({mj, mk, q.energy_ev, q.baseline_m, res.lambda_g, res.bulk_term, res.log_term});
        return res.lambda_g;
    };
    add_row(cfg.dp_m_j_ev, cfg.dp_m_k_ev);
    double lo = 1e300, hi = -1e300;
    const int n_scan = 13;
    for (int i = 0; i < n_scan; ++i) {
        const double m = 0.05 * std::pow(2.2 / 0.05, static_cast<double>(i) / (n_scan - 1));
        const double l = add_row(m, m);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    rep.summary.emplace_back("cutoff.preset", cfg.dp_preset);
    rep.summary.emplace_back("cutoff.trusted", p.cutoff_trusted ? "true" : "false");
    rep.summary.emplace_back("scan.lambda_min", format_sci9(lo));
    rep.summary.emplace_back("scan.lambda_max", format_sci9(hi));
    rep.summary.emplace_back("scan.intersects_window_1e-2_to_1",
                             (hi >= 1e-2 && lo <= 1.0) ? "true" : "false");
    return rep;
}

/// Environmental decoherence rates and accumulated exponents, next to the
/// collapse exponent for the same scenario.
inline Report cmd_decoherence(const RunConfig& cfg) {
    Report rep = detail::make_report("decoherence", cfg);
    const auto sc = cfg.scenario();
    const double e = sc.momentum_c_ev();
    const auto params = cfg.collapse_params();
    const auto model = cfg.model();
    const auto res = oscillate(params, model, sc, cfg.mode);
    const double xi_t = detail::max_xi_t(res);

    rep.columns = {"quantity", "label", "value", "unit"};
    const auto out_env = Environment::outer_space();
    const auto atm_env = Environment::atmosphere();
    rep.rows.push_back({std::string("rate"), std::string(environment_name(out_env.label)),
                        decoherence_rate(out_env, e), std::string("1/s")});
    rep.rows.push_back({std::string("rate"), std::string(environment_name(atm_env.label)),
                        decoherence_rate(atm_env, e), std::string("1/s")});
    const auto path = standard_path(sc.time_s());
    const double exponent = decoherence_damping(path, e);
    rep.rows.push_back({std::string("damping_exponent"), std::string("standard_path"), exponent,
                        std::string("dimensionless")});
    rep.rows.push_back({std::string("xi_t_max"), std::string("collapse"), xi_t, std::string("dimensionless")});
    if (xi_t > 0.0) {
        rep.rows.push_back({std::string("exponent_ratio"), std::string("decoherence_over_collapse"),
                            exponent / xi_t, std::string("dimensionless")});
    }
    return rep;
}

/// Synthetic-regime phase-noise run: emits the ensemble-averaged
/// interference series and the fitted decay rate.
inline Report cmd_montecarlo(const RunConfig& cfg) {
    Report rep = detail::make_report("montecarlo", cfg);
    if (!(cfg.mc_rate_per_s >= 0.0)) throw ConfigError("mc.rate_per_s: must be non-negative");
    PhaseNoiseModel model;
    model.sigma = {std::sqrt(2.0 * cfg.mc_rate_per_s), 0.0};
    model.omega = {0.0, cfg.mc_delta_omega_per_s};
    McConfig mc{cfg.mc_n_paths, cfg.mc_dt_s, cfg.mc_t_max_s, cfg.seed};
    const auto series = simulate_interference(model, 0, 1, mc);
    const auto fit = fit_decay_rate(series);

    rep.columns = {"t_s", "mean_re_dimensionless", "mean_im_dimensionless", "mean_abs_dimensionless",
                   "std_error_dimensionless"};
    for (const auto& pt : series.points) {
        rep.rows.push_back({pt.t_s, pt.mean.real(), pt.mean.imag(), std::abs(pt.mean), pt.std_error});
    }
    rep.summary.emplace_back("target_rate_per_s", format_sci9(cfg.mc_rate_per_s));
    rep.summary.emplace_back("fitted_rate_per_s", format_sci9(fit.rate_per_s));
    rep.summary.emplace_back("fit_std_error_per_s", format_sci9(fit.std_error));
    rep.summary.emplace_back("n_paths", std::to_string(cfg.mc_n_paths));
    return rep;
}

struct CheckOutcome {
    Report report;
    bool all_passed = true;
};

/// The verification report: quadrature checks of both reduced-integral
/// approximations, the dimensional-analysis spread, and the sigma-mapping
/// identity, each with measured error against its threshold.
inline CheckOutcome cmd_check(const RunConfig& cfg) {
    CheckOutcome out;
    out.report = detail::make_report("check", cfg);
    auto& rep = out.report;
    rep.columns = {"check", "parameters", "measured", "threshold", "status"};

    auto add = [&](const std::string& name, const std::string& params, double measured,
                   double threshold, bool pass, const char* status_override = nullptr) {
        std::string status = status_override ? status_override : (pass ? "PASS" : "FAIL");
        if (!status_override && !pass) out.all_passed = false;
        rep.rows.push_back({name, params, measured, threshold, status});
    };
    // a non-converging oracle is a FAIL row, never a silent value
    auto guarded = [&](const std::string& name, const std::string& params, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            out.all_passed = false;
            rep.rows.push_back({name, params + " error: " + e.what(),
                                std::numeric_limits<double>::quiet_NaN(), 0.0, std::string("FAIL")});
        }
    };

    // Gaussian-weighted dispersion integral: massless regime, then the
    // working grid, then monotone improvement with y.
    guarded("dispersion_massless", "y=10 a=0", [&] {
        DimensionlessRegime r{10.0, 0.0, 0.0, 0.0};
        const auto res = dispersion_integral_check(r);
        add("dispersion_massless", "y=10 a=0", res.relative_error, 1e-6, res.relative_error <= 1e-6);
    });
    double prev_err = -1.0;
    double worst_ratio = 0.0;
    for (double y : {1e3, 1e4, 1e5, 1e6}) {
        for (double a : {0.0, 1e-2, 1e-1}) {
            const std::string params = "y=" + format_sci9(y) + " a=" + format_sci9(a);
            guarded("dispersion_grid", params, [&] {
                DimensionlessRegime r{y, a, 0.0, 0.0};
                const auto res = dispersion_integral_check(r);
                add("dispersion_grid", params, res.relative_error, 1e-3, res.relative_error <= 1e-3);
                if (a == 1e-1) {
                    if (prev_err > 0.0) worst_ratio = std::max(worst_ratio, res.relative_error / prev_err);
                    prev_err = res.relative_error;
                }
            });
        }
    }
    add("dispersion_monotone", "a=1e-1 geometric y grid", worst_ratio, 1.0,
        worst_ratio > 0.0 && worst_ratio < 1.0);

    // Oscillatory integral: exact-at-tau=0, the validity grid, optionally a
    // deliberately violated regime (informational).
    guarded("oscillatory_tau0", "y=1e3 a_j=1e-2 tau=0", [&] {
        DimensionlessRegime r{1e3, 1e-2, 0.0, 0.0};
        const auto res = oscillatory_integral_check(r);
        add("oscillatory_tau0", "y=1e3 a_j=1e-2 tau=0", res.deviation, 1e-6, res.deviation <= 1e-6);
    });
    {
        const struct {
            double tau, y, aj;
        } pts[] = {{1e6, 1e3, 1e-4}, {1e8, 1e4, 1e-2}, {1e32, 1e18, 1e-5}};
        for (const auto& p : pts) {
            const std::string params =
                "tau=" + format_sci9(p.tau) + " y=" + format_sci9(p.y) + " a_j=" + format_sci9(p.aj);
            guarded("oscillatory_grid", params, [&] {
                DimensionlessRegime r{p.y, p.aj, 0.0, p.tau};
                const auto res = oscillatory_integral_check(r);
                add("oscillatory_grid",
                    params + (res.condition_satisfied ? " cond=true" : " cond=false"), res.deviation,
                    1e-3, res.condition_satisfied && res.deviation <= 1e-3);
            });
        }
    }
    if (cfg.check_include_violations) {
        guarded("oscillatory_violated", "tau=1e8 y=1e3 a_j=1e-2", [&] {
            DimensionlessRegime r{1e3, 1e-2, 0.0, 1e8};  // y = sqrt(tau da) exactly
            const auto res = oscillatory_integral_check(r);
            add("oscillatory_violated",
                std::string("tau=1e8 y=1e3 a_j=1e-2 cond=") +
                    (res.condition_satisfied ? "true" : "false"),
                res.deviation, 1e-2, true, "INFO");
        });
    }

    // Dimensional-analysis guesses vs the exact rate, reference
    // configuration (Adler coupling, cosmogenic flight, 0.1 eV anchor).
    {
        const auto params = CollapseParams::adler();
        const double mj = 0.1, mk = std::sqrt(0.1 * 0.1 + kReferenceDm2Ev2);
        const auto est = dimensional_estimates(params, mj, mk, 1e19, 3.15e18);
        const double spread1 = std::log10(est.xi1_t / est.xi_exact_t);
        const double spread2 = std::log10(est.xi2_t / est.xi_exact_t);
        add("dimensional_estimate_spread", "xi1 vs exact (cosmogenic)", spread1, 10.0, spread1 >= 10.0);
        add("dimensional_estimate_spread", "xi2 vs exact (cosmogenic)", spread2, 10.0, spread2 >= 10.0);
    }

    // Sigma-mapping identity (sigma_j - sigma_k)^2 / 2 == xi_jk on random
    // mass/momentum draws with the configured collapse parameters.
    {
        const auto params = cfg.collapse_params();
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> log_mass(std::log(1e-3), std::log(2.2));
        std::uniform_real_distribution<double> ratio(1.1, 3.0);
        std::uniform_real_distribution<double> log_p(std::log(1e3), std::log(1e19));
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double mj = std::exp(log_mass(rng));
            const double mk = mj * ratio(rng);
            const double pc = std::exp(log_p(rng));
            const auto model = NeutrinoModel::two_flavor(std::numbers::pi / 4.0, mk * mk - mj * mj, mj);
            const auto sc = Scenario::from_momentum_time(pc, 1.0, 0);
            const double sj = csl_phase_noise_sigma(params, mj, energy(pc, mj));
            const double sk = csl_phase_noise_sigma(params, mk, energy(pc, mk));
            const double lhs = 0.5 * (sj - sk) * (sj - sk);
            const double rhs = xi(params, model, sc, 0, 1);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
        }
        add("mc_identity", "100 random draws", worst, 1e-12, worst <= 1e-12);
    }
    rep.summary.emplace_back("all_passed", out.all_passed ? "true" : "false");
    return out;
}

/// Render a command's report and write it to the configured destination.
/// Exit codes: 0 success, 1 validation error (thrown before this point),
/// 2 failed check assertions.
inline int run_command(const std::string& name, const RunConfig& cfg, std::ostream& console) {
    Report rep;
    int code = 0;
    if (name == "oscillate") rep = cmd_oscillate(cfg);
    else if (name == "scan") rep = cmd_scan(cfg);
    else if (name == "table1") rep = cmd_table1(cfg);
    else if (name == "dp") rep = cmd_dp(cfg);
    else if (name == "decoherence") rep = cmd_decoherence(cfg);
    else if (name == "montecarlo") rep = cmd_montecarlo(cfg);
    else if (name == "check") {
        auto outcome = cmd_check(cfg);
        rep = outcome.report;
        if (!outcome.all_passed) code = 2;
    } else {
        throw ConfigError("unknown subcommand '" + name + "'");
    }
    const std::string text = cfg.format == OutputFormat::Csv ? to_csv(rep) : to_json(rep);
    if (cfg.output_path == "-") {
        console << text;
    } else {
        std::ofstream file(cfg.output_path, std::ios::binary);
        if (!file) throw ConfigError("output.path: cannot open '" + cfg.output_path + "' for writing");
        file << text;
    }
    return code;
}

}  // namespace nudamp
