#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nudamp/csl.hpp"
#include "nudamp/neutrino.hpp"

namespace nudamp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

inline double parse_double(const std::string& key, const std::string& raw) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(key + ": expected a number, got '" + raw + "'");
    return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& raw) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(raw, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + raw + "'");
    }
    if (pos != raw.size()) throw ConfigError(key + ": expected a non-negative integer, got '" + raw + "'");
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& raw) {
    if (raw == "true") return true;
    if (raw == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + raw + "'");
}

inline std::vector<double> parse_double_list(const std::string& key, std::string raw) {
    raw = trim(raw);
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
        throw ConfigError(key + ": expected a [..] list, got '" + raw + "'");
    }
    std::vector<double> out;
    std::string inner = raw.substr(1, raw.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key + ": empty list element");
        out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace detail

/// Flat key/value view of a TOML-style config file: `key = value` lines,
/// `[section]` headers prefixing the keys below them, `#` comments, arrays
/// as `[a, b, c]`. Later assignments win, which is also how CLI overrides
/// are layered on top of file values.
struct RawConfig {
    std::map<std::string, std::string> values;

    static RawConfig parse_text(const std::string& text) {
        RawConfig out;
        std::string section;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']') {
                section = detail::trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" + line + "'");
            }
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" + line + "'");
            }
            if (!section.empty()) key = section + "." + key;
            out.values[key] = value;
        }
        return out;
    }

    /// A single `key=value` override (flag layer beats file layer).
    void set(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size()) {
            throw ConfigError("override must look like key=value, got '" + assignment + "'");
        }
        values[detail::trim(assignment.substr(0, eq))] = detail::trim(assignment.substr(eq + 1));
    }
};

enum class OutputFormat { Csv, Json };

/// Fully resolved run configuration. An empty input reproduces the
/// reference-table run: Adler-strength collapse, two flavors with
/// dm2 = 7.59e-5 eV^2 and maximal mixing, the cosmogenic scenario.
/// Unknown keys are rejected by name.
struct RunConfig {
    // collapse
    double gamma_cm3_per_s = 1e-22;
    double r_c_cm = 1e-5;
    double m0c2_ev = constants.m0c2_ev;
    std::string collapse_preset = "ADLER";
    // model
    std::size_t n_flavors = 2;
    std::vector<double> dm2_ev2 = {kReferenceDm2Ev2};
    double lightest_mass_ev = 0.0;
    std::optional<double> theta_rad;
    std::optional<std::vector<double>> mixing_row_major;
    std::optional<std::vector<double>> widths_ev;
    // scenario
    std::optional<double> energy_ev;
    std::optional<double> momentum_ev;
    std::optional<double> time_s;
    std::optional<double> baseline_cm;
    std::size_t initial_flavor = 0;
    // output
    OutputFormat format = OutputFormat::Csv;
    std::string output_path = "-";
    // run mode
    DampingMode mode = DampingMode::Exponential;
    std::uint64_t seed = 12345;
    // scan
    std::string scan_axis = "energy";
    std::vector<double> scan_grid;
    // monte carlo
    std::size_t mc_n_paths = 10000;
    double mc_dt_s = 0.1;
    double mc_t_max_s = 10.0;
    double mc_rate_per_s = 0.1;
    double mc_delta_omega_per_s = 0.0;
    // gravitational-collapse comparison
    double dp_m_j_ev = 0.05;
    double dp_m_k_ev = 0.06;
    double dp_energy_ev = 1e19;
    double dp_baseline_m = 1e25;
    std::string dp_preset = "PAPER_CHEN";
    // verification report
    bool check_include_violations = false;

    static const std::vector<std::string>& known_keys() {
        static const std::vector<std::string> keys = {
            "mode", "seed",
            "collapse.preset", "collapse.gamma_cm3_per_s", "collapse.r_c_cm", "collapse.m0c2_ev",
            "model.n", "model.dm2_ev2", "model.lightest_mass_ev", "model.theta_rad",
            "model.mixing", "model.widths_ev",
            "scenario.energy_ev", "scenario.momentum_ev", "scenario.time_s", "scenario.baseline_cm",
            "scenario.flavor",
            "output.format", "output.path",
            "scan.axis", "scan.grid",
            "mc.n_paths", "mc.dt_s", "mc.t_max_s", "mc.rate_per_s", "mc.delta_omega_per_s",
            "dp.m_j_ev", "dp.m_k_ev", "dp.energy_ev", "dp.baseline_m", "dp.preset",
            "check.include_violations",
        };
        return keys;
    }

    static RunConfig from_raw(const RawConfig& raw) {
        using detail::parse_bool;
        using detail::parse_double;
        using detail::parse_double_list;
        using detail::parse_uint;
        const auto& known = known_keys();
        for (const auto& [key, value] : raw.values) {
            (void)value;
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
        RunConfig cfg;
        auto get = [&raw](const std::string& key) -> std::optional<std::string> {
            auto it = raw.values.find(key);
            if (it == raw.values.end()) return std::nullopt;
            return it->second;
        };

        if (auto v = get("mode")) {
            const std::string m = detail::unquote(*v);
            if (m == "EXPONENTIAL") cfg.mode = DampingMode::Exponential;
            else if (m == "LINEAR") cfg.mode = DampingMode::Linear;
            else throw ConfigError("mode: expected EXPONENTIAL or LINEAR, got '" + m + "'");
        }
        if (auto v = get("seed")) cfg.seed = parse_uint("seed", *v);

        if (auto v = get("collapse.preset")) {
            const std::string p = detail::unquote(*v);
            if (p == "ADLER") { cfg.collapse_preset = p; cfg.gamma_cm3_per_s = 1e-22; }
            else if (p == "GRW") { cfg.collapse_preset = p; cfg.gamma_cm3_per_s = 1e-30; }
            else throw ConfigError("collapse.preset: expected ADLER or GRW, got '" + p + "'");
        }
        if (auto v = get("collapse.gamma_cm3_per_s")) {
            cfg.gamma_cm3_per_s = parse_double("collapse.gamma_cm3_per_s", *v);
            cfg.collapse_preset = "custom";
        }
        if (auto v = get("collapse.r_c_cm")) cfg.r_c_cm = parse_double("collapse.r_c_cm", *v);
        if (auto v = get("collapse.m0c2_ev")) cfg.m0c2_ev = parse_double("collapse.m0c2_ev", *v);

        if (auto v = get("model.n")) cfg.n_flavors = parse_uint("model.n", *v);
        if (auto v = get("model.dm2_ev2")) cfg.dm2_ev2 = parse_double_list("model.dm2_ev2", *v);
        if (auto v = get("model.lightest_mass_ev")) cfg.lightest_mass_ev = parse_double("model.lightest_mass_ev", *v);
        if (auto v = get("model.theta_rad")) cfg.theta_rad = parse_double("model.theta_rad", *v);
        if (auto v = get("model.mixing")) cfg.mixing_row_major = parse_double_list("model.mixing", *v);
        if (auto v = get("model.widths_ev")) cfg.widths_ev = parse_double_list("model.widths_ev", *v);

        if (auto v = get("scenario.energy_ev")) cfg.energy_ev = parse_double("scenario.energy_ev", *v);
        if (auto v = get("scenario.momentum_ev")) cfg.momentum_ev = parse_double("scenario.momentum_ev", *v);
        if (auto v = get("scenario.time_s")) cfg.time_s = parse_double("scenario.time_s", *v);
        if (auto v = get("scenario.baseline_cm")) cfg.baseline_cm = parse_double("scenario.baseline_cm", *v);
        if (auto v = get("scenario.flavor")) cfg.initial_flavor = parse_uint("scenario.flavor", *v);

        if (auto v = get("output.format")) {
            const std::string f = detail::unquote(*v);
            if (f == "csv") cfg.format = OutputFormat::Csv;
            else if (f == "json") cfg.format = OutputFormat::Json;
            else throw ConfigError("output.format: expected csv or json, got '" + f + "'");
        }
        if (auto v = get("output.path")) cfg.output_path = detail::unquote(*v);

        if (auto v = get("scan.axis")) {
            const std::string a = detail::unquote(*v);
            if (a != "energy" && a != "time") throw ConfigError("scan.axis: expected energy or time, got '" + a + "'");
            cfg.scan_axis = a;
        }
        if (auto v = get("scan.grid")) cfg.scan_grid = parse_double_list("scan.grid", *v);

        if (auto v = get("mc.n_paths")) cfg.mc_n_paths = parse_uint("mc.n_paths", *v);
        if (auto v = get("mc.dt_s")) cfg.mc_dt_s = parse_double("mc.dt_s", *v);
        if (auto v = get("mc.t_max_s")) cfg.mc_t_max_s = parse_double("mc.t_max_s", *v);
        if (auto v = get("mc.rate_per_s")) cfg.mc_rate_per_s = parse_double("mc.rate_per_s", *v);
        if (auto v = get("mc.delta_omega_per_s")) cfg.mc_delta_omega_per_s = parse_double("mc.delta_omega_per_s", *v);

        if (auto v = get("dp.m_j_ev")) cfg.dp_m_j_ev = parse_double("dp.m_j_ev", *v);
        if (auto v = get("dp.m_k_ev")) cfg.dp_m_k_ev = parse_double("dp.m_k_ev", *v);
        if (auto v = get("dp.energy_ev")) cfg.dp_energy_ev = parse_double("dp.energy_ev", *v);
        if (auto v = get("dp.baseline_m")) cfg.dp_baseline_m = parse_double("dp.baseline_m", *v);
        if (auto v = get("dp.preset")) {
            const std::string p = detail::unquote(*v);
            if (p != "PAPER_CHEN" && p != "NUCLEAR" && p != "GRW_SCALE") {
                throw ConfigError("dp.preset: expected PAPER_CHEN, NUCLEAR or GRW_SCALE, got '" + p + "'");
            }
            cfg.dp_preset = p;
        }
        if (auto v = get("check.include_violations")) {
            cfg.check_include_violations = parse_bool("check.include_violations", *v);
        }

        cfg.validate(raw);
        return cfg;
    }

    void validate(const RawConfig& raw) const {
        auto has = [&raw](const char* k) { return raw.values.count(k) > 0; };
        if (has("scenario.energy_ev") && has("scenario.momentum_ev")) {
            throw ConfigError("scenario.energy_ev and scenario.momentum_ev are mutually exclusive");
        }
        if (has("scenario.time_s") && has("scenario.baseline_cm")) {
            throw ConfigError("scenario.time_s and scenario.baseline_cm are mutually exclusive");
        }
        if (has("model.theta_rad") && has("model.mixing")) {
            throw ConfigError("model.theta_rad and model.mixing are mutually exclusive");
        }
        if (has("collapse.preset") && has("collapse.gamma_cm3_per_s")) {
            throw ConfigError("collapse.preset and collapse.gamma_cm3_per_s are mutually exclusive");
        }
        if (n_flavors < 2) throw ConfigError("model.n: need at least 2 flavors");
        if (dm2_ev2.size() != n_flavors - 1) {
            throw ConfigError("model.dm2_ev2: expected " + std::to_string(n_flavors - 1) +
                              " splittings for n = " + std::to_string(n_flavors));
        }
        if (theta_rad && n_flavors != 2) throw ConfigError("model.theta_rad: only valid for model.n = 2");
        if (n_flavors > 2 && !mixing_row_major) {
            throw ConfigError("model.mixing: an explicit matrix is required for model.n > 2");
        }
        if (mixing_row_major && mixing_row_major->size() != n_flavors * n_flavors) {
            throw ConfigError("model.mixing: expected " + std::to_string(n_flavors * n_flavors) +
                              " row-major entries");
        }
        if (widths_ev && widths_ev->size() != n_flavors) {
            throw ConfigError("model.widths_ev: expected one width per eigenstate");
        }
        if (initial_flavor >= n_flavors) throw ConfigError("scenario.flavor: out of range");
        for (std::size_t i = 1; i < scan_grid.size(); ++i) {
            if (!(scan_grid[i] > scan_grid[i - 1])) throw ConfigError("scan.grid: must be strictly increasing");
        }
        for (double g : scan_grid) {
            if (!(g > 0.0)) throw ConfigError("scan.grid: entries must be positive");
        }
    }

    CollapseParams collapse_params() const {
        CollapseParams p{gamma_cm3_per_s, r_c_cm, m0c2_ev};
        p.validate();
        return p;
    }

    NeutrinoModel model() const {
        std::vector<double> widths = widths_ev.value_or(std::vector<double>{});
        if (mixing_row_major) {
            std::vector<std::vector<double>> rows(n_flavors, std::vector<double>(n_flavors));
            for (std::size_t a = 0; a < n_flavors; ++a)
                for (std::size_t j = 0; j < n_flavors; ++j) rows[a][j] = (*mixing_row_major)[a * n_flavors + j];
            return NeutrinoModel::from_splittings(dm2_ev2, lightest_mass_ev, std::move(rows), std::move(widths));
        }
        if (n_flavors == 2) {
            const double theta = theta_rad.value_or(std::numbers::pi / 4.0);
            return NeutrinoModel::two_flavor(theta, dm2_ev2[0], lightest_mass_ev, std::move(widths));
        }
        throw ConfigError("model.mixing: required for model.n > 2");
    }

    Scenario scenario() const {
        if (momentum_ev) {
            if (baseline_cm) return Scenario::from_momentum_baseline(*momentum_ev, *baseline_cm, initial_flavor);
            return Scenario::from_momentum_time(*momentum_ev, time_s.value_or(3.15e18), initial_flavor);
        }
        const double e = energy_ev.value_or(1e19);
        if (baseline_cm) return Scenario::from_energy_baseline(e, *baseline_cm, initial_flavor);
        return Scenario::from_energy_time(e, time_s.value_or(3.15e18), initial_flavor);
    }
};

}  // namespace nudamp
