// Command-line front door: one subcommand per physics module, config file
// plus key=value overrides, CSV/JSON emission.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nudamp/runner.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "Config file (TOML-style key = value)");
    cmd->add_option("--out", opt.out_path, "Output path ('-' for stdout)");
    cmd->add_option("--format", opt.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opt.seed, "Random seed / provenance tag");
    cmd->add_option("overrides", opt.overrides, "key=value config overrides");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neutrino oscillation damping: collapse models, decoherence, verification oracles"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"oscillate", "Flavor transition probabilities with and without collapse damping"},
        {"scan", "Probability / damping scan along an energy or time grid"},
        {"table1", "The three reference scenarios and their damping exponents"},
        {"dp", "Gravity-induced (Diosi-Penrose) damping comparison"},
        {"decoherence", "Environmental decoherence rates and exponents"},
        {"check", "Run the numerical verification oracles (exit 2 on failure)"},
        {"montecarlo", "Phase-noise Monte Carlo: interference series and decay fit"},
    };
    CommonOptions opt;
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), opt);

    CLI11_PARSE(app, argc, argv);
    const std::string name = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();

    try {
        nudamp::RawConfig raw;
        if (!opt.config_path.empty()) {
            std::ifstream in(opt.config_path);
            if (!in) {
                std::cerr << "error: cannot read config file '" << opt.config_path << "'\n";
                return 1;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            raw = nudamp::RawConfig::parse_text(ss.str());
        }
        for (const auto& ov : opt.overrides) raw.set(ov);
        // dedicated flags outrank file values and positional overrides
        if (sub->count("--out")) raw.values["output.path"] = opt.out_path;
        if (sub->count("--format")) raw.values["output.format"] = opt.format;
        if (sub->count("--seed")) raw.values["seed"] = std::to_string(opt.seed);

        const nudamp::RunConfig cfg = nudamp::RunConfig::from_raw(raw);
        return nudamp::run_command(name, cfg, std::cout);
    } catch (const nudamp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        // oracle non-convergence and other computation failures
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
}
