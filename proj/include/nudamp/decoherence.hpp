#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nudamp/units.hpp"

namespace nudamp {

enum class EnvironmentKind { OuterSpace, Atmosphere };

inline const char* environment_name(EnvironmentKind k) {
    return k == EnvironmentKind::OuterSpace ? "outer_space" : "atmosphere";
}

/// Scattering environment: lepton densities and a default traversal time.
/// Presets carry the reference values n_e = 1e-6 /cm^3 (outer space),
/// n_e = 2e20 /cm^3 (atmosphere), n_nu = 1e2 /cm^3 everywhere, and a 1e-4 s
/// atmospheric crossing.
struct Environment {
    double electron_density_per_cm3 = 0.0;
    double neutrino_density_per_cm3 = 0.0;
    double traversal_time_s = 0.0;
    EnvironmentKind label = EnvironmentKind::OuterSpace;

    static Environment outer_space() { return {1e-6, 1e2, 0.0, EnvironmentKind::OuterSpace}; }
    static Environment atmosphere() { return {2e20, 1e2, 1e-4, EnvironmentKind::Atmosphere}; }

    void validate() const {
        if (electron_density_per_cm3 < 0.0 || neutrino_density_per_cm3 < 0.0) {
            throw std::invalid_argument("Environment: densities must be non-negative");
        }
        if (traversal_time_s < 0.0) throw std::invalid_argument("Environment: traversal time must be non-negative");
    }
};

enum class ScatterPair { NuEElectron, NuMuElectron, NuENuE, NuENuMu };

/// Linear-in-energy cross sections sigma = coeff * (E/GeV), in cm^2.
struct CrossSectionSet {
    double nu_e_electron_cm2_per_gev = 7e-42;
    double nu_mu_electron_cm2_per_gev = 1e-42;
    double nu_e_nu_e_cm2_per_gev = 2.8e-47;
    double nu_e_nu_mu_cm2_per_gev = 4e-48;

    void validate() const {
        if (!(nu_e_electron_cm2_per_gev > 0.0) || !(nu_mu_electron_cm2_per_gev > 0.0) ||
            !(nu_e_nu_e_cm2_per_gev > 0.0) || !(nu_e_nu_mu_cm2_per_gev > 0.0)) {
            throw std::invalid_argument("CrossSectionSet: coefficients must be positive");
        }
    }

    double coefficient(ScatterPair pair) const {
        switch (pair) {
            case ScatterPair::NuEElectron: return nu_e_electron_cm2_per_gev;
            case ScatterPair::NuMuElectron: return nu_mu_electron_cm2_per_gev;
            case ScatterPair::NuENuE: return nu_e_nu_e_cm2_per_gev;
            case ScatterPair::NuENuMu: return nu_e_nu_mu_cm2_per_gev;
        }
        throw std::invalid_argument("CrossSectionSet: unknown scattering pair");
    }
};

/// sigma(pair, E) in cm^2, linear in E.
inline double cross_section(ScatterPair pair, double energy_ev, const CrossSectionSet& xs = {}) {
    xs.validate();
    if (!(energy_ev > 0.0)) throw std::invalid_argument("cross_section: energy must be positive");
    return xs.coefficient(pair) * (energy_ev / 1e9);
}

/// Order-of-magnitude decoherence rate Lambda ~ n v sigma [1/s], with v = c
/// and the flavor-differential channels summed: electron scattering off the
/// environment electrons plus nu-nu scattering off the relic background.
/// Proton scattering is flavor-blind and does not damp oscillations.
inline double decoherence_rate(const Environment& env, double energy_ev, const CrossSectionSet& xs = {}) {
    env.validate();
    const double c = constants.c_cm_per_s;
    return env.electron_density_per_cm3 * c * cross_section(ScatterPair::NuEElectron, energy_ev, xs) +
           env.neutrino_density_per_cm3 * c *
               (cross_section(ScatterPair::NuENuE, energy_ev, xs) +
                cross_section(ScatterPair::NuENuMu, energy_ev, xs));
}

using PathSegment = std::pair<Environment, double>;  // (environment, duration s)

/// Accumulated damping exponent sum_i Lambda(env_i, E) * duration_i along a
/// flight path.
inline double decoherence_damping(std::span<const PathSegment> path, double energy_ev,
                                  const CrossSectionSet& xs = {}) {
    double exponent = 0.0;
    for (const auto& [env, duration] : path) {
        if (duration < 0.0) throw std::invalid_argument("decoherence_damping: durations must be non-negative");
        exponent += decoherence_rate(env, energy_ev, xs) * duration;
    }
    return exponent;
}

/// The reference flight path: outer space for the flight time, then the
/// atmospheric crossing.
inline std::vector<PathSegment> standard_path(double flight_time_s) {
    return {{Environment::outer_space(), flight_time_s},
            {Environment::atmosphere(), Environment::atmosphere().traversal_time_s}};
}

}  // namespace nudamp
