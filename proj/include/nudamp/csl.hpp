#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nudamp/neutrino.hpp"
#include "nudamp/units.hpp"

namespace nudamp {

/// Phenomenological constants of the mass-proportional collapse noise:
/// coupling strength gamma [cm^3/s], correlation length r_C [cm], and the
/// nucleon reference rest energy. The mass scaling is
/// gamma_m = gamma (m/m0)^2.
struct CollapseParams {
    double gamma_cm3_per_s = 1e-22;
    double r_c_cm = 1e-5;
    double m0c2_ev = constants.m0c2_ev;

    /// Historical GRW-strength coupling.
    static CollapseParams grw() { return {1e-30, 1e-5, constants.m0c2_ev}; }
    /// Adler's latent-image-formation coupling (the stronger value).
    static CollapseParams adler() { return {1e-22, 1e-5, constants.m0c2_ev}; }

    void validate() const {
        if (gamma_cm3_per_s < 0.0) throw std::invalid_argument("CollapseParams: gamma must be >= 0");
        if (!(r_c_cm > 0.0)) throw std::invalid_argument("CollapseParams: r_C must be positive");
        if (!(m0c2_ev > 0.0)) throw std::invalid_argument("CollapseParams: m0 must be positive");
    }

    double gamma_m(double mass_c2_ev) const {
        const double r = mass_c2_ev / m0c2_ev;
        return gamma_cm3_per_s * r * r;
    }
};

enum class DampingMode { Linear, Exponential };

inline const char* damping_mode_name(DampingMode m) {
    return m == DampingMode::Linear ? "LINEAR" : "EXPONENTIAL";
}

namespace detail {

/// m_j^2 c^4 / E_j - m_k^2 c^4 / E_k at shared momentum, rewritten as
///   dm2 * (E_lo - m_lo^2 c^4 / (E_lo + E_hi)) / (E_lo E_hi)
/// which is free of the near-degenerate cancellation of the direct form.
/// Returned squared; canonical (lo,hi) ordering makes it exactly symmetric.
inline double mass_energy_ratio_gap_sq(double m_lo_c2, double m_hi_c2, double momentum_c_ev) {
    const double dm2 = (m_hi_c2 - m_lo_c2) * (m_hi_c2 + m_lo_c2);
    if (dm2 == 0.0) return 0.0;
    const double e_lo = energy(momentum_c_ev, m_lo_c2);
    const double e_hi = energy(momentum_c_ev, m_hi_c2);
    const double bracket = e_lo - m_lo_c2 * m_lo_c2 / (e_lo + e_hi);
    const double b = dm2 * bracket / (e_lo * e_hi);
    return b * b;
}

inline double xi_prefactor(const CollapseParams& p) {
    const double rc3 = p.r_c_cm * p.r_c_cm * p.r_c_cm;
    const double m02 = p.m0c2_ev * p.m0c2_ev;
    return p.gamma_cm3_per_s / (16.0 * std::pow(std::numbers::pi, 1.5) * rc3 * m02);
}

}  // namespace detail

/// Collapse-predicted decay rate [1/s] of the (j,k) oscillation
/// interference term,
///   xi_jk = gamma / (16 pi^3/2 r_C^3 m0^2 c^4)
///           * (m_j^2 c^4 / E_j - m_k^2 c^4 / E_k)^2,
/// with exact dispersion energies. Symmetric, zero on the diagonal,
/// linear in gamma, and vanishing in the massless limit.
inline double xi(const CollapseParams& params, const NeutrinoModel& model, const Scenario& sc,
                 std::size_t j, std::size_t k) {
    params.validate();
    model.require_index(j, "xi");
    model.require_index(k, "xi");
    if (j == k) return 0.0;
    const std::size_t lo = std::min(j, k), hi = std::max(j, k);
    return detail::xi_prefactor(params) *
           detail::mass_energy_ratio_gap_sq(model.mass_c2(lo), model.mass_c2(hi), sc.momentum_c_ev());
}

/// Ultra-relativistic pipeline: gamma dm2^2 / (16 pi^3/2 r_C^3 m0^2 c^4),
/// in s^-1 eV^2; xi ~ prefactor / E^2. With the Adler coupling and
/// dm2 = 7.59e-5 eV^2 this evaluates to 7.34e-36 s^-1 eV^2.
inline double eq10_prefactor(const CollapseParams& params, double dm2_ev2) {
    params.validate();
    return detail::xi_prefactor(params) * dm2_ev2 * dm2_ev2;
}

/// Interference damping factor for a given mode: exp(-xi t) resummed, or
/// the perturbative 1 - xi t.
inline double damping_factor(DampingMode mode, double xi_t) {
    return mode == DampingMode::Exponential ? std::exp(-xi_t) : 1.0 - xi_t;
}

/// Full per-scenario output: per-flavor probabilities, the xi matrix, the
/// damping factors, and the log-deficit ln D = -xi t, which survives in
/// output when xi t ~ 1e-55 underflows any representation of 1 - D.
struct OscillationResult {
    std::size_t initial_flavor = 0;
    DampingMode mode = DampingMode::Exponential;
    std::vector<double> probabilities;      // per final flavor beta
    std::vector<double> xi_matrix;          // n*n, row-major, [1/s]
    std::vector<double> xi_t_matrix;        // n*n, dimensionless
    std::vector<double> damping_factors;    // n*n, D_jk(t)
    std::vector<double> survival_weights;   // exp(-Gamma_k t / hbar)

    std::size_t size() const { return probabilities.size(); }
    double xi_at(std::size_t j, std::size_t k) const { return xi_matrix.at(j * size() + k); }
    double xi_t_at(std::size_t j, std::size_t k) const { return xi_t_matrix.at(j * size() + k); }
    double damping_at(std::size_t j, std::size_t k) const { return damping_factors.at(j * size() + k); }
    double log_deficit_at(std::size_t j, std::size_t k) const { return -xi_t_at(j, k); }
};

namespace detail {

inline double probability_impl(const CollapseParams& params, const NeutrinoModel& model,
                               const Scenario& sc, std::size_t beta, DampingMode mode,
                               bool with_widths) {
    model.require_index(beta, "transition_probability");
    const std::size_t n = model.size();
    const std::size_t alpha = sc.initial_flavor();
    model.require_index(alpha, "transition_probability");
    const double t = sc.time_s();
    const double hbar = constants.hbar_ev_s;

    double p = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double diag = model.mixing(alpha, k) * model.mixing(beta, k);
        double w = 1.0;
        if (with_widths) w = std::exp(-model.width_ev(k) * t / hbar);
        p += diag * diag * w;
    }
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            const double xi_t = xi(params, model, sc, j, k) * t;
            if (mode == DampingMode::Linear && xi_t > 1.0) {
                throw std::domain_error(
                    "transition_probability: xi*t = " + std::to_string(xi_t) +
                    " > 1 exceeds the perturbative validity of the LINEAR damping form");
            }
            const double phase = energy_gap(sc, model, j, k) * t / hbar;
            double w = 1.0;
            if (with_widths) {
                w = std::exp(-(model.width_ev(k) + model.width_ev(j)) * t / (2.0 * hbar));
            }
            p += 2.0 * model.mixing(alpha, k) * model.mixing(beta, k) * model.mixing(alpha, j) *
                 model.mixing(beta, j) * damping_factor(mode, xi_t) * w * std::cos(phase);
        }
    }
    return p;
}

}  // namespace detail

/// Flavor transition probability alpha -> beta under collapse damping,
///   P = sum_k U_ak^2 U_bk^2
///     + sum_{k != j} U_ak U_bk U_aj U_bj D_jk(t) cos[(E_k - E_j) t / hbar],
/// with exact dispersion energies in both the cosine and xi. Decay widths
/// on the model are ignored here; see transition_probability_decaying.
inline double transition_probability(const CollapseParams& params, const NeutrinoModel& model,
                                     const Scenario& sc, std::size_t beta,
                                     DampingMode mode = DampingMode::Exponential) {
    return detail::probability_impl(params, model, sc, beta, mode, false);
}

/// Generalization to decaying eigenstates: diagonal terms pick up
/// exp(-Gamma_k t / hbar), interference terms the half-sum width factor.
/// Reduces to transition_probability when every width is zero.
inline double transition_probability_decaying(const CollapseParams& params, const NeutrinoModel& model,
                                              const Scenario& sc, std::size_t beta,
                                              DampingMode mode = DampingMode::Exponential) {
    if (!model.has_widths()) {
        throw std::invalid_argument("transition_probability_decaying: model carries no decay widths");
    }
    return detail::probability_impl(params, model, sc, beta, mode, true);
}

/// Evaluate the whole scenario: probabilities for every final flavor plus
/// the xi / damping / survival bookkeeping.
inline OscillationResult oscillate(const CollapseParams& params, const NeutrinoModel& model,
                                   const Scenario& sc, DampingMode mode = DampingMode::Exponential) {
    const std::size_t n = model.size();
    OscillationResult out;
    out.initial_flavor = sc.initial_flavor();
    out.mode = mode;
    out.xi_matrix.assign(n * n, 0.0);
    out.xi_t_matrix.assign(n * n, 0.0);
    out.damping_factors.assign(n * n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double x = xi(params, model, sc, j, k);
            out.xi_matrix[j * n + k] = x;
            out.xi_t_matrix[j * n + k] = x * sc.time_s();
            out.damping_factors[j * n + k] = damping_factor(mode, x * sc.time_s());
        }
    }
    out.survival_weights.assign(n, 1.0);
    if (model.has_widths()) {
        for (std::size_t k = 0; k < n; ++k) {
            out.survival_weights[k] = std::exp(-model.width_ev(k) * sc.time_s() / constants.hbar_ev_s);
        }
    }
    out.probabilities.resize(n);
    for (std::size_t beta = 0; beta < n; ++beta) {
        out.probabilities[beta] = model.has_widths()
                                      ? transition_probability_decaying(params, model, sc, beta, mode)
                                      : transition_probability(params, model, sc, beta, mode);
    }
    return out;
}

/// The three reference scenarios (energy, flight time) and their damping
/// exponents xi*t from the ultra-relativistic prefactor pipeline.
struct Table1Row {
    const char* label;
    double energy_ev;
    double time_s;
    double xi_t;
};

inline constexpr double kReferenceDm2Ev2 = 7.59e-5;

inline std::array<Table1Row, 3> table1(const CollapseParams& params, double dm2_ev2 = kReferenceDm2Ev2) {
    const double pref = eq10_prefactor(params, dm2_ev2);
    std::array<Table1Row, 3> rows = {{
        {"cosmogenic", 1e19, 3.15e18, 0.0},
        {"solar", 1e6, 5e2, 0.0},
        {"laboratory", 1e10, 2.13e-2, 0.0},
    }};
    for (auto& r : rows) r.xi_t = pref * r.time_s / (r.energy_ev * r.energy_ev);
    return rows;
}

}  // namespace nudamp
