#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nudamp/units.hpp"

namespace nudamp {

enum class DpCutoffPreset { PaperChen, Nuclear, GrwScale };

/// Inputs for the gravity-induced (Diosi-Penrose) damping exponent. The
/// coupling follows the Penrose sign convention xi_bar = -G. The cutoff
/// radius is provenance only: the damping formula below already embeds the
/// point-particle regularization choice of the calculation it follows, and
/// recomputing it for other cutoffs would mean redoing the underlying
/// double integral.
struct DpParams {
    double xi_bar_si = -constants.g_newton_si;  // m^3 kg^-1 s^-2
    double cutoff_radius_m = 1e-31;
    DpCutoffPreset cutoff_preset = DpCutoffPreset::PaperChen;
    bool cutoff_trusted = false;
    double m_j_c2_ev = 0.0;
    double m_k_c2_ev = 0.0;
    double energy_ev = 0.0;
    double baseline_m = 0.0;

    static DpParams paper_chen() {
        // R ~ G_F m / hbar^2 ~ 1e-31 m; known to overestimate the collapse,
        // flagged untrusted.
        return {-constants.g_newton_si, 1e-31, DpCutoffPreset::PaperChen, false, 0, 0, 0, 0};
    }
    static DpParams nuclear() {
        return {-constants.g_newton_si, 1e-15, DpCutoffPreset::Nuclear, true, 0, 0, 0, 0};
    }
    static DpParams grw_scale() {
        return {-constants.g_newton_si, 1e-7, DpCutoffPreset::GrwScale, true, 0, 0, 0, 0};
    }

    void validate() const {
        if (!(cutoff_radius_m > 0.0)) throw std::invalid_argument("DpParams: cutoff radius must be positive");
        if (!(m_j_c2_ev > 0.0) || !(m_k_c2_ev > 0.0)) {
            throw std::domain_error("DpParams: masses must be positive (logarithm domain)");
        }
        if (!(energy_ev > 0.0)) throw std::domain_error("DpParams: energy must be positive (logarithm domain)");
        if (baseline_m < 0.0) throw std::invalid_argument("DpParams: baseline must be non-negative");
    }
};

/// Dimensionless damping exponent with the two bracket terms exposed:
/// lambda_g = bulk_term - log_term. Their relative size is the whole story
/// of the gravity-collapse comparison, so diagnosis needs both.
struct DpResult {
    double lambda_g = 0.0;
    double bulk_term = 0.0;  // 8 pi (G/hbar c) * 3 (mj+mk) hbar^2 / (5 G_F) * L
    double log_term = 0.0;   // 8 pi (G/hbar c) * mj mk E ln(...) / (2 pi hbar c) * L
    double log_argument = 0.0;
};

/// Gravity-collapse damping exponent
///   lambda_G = 8 pi (G / hbar c) [ 3 (m_j + m_k) hbar^2 / (5 G_F)
///              - m_j m_k E / (2 pi hbar c)
///                * ln( 6 (m_j + m_k) pi hbar^3 c / (5 m_j m_k G_F E) ) ] L.
///
/// Unit chain (SI throughout): masses enter as kg from the stored rest
/// energies, E in J, L in m, and G_F = 1.1663787e-5 GeV^-2 * (hbar c)^3
/// expressed in J m^3. Every bracket term then carries kg^2/m against the
/// kg^-2 prefactor, leaving lambda_G dimensionless. Linear in L exactly.
inline DpResult lambda_g(const DpParams& p) {
    p.validate();
    const PhysicalConstants& c = constants;
    const double gev_to_j = 1e9 * c.ev_to_joule;
    const double hbar_c = c.hbar_si * c.c_m_per_s;                                // J m
    const double g_fermi_si = c.g_fermi_gev2 / (gev_to_j * gev_to_j) * hbar_c * hbar_c * hbar_c;  // J m^3
    const double mj = p.m_j_c2_ev * c.ev_to_joule / (c.c_m_per_s * c.c_m_per_s);  // kg
    const double mk = p.m_k_c2_ev * c.ev_to_joule / (c.c_m_per_s * c.c_m_per_s);  // kg
    const double e_j = p.energy_ev * c.ev_to_joule;                               // J

    const double coupling = -p.xi_bar_si;  // = G for the default convention
    const double prefactor = 8.0 * std::numbers::pi * coupling / hbar_c;          // kg^-2

    const double bulk = 3.0 * (mj + mk) * c.hbar_si * c.hbar_si / (5.0 * g_fermi_si);
    const double log_arg = 6.0 * (mj + mk) * std::numbers::pi * c.hbar_si * c.hbar_si * c.hbar_si *
                           c.c_m_per_s / (5.0 * mj * mk * g_fermi_si * e_j);
    const double log_part = mj * mk * e_j / (2.0 * std::numbers::pi * hbar_c) * std::log(log_arg);

    DpResult out;
    out.log_argument = log_arg;
    out.bulk_term = prefactor * bulk * p.baseline_m;
    out.log_term = prefactor * log_part * p.baseline_m;
    out.lambda_g = prefactor * (bulk - log_part) * p.baseline_m;
    return out;
}

}  // namespace nudamp
