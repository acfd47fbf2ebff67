#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "nudamp/csl.hpp"
#include "nudamp/quadrature.hpp"

namespace nudamp {

inline constexpr double kSqrtPi = 1.7724538509055160273;

/// The dimensionless variables of the reduced momentum integrals:
///   y = r_C p_i / hbar,  a_j = (r_C m_j c / hbar)^2,  tau = c t / r_C.
/// All reduced integrals are evaluated in these variables; physical-unit
/// magnitudes (tau ~ 1e32) would otherwise swamp the quadrature.
///
/// from_physical uses the conventional rounded mapping for the default
/// correlation length, y = (1e-1 / eV) p_i c and a_j = (1e-2 / eV^2) m_j^2 c^4.
/// (The unrounded factor is r_C/(hbar c) = 0.507/eV; the rounded values are
/// the ones every regime threshold in the analysis is quoted against.)
struct DimensionlessRegime {
    double y = 0.0;
    double a_j = 0.0;
    double a_k = 0.0;
    double tau = 0.0;

    static DimensionlessRegime from_physical(double momentum_c_ev, double m_j_c2_ev, double m_k_c2_ev,
                                             double time_s) {
        DimensionlessRegime r;
        r.y = 1e-1 * momentum_c_ev;
        r.a_j = 1e-2 * m_j_c2_ev * m_j_c2_ev;
        r.a_k = 1e-2 * m_k_c2_ev * m_k_c2_ev;
        r.tau = constants.c_cm_per_s * time_s / 1e-5;
        r.validate();
        return r;
    }

    void validate() const {
        if (!(y > 0.0)) throw std::invalid_argument("DimensionlessRegime: y must be positive");
        if (a_j < 0.0 || a_k < 0.0) throw std::invalid_argument("DimensionlessRegime: a_j, a_k must be non-negative");
        if (tau < 0.0) throw std::invalid_argument("DimensionlessRegime: tau must be non-negative");
    }
};

/// Exact phase function of the oscillatory reduced integral,
///   g(s) = tau (sqrt((s+y)^2 + a_k) - sqrt((s+y)^2 + a_j)
///          - sqrt(y^2 + a_k) + sqrt(y^2 + a_j)),
/// evaluated through the conjugate form
///   tau (a_k - a_j) [1/(S_k + S_j) - 1/(T_k + T_j)]
/// so the two inner square-root differences never cancel. g(0) = 0
/// identically, and g == 0 when a_j == a_k.
inline double g_of_s(const DimensionlessRegime& r, double s) {
    r.validate();
    if (r.a_j == r.a_k) return 0.0;
    const double u = s + r.y;
    const double sk = std::sqrt(u * u + r.a_k), sj = std::sqrt(u * u + r.a_j);
    const double tk = std::sqrt(r.y * r.y + r.a_k), tj = std::sqrt(r.y * r.y + r.a_j);
    return r.tau * (r.a_k - r.a_j) * (1.0 / (sk + sj) - 1.0 / (tk + tj));
}

/// First-order form of g in the ultra-relativistic regime y^2 >> a:
///   g(s) ~ tau (a_j - a_k) s / (2 (s + y) y).
/// For tau Da / y^2 below ~1e-3 the exact form loses all significant digits
/// to subtractive cancellation and this is the usable evaluation.
inline double g_of_s_taylor(const DimensionlessRegime& r, double s) {
    r.validate();
    return r.tau * (r.a_j - r.a_k) * s / (2.0 * (s + r.y) * r.y);
}

namespace detail {

/// (e^{ig} - 1)/(ig) via the exact factorization e^{ig/2} sinc(g/2); the
/// removable singularity at g = 0 is covered by the sinc series.
inline std::complex<double> phase_average_factor(double g) {
    const double h = 0.5 * g;
    const double sinc = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
    return std::polar(sinc, h);
}

}  // namespace detail

/// Verdict on the Gaussian-weighted dispersion integral: quadrature of
///   integrand(s) = (s+y)/sqrt((s+y)^2 + a_j) e^{-s^2}
/// against the closed form sqrt(pi) claimed for y >> 1. The massless
/// integrand has a sign flip at s = -y, which is handed to the quadrature
/// as a breakpoint.
struct DispersionCheckResult {
    double numeric = 0.0;
    double closed_form = kSqrtPi;
    double relative_error = 0.0;
    bool converged = false;
    double quadrature_error = 0.0;
};

inline DispersionCheckResult dispersion_integral_check(const DimensionlessRegime& r, const QuadratureOptions& opt = {}) {
    r.validate();
    const double y = r.y, a = r.a_j;
    auto f = [y, a](double s) {
        const double u = s + y;
        return u / std::sqrt(u * u + a) * std::exp(-s * s);
    };
    auto q = integrate(f, -kGaussianSupport, kGaussianSupport, opt, {-y});
    DispersionCheckResult out;
    out.numeric = q.value;
    out.relative_error = std::abs(q.value - out.closed_form) / out.closed_form;
    out.converged = q.converged;
    out.quadrature_error = q.error_estimate;
    if (!q.converged) {
        throw std::runtime_error("dispersion_integral_check: quadrature did not converge at the requested tolerance");
    }
    return out;
}

/// Verdict on the oscillatory reduced integral
///   I/sqrt(pi) = (1/sqrt(pi)) Int ds (s/y + 1) (e^{ig(s)}-1)/(ig(s)) e^{-s^2},
/// which the stationary-phase argument replaces by 1. Reports the complex
/// ratio, its deviation from 1, and whether the quoted validity condition
/// y >= 10 sqrt(tau (a_j - a_k)) holds. Requires a_j >= a_k.
struct OscillatoryCheckResult {
    std::complex<double> ratio{1.0, 0.0};
    double deviation = 0.0;  // |ratio - 1|
    bool condition_satisfied = false;
    bool used_taylor_g = false;
    bool converged = false;
};

inline OscillatoryCheckResult oscillatory_integral_check(const DimensionlessRegime& r, const QuadratureOptions& opt = {}) {
    r.validate();
    if (r.a_j < r.a_k) throw std::invalid_argument("oscillatory_integral_check: requires a_j >= a_k");
    const double da = r.a_j - r.a_k;
    OscillatoryCheckResult out;
    out.condition_satisfied = r.y >= 10.0 * std::sqrt(r.tau * da);
    out.used_taylor_g = (r.tau * da) < 1e-3 * r.y * r.y;

    auto integrand = [&r, &out](double s) -> std::complex<double> {
        const double g = out.used_taylor_g ? g_of_s_taylor(r, s) : g_of_s(r, s);
        return (s / r.y + 1.0) * detail::phase_average_factor(g) * std::exp(-s * s);
    };
    auto q = integrate_complex(integrand, -kGaussianSupport, kGaussianSupport, opt);
    if (!q.converged) {
        throw std::runtime_error("oscillatory_integral_check: quadrature did not converge at the requested tolerance");
    }
    out.ratio = q.value / kSqrtPi;
    out.deviation = std::abs(out.ratio - std::complex<double>(1.0, 0.0));
    out.converged = q.converged;
    return out;
}

/// Side-by-side dimensional-analysis guesses against the exact perturbative
/// rate, as damping exponents at time t:
///   xi1 ~ gamma/(r_C^3 m0^2) (m_j - m_k)^2,
///   xi2 ~ gamma/(r_C^3 m0^2) (m_j^2 - m_k^2),
/// both with unit prefactor (the guesses carry no sharper normalization;
/// only their orders of magnitude are meaningful).
struct DimensionalEstimates {
    double xi1_t = 0.0;
    double xi2_t = 0.0;
    double xi_exact_t = 0.0;
};

inline DimensionalEstimates dimensional_estimates(const CollapseParams& params, double m_j_c2_ev,
                                                  double m_k_c2_ev, double momentum_c_ev, double time_s) {
    params.validate();
    if (m_j_c2_ev < 0.0 || m_k_c2_ev < 0.0) {
        throw std::invalid_argument("dimensional_estimates: masses must be non-negative");
    }
    const double rc3 = params.r_c_cm * params.r_c_cm * params.r_c_cm;
    const double per_volume = params.gamma_cm3_per_s / rc3;  // 1/s
    const double m0 = params.m0c2_ev;
    DimensionalEstimates out;
    const double dm = (m_j_c2_ev - m_k_c2_ev) / m0;
    out.xi1_t = per_volume * dm * dm * time_s;
    out.xi2_t = per_volume * std::abs(m_j_c2_ev * m_j_c2_ev - m_k_c2_ev * m_k_c2_ev) / (m0 * m0) * time_s;
    const double lo = std::min(m_j_c2_ev, m_k_c2_ev), hi = std::max(m_j_c2_ev, m_k_c2_ev);
    out.xi_exact_t = detail::xi_prefactor(params) *
                     detail::mass_energy_ratio_gap_sq(lo, hi, momentum_c_ev) * time_s;
    return out;
}

}  // namespace nudamp
