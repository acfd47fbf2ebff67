#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nudamp/csl.hpp"
#include "nudamp/neutrino.hpp"

namespace nudamp {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Path p draws from its own engine seeded by mixing (seed, p), so results
/// do not depend on how paths are partitioned across workers.
inline std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(path + 1)));
}

/// Box-Muller standard normals (no rejection step, identical draw count on
/// every platform; std::normal_distribution is implementation-defined).
class GaussianStream {
public:
    explicit GaussianStream(std::mt19937_64 engine) : engine_(engine) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform_(engine_);
        } while (u1 <= 0.0);
        const double u2 = uniform_(engine_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

/// Per-eigenstate phase-noise reduction of the collapse dynamics: each mass
/// eigenstate accumulates phase omega_j t + sigma_j W_t with a single
/// Wiener process shared by all eigenstates (the noise field is common to
/// co-located states; independent noises would double-count and produce
/// the sum-of-squares rate instead of the difference form).
struct PhaseNoiseModel {
    std::vector<double> sigma;  // noise amplitudes, s^-1/2
    std::vector<double> omega;  // deterministic angular frequencies E_j/hbar, 1/s
    bool shared_noise = true;

    void validate() const {
        if (sigma.size() != omega.size() || sigma.size() < 2) {
            throw std::invalid_argument("PhaseNoiseModel: need matching sigma/omega lists, n >= 2");
        }
        for (double s : sigma) {
            if (!(s >= 0.0)) throw std::invalid_argument("PhaseNoiseModel: sigma must be non-negative");
        }
    }
};

/// The sigma mapping that ties the reduced model to the collapse rate:
///   sigma_j = sqrt(gamma_mj / (8 pi^3/2 r_C^3)) * m_j c^2 / E_j,
/// chosen so that (sigma_j - sigma_k)^2 / 2 equals xi_jk identically.
inline double csl_phase_noise_sigma(const CollapseParams& params, double mass_c2_ev, double energy_ev) {
    params.validate();
    if (!(energy_ev > 0.0)) throw std::invalid_argument("csl_phase_noise_sigma: energy must be positive");
    const double rc3 = params.r_c_cm * params.r_c_cm * params.r_c_cm;
    return std::sqrt(params.gamma_m(mass_c2_ev) / (8.0 * std::pow(std::numbers::pi, 1.5) * rc3)) *
           mass_c2_ev / energy_ev;
}

inline PhaseNoiseModel phase_noise_from_physics(const CollapseParams& params, const NeutrinoModel& model,
                                                const Scenario& sc) {
    PhaseNoiseModel out;
    for (std::size_t j = 0; j < model.size(); ++j) {
        const double e_j = eigenstate_energy(model, sc, j);
        out.sigma.push_back(csl_phase_noise_sigma(params, model.mass_c2(j), e_j));
        out.omega.push_back(e_j / constants.hbar_ev_s);
    }
    return out;
}

struct McConfig {
    std::size_t n_paths = 10000;
    double dt_s = 0.1;
    double t_max_s = 10.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_paths < 1) throw std::invalid_argument("McConfig: need at least one path");
        if (!(dt_s > 0.0) || !(dt_s <= t_max_s)) {
            throw std::invalid_argument("McConfig: require 0 < dt <= t_max");
        }
    }
};

struct InterferencePoint {
    double t_s = 0.0;
    std::complex<double> mean{0.0, 0.0};  // ensemble average of e^{i phi}
    double std_error = 0.0;
};

struct InterferenceSeries {
    std::vector<InterferencePoint> points;
};

/// Ensemble average of the (j,k) interference factor e^{i phi_jk(t)} with
///   phi_jk(t) = (omega_k - omega_j) t + (sigma_j - sigma_k) W_t
/// over Euler-Maruyama paths; Wiener increments are drawn exactly as
/// N(0, dt), so the phase statistics are dt-independent and only the
/// sampling grid changes with dt. The expectation converges to
/// e^{-xi_jk t} e^{i (omega_k - omega_j) t} with xi_jk = (sigma_j-sigma_k)^2/2.
inline InterferenceSeries simulate_interference(const PhaseNoiseModel& model, std::size_t j, std::size_t k,
                                                const McConfig& cfg) {
    model.validate();
    cfg.validate();
    if (!model.shared_noise) {
        throw std::invalid_argument(
            "simulate_interference: the reduction assumes a single shared Wiener process "
            "(shared_noise = true)");
    }
    if (j >= model.sigma.size() || k >= model.sigma.size()) {
        throw std::out_of_range("simulate_interference: eigenstate index out of range");
    }
    const double d_sigma = model.sigma[j] - model.sigma[k];
    const double d_omega = model.omega[k] - model.omega[j];
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max_s / cfg.dt_s));
    const std::size_t n_points = n_steps + 1;  // includes t = 0
    const double sqrt_dt = std::sqrt(cfg.dt_s);

    std::vector<double> sum_re(n_points, 0.0), sum_im(n_points, 0.0);
    std::vector<double> sum_re2(n_points, 0.0), sum_im2(n_points, 0.0);

    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        detail::GaussianStream gauss(detail::path_engine(cfg.seed, p));
        double wiener = 0.0;
        sum_re[0] += 1.0;
        sum_re2[0] += 1.0;
        for (std::size_t m = 1; m < n_points; ++m) {
            wiener += sqrt_dt * gauss();
            const double phi = d_omega * (static_cast<double>(m) * cfg.dt_s) + d_sigma * wiener;
            if (!std::isfinite(phi)) {
                throw std::runtime_error("simulate_interference: non-finite phase on path " +
                                         std::to_string(p));
            }
            const double c = std::cos(phi), s = std::sin(phi);
            sum_re[m] += c;
            sum_im[m] += s;
            sum_re2[m] += c * c;
            sum_im2[m] += s * s;
        }
    }

    const auto n = static_cast<double>(cfg.n_paths);
    InterferenceSeries out;
    out.points.resize(n_points);
    for (std::size_t m = 0; m < n_points; ++m) {
        auto& pt = out.points[m];
        pt.t_s = static_cast<double>(m) * cfg.dt_s;
        pt.mean = {sum_re[m] / n, sum_im[m] / n};
        if (cfg.n_paths > 1) {
            const double var_re = std::max(0.0, (sum_re2[m] - sum_re[m] * sum_re[m] / n) / (n - 1.0));
            const double var_im = std::max(0.0, (sum_im2[m] - sum_im[m] * sum_im[m] / n) / (n - 1.0));
            pt.std_error = std::sqrt((var_re + var_im) / n);
        }
    }
    return out;
}

struct DecayFit {
    double rate_per_s = 0.0;
    double std_error = 0.0;
};

/// Weighted least-squares slope of -ln|mean| against t, with the weights
/// (and the slope uncertainty) propagated from the per-point Monte Carlo
/// standard errors. Exact points (zero standard error) pin the curve but
/// carry no stochastic information, so in the weighted branch they are
/// left out; an all-exact series falls back to an unweighted fit with
/// residual-based uncertainty.
inline DecayFit fit_decay_rate(const InterferenceSeries& series) {
    struct Sample {
        double t, y, w;
    };
    std::vector<Sample> samples;
    bool any_stochastic = false;
    for (const auto& pt : series.points) {
        const double modulus = std::abs(pt.mean);
        if (!(modulus > 0.0)) {
            throw std::invalid_argument("fit_decay_rate: non-positive modulus in the fit window");
        }
        any_stochastic |= pt.std_error > 0.0;
    }
    for (const auto& pt : series.points) {
        const double modulus = std::abs(pt.mean);
        if (any_stochastic && pt.std_error <= 0.0) continue;
        const double se_ln = any_stochastic ? pt.std_error / modulus : 1.0;
        samples.push_back({pt.t_s, -std::log(modulus), 1.0 / (se_ln * se_ln)});
    }
    if (samples.size() < 2) throw std::invalid_argument("fit_decay_rate: need at least two usable points");

    double sw = 0, swt = 0, swy = 0, swtt = 0, swty = 0;
    for (const auto& s : samples) {
        sw += s.w;
        swt += s.w * s.t;
        swy += s.w * s.y;
        swtt += s.w * s.t * s.t;
        swty += s.w * s.t * s.y;
    }
    const double denom = sw * swtt - swt * swt;
    if (!(denom > 0.0)) throw std::invalid_argument("fit_decay_rate: degenerate time grid");
    const double slope = (sw * swty - swt * swy) / denom;
    const double intercept = (swy - slope * swt) / sw;

    double var_slope = sw / denom;
    if (!any_stochastic) {
        // residual-based uncertainty for deterministic input
        double chi2 = 0.0;
        for (const auto& s : samples) {
            const double res = s.y - (intercept + slope * s.t);
            chi2 += res * res;
        }
        var_slope *= chi2 / (samples.size() > 2 ? static_cast<double>(samples.size() - 2) : 1.0);
    }
    return {slope, std::sqrt(var_slope)};
}

}  // namespace nudamp
