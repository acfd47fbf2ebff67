#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nudamp/units.hpp"

namespace nudamp {

/// Exact dispersion E = sqrt((pc)^2 + (mc^2)^2), both arguments in eV.
inline double energy(double momentum_c_ev, double mass_c2_ev) {
    if (momentum_c_ev < 0.0 || mass_c2_ev < 0.0) {
        throw std::invalid_argument("energy: momentum and mass must be non-negative");
    }
    return std::hypot(momentum_c_ev, mass_c2_ev);
}

/// The n-flavor neutrino system: masses (stored as rest energies m_j c^2 in
/// eV, ascending), a real mixing matrix relating flavor and mass bases, and
/// optional per-eigenstate decay widths. Immutable after construction.
///
/// Complex (CP-violating) mixing is rejected by construction: the matrix
/// type is real, and orthogonality U^T U = I is enforced to 1e-12 per entry.
class NeutrinoModel {
public:
    static constexpr double kUnitarityTol = 1e-12;

    NeutrinoModel(std::vector<double> masses_c2_ev, std::vector<std::vector<double>> mixing,
                  std::vector<double> widths_ev = {}, bool allow_degenerate = false)
        : masses_(std::move(masses_c2_ev)), widths_(std::move(widths_ev)) {
        const std::size_t n = masses_.size();
        if (n < 2) throw std::invalid_argument("NeutrinoModel: need at least two mass eigenstates");
        for (double m : masses_) {
            if (!(m >= 0.0)) throw std::invalid_argument("NeutrinoModel: masses must be non-negative");
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            if (masses_[j] > masses_[j + 1]) {
                throw std::invalid_argument("NeutrinoModel: masses must be ascending");
            }
            if (masses_[j] == masses_[j + 1]) {
                if (!allow_degenerate) {
                    throw std::invalid_argument(
                        "NeutrinoModel: degenerate masses require allow_degenerate (damping "
                        "vanishes for the degenerate pair)");
                }
                degenerate_ = true;
            }
        }
        if (mixing.size() != n) throw std::invalid_argument("NeutrinoModel: mixing must be n x n");
        mixing_.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            if (mixing[a].size() != n) throw std::invalid_argument("NeutrinoModel: mixing must be n x n");
            for (std::size_t j = 0; j < n; ++j) mixing_[a * n + j] = mixing[a][j];
        }
        check_orthogonal();
        if (!widths_.empty()) {
            if (widths_.size() != n) throw std::invalid_argument("NeutrinoModel: widths must have one entry per eigenstate");
            for (double w : widths_) {
                if (!(w >= 0.0)) throw std::invalid_argument("NeutrinoModel: widths must be non-negative");
            }
        }
    }

    /// Two-flavor model from a single mixing angle,
    /// U = [[cos t, sin t], [-sin t, cos t]], with masses fixed by the
    /// squared splitting and the lightest mass.
    static NeutrinoModel two_flavor(double theta_rad, double dm2_ev2, double lightest_mass_ev = 0.0,
                                    std::vector<double> widths_ev = {}) {
        if (dm2_ev2 < 0.0) throw std::invalid_argument("two_flavor: dm2 must be non-negative");
        if (lightest_mass_ev < 0.0) throw std::invalid_argument("two_flavor: mass must be non-negative");
        const double m1 = lightest_mass_ev;
        const double m2 = std::sqrt(m1 * m1 + dm2_ev2);
        const double c = std::cos(theta_rad), s = std::sin(theta_rad);
        return NeutrinoModel({m1, m2}, {{c, s}, {-s, c}}, std::move(widths_ev), dm2_ev2 == 0.0);
    }

    /// n-flavor model from splittings relative to the lightest state:
    /// dm2[i] = m_{i+1}^2 c^4 - m_0^2 c^4, strictly increasing.
    static NeutrinoModel from_splittings(const std::vector<double>& dm2_ev2, double lightest_mass_ev,
                                         std::vector<std::vector<double>> mixing,
                                         std::vector<double> widths_ev = {}) {
        std::vector<double> m;
        m.push_back(lightest_mass_ev);
        for (double d : dm2_ev2) {
            if (d < 0.0) throw std::invalid_argument("from_splittings: dm2 entries must be non-negative");
            m.push_back(std::sqrt(lightest_mass_ev * lightest_mass_ev + d));
        }
        bool degenerate = false;
        for (std::size_t i = 0; i + 1 < m.size(); ++i) degenerate |= (m[i] == m[i + 1]);
        return NeutrinoModel(std::move(m), std::move(mixing), std::move(widths_ev), degenerate);
    }

    std::size_t size() const { return masses_.size(); }
    double mass_c2(std::size_t j) const { return masses_.at(j); }
    const std::vector<double>& masses_c2() const { return masses_; }
    double mixing(std::size_t flavor, std::size_t mass_index) const {
        return mixing_.at(flavor * size() + mass_index);
    }
    bool has_widths() const { return !widths_.empty(); }
    double width_ev(std::size_t j) const { return widths_.empty() ? 0.0 : widths_.at(j); }
    bool degenerate_masses() const { return degenerate_; }

    void require_index(std::size_t j, const char* what) const {
        if (j >= size()) {
            throw std::out_of_range(std::string(what) + ": index " + std::to_string(j) +
                                    " out of range for n=" + std::to_string(size()));
        }
    }

private:
    void check_orthogonal() const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double dot = 0.0;
                for (std::size_t a = 0; a < n; ++a) dot += mixing_[a * n + i] * mixing_[a * n + j];
                const double expect = (i == j) ? 1.0 : 0.0;
                if (std::abs(dot - expect) > kUnitarityTol) {
                    throw std::invalid_argument("NeutrinoModel: mixing matrix is not orthogonal (U^T U != I at entry (" +
                                                std::to_string(i) + "," + std::to_string(j) + "))");
                }
            }
        }
    }

    std::vector<double> masses_;   // m_j c^2, eV, ascending
    std::vector<double> mixing_;   // row-major, mixing_[flavor * n + j]
    std::vector<double> widths_;   // Gamma_j, eV; empty = stable
    bool degenerate_ = false;
};

/// A single propagation setup: shared initial momentum (all mass eigenstates
/// carry the same p_i), flight time, and initial flavor. Energy input is
/// identified with p_i c (ultra-relativistic tagging); baselines convert as
/// t = L/c.
class Scenario {
public:
    static Scenario from_momentum_time(double momentum_c_ev, double time_s, std::size_t flavor) {
        return Scenario(momentum_c_ev, time_s, flavor, false, false);
    }
    static Scenario from_energy_time(double energy_ev, double time_s, std::size_t flavor) {
        return Scenario(energy_ev, time_s, flavor, true, false);
    }
    static Scenario from_momentum_baseline(double momentum_c_ev, double baseline_cm, std::size_t flavor) {
        return Scenario(momentum_c_ev, baseline_cm / constants.c_cm_per_s, flavor, false, true);
    }
    static Scenario from_energy_baseline(double energy_ev, double baseline_cm, std::size_t flavor) {
        return Scenario(energy_ev, baseline_cm / constants.c_cm_per_s, flavor, true, true);
    }

    double momentum_c_ev() const { return momentum_c_ev_; }
    double time_s() const { return time_s_; }
    std::size_t initial_flavor() const { return flavor_; }
    bool energy_specified() const { return from_energy_; }
    bool baseline_specified() const { return from_baseline_; }

private:
    Scenario(double pc, double t, std::size_t flavor, bool from_energy, bool from_baseline)
        : momentum_c_ev_(pc), time_s_(t), flavor_(flavor), from_energy_(from_energy), from_baseline_(from_baseline) {
        if (!(pc > 0.0)) throw std::invalid_argument("Scenario: momentum/energy must be positive");
        // t = 0 is the no-evolution limit and stays legal
        if (!(t >= 0.0)) throw std::invalid_argument("Scenario: flight time/baseline must be non-negative");
    }

    double momentum_c_ev_;
    double time_s_;
    std::size_t flavor_;
    bool from_energy_;
    bool from_baseline_;
};

/// Initial energy of mass eigenstate j, exact dispersion.
inline double eigenstate_energy(const NeutrinoModel& model, const Scenario& sc, std::size_t j) {
    model.require_index(j, "eigenstate_energy");
    return energy(sc.momentum_c_ev(), model.mass_c2(j));
}

/// E_i^(k) - E_i^(j) at the shared momentum. Evaluated through
///   (m_k^2 c^4 - m_j^2 c^4) / (E_k + E_j),
/// algebraically identical to the direct difference but immune to the
/// catastrophic cancellation of subtracting two nearly equal ultra-
/// relativistic energies. Antisymmetric in (j,k) exactly.
inline double energy_gap(const Scenario& sc, const NeutrinoModel& model, std::size_t j, std::size_t k) {
    model.require_index(j, "energy_gap");
    model.require_index(k, "energy_gap");
    if (j == k) return 0.0;
    const double mj = model.mass_c2(j), mk = model.mass_c2(k);
    const double dm2 = (mk - mj) * (mk + mj);
    const double ej = energy(sc.momentum_c_ev(), mj);
    const double ek = energy(sc.momentum_c_ev(), mk);
    return dm2 / (ek + ej);
}

/// Rate [1/s] at which the ultra-relativistic shortcut
/// E ~ pc (1 + m^2c^4/2p^2c^2) accumulates phase error: the second-order
/// term of the gap expansion divided by hbar. Multiplying by t gives the
/// dimensionless phase error.
///
/// The masses are inputs on purpose. With the upper bound 2.2 eV the
/// prefactor is ~1.4e11 s^-1 eV^3; the value 1.01e10 s^-1 eV^3 sometimes
/// quoted corresponds to m_j^2 c^4 + m_k^2 c^4 ~ 0.70 eV^2, i.e. masses
/// near 0.59 eV per eigenstate.
inline double ur_expansion_error_rate(double energy_ev, double m_j_c2_ev, double m_k_c2_ev) {
    if (!(energy_ev > 0.0)) throw std::domain_error("ur_expansion_error_rate: E must be positive");
    if (m_j_c2_ev < 0.0 || m_k_c2_ev < 0.0) {
        throw std::invalid_argument("ur_expansion_error_rate: masses must be non-negative");
    }
    const double mj2 = m_j_c2_ev * m_j_c2_ev;
    const double mk2 = m_k_c2_ev * m_k_c2_ev;
    // factored difference of squares: exact for near-degenerate masses
    const double dm2 = std::abs((m_k_c2_ev - m_j_c2_ev) * (m_k_c2_ev + m_j_c2_ev));
    const double e3 = energy_ev * energy_ev * energy_ev;
    return dm2 * (mk2 + mj2) / (8.0 * e3 * constants.hbar_ev_s);
}

}  // namespace nudamp
