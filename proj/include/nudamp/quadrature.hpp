#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nudamp {

struct QuadratureOptions {
    double rel_tolerance = 1e-9;
    unsigned max_depth = 15;  // hard interval-subdivision cap
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    bool converged = false;       // error_estimate <= rel_tolerance * L1 norm
};

struct ComplexQuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    bool converged = false;
};

/// Half-width of the integration window for exp(-s^2)-weighted integrands.
/// The neglected tail is below 4e-36 of sqrt(pi), far under any tolerance
/// asserted anywhere in this library.
inline constexpr double kGaussianSupport = 9.0;

/// Adaptive Gauss-Kronrod over [lo, hi], split first at the given interior
/// breakpoints (used to isolate known kinks, e.g. the massless-dispersion
/// sign change). Non-convergence is reported, never silently accepted.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opt = {},
                           std::vector<double> breakpoints = {}) {
    using boost::math::quadrature::gauss_kronrod;
    breakpoints.erase(std::remove_if(breakpoints.begin(), breakpoints.end(),
                                     [&](double b) { return !(b > lo && b < hi); }),
                      breakpoints.end());
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> edges;
    edges.push_back(lo);
    for (double b : breakpoints) edges.push_back(b);
    edges.push_back(hi);

    QuadratureResult out;
    double l1_total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double err = 0.0, l1 = 0.0;
        out.value += gauss_kronrod<double, 15>::integrate(f, edges[i], edges[i + 1], opt.max_depth,
                                                          opt.rel_tolerance, &err, &l1);
        out.error_estimate += err;
        l1_total += l1;
    }
    out.converged = out.error_estimate <= opt.rel_tolerance * std::max(l1_total, 1e-300);
    return out;
}

/// Complex-valued integrand, evaluated as two real quadratures.
template <class F>
ComplexQuadratureResult integrate_complex(F&& f, double lo, double hi,
                                          const QuadratureOptions& opt = {},
                                          std::vector<double> breakpoints = {}) {
    auto re = integrate([&](double s) { return f(s).real(); }, lo, hi, opt, breakpoints);
    auto im = integrate([&](double s) { return f(s).imag(); }, lo, hi, opt, breakpoints);
    ComplexQuadratureResult out;
    out.value = {re.value, im.value};
    out.error_estimate = re.error_estimate + im.error_estimate;
    out.converged = re.converged && im.converged;
    return out;
}

}  // namespace nudamp
