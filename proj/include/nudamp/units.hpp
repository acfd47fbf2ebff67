#pragma once

#include <stdexcept>
#include <string>

namespace nudamp {

/// Thrown when quantities with incompatible dimension tags are combined.
struct UnitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Physical constants, one instance, consumed by every other module.
///
/// Canonical working units: energies and masses as rest energies in eV,
/// times in s, lengths in cm. G and G_F are kept in SI and converted at
/// the single point of use (the gravitational-collapse damping), where the
/// conversion chain is unit-tested in isolation.
struct PhysicalConstants {
    double hbar_ev_s = 6.582119569e-16;    // eV s
    double c_cm_per_s = 2.99792458e10;     // cm/s
    double m0c2_ev = 938.272e6;            // nucleon rest energy, eV
    double g_newton_si = 6.67430e-11;      // m^3 kg^-1 s^-2
    double g_fermi_gev2 = 1.1663787e-5;    // G_F/(hbar c)^3, GeV^-2
    // SI companions for the G_F/G unit chain
    double hbar_si = 1.054571817e-34;      // J s
    double c_m_per_s = 2.99792458e8;       // m/s
    double ev_to_joule = 1.602176634e-19;  // exact
};

inline constexpr PhysicalConstants constants{};

enum class Unit {
    ElectronVolt,
    GigaElectronVolt,
    Second,
    Year,
    Centimeter,
    Meter,
    LightYear,
    PerSecond,
    SquareCentimeter,
    PerCubicCentimeter,
    Dimensionless,
};

enum class Dimension {
    Energy,
    Time,
    Length,
    Rate,
    CrossSection,
    NumberDensity,
    Dimensionless,
};

constexpr Dimension dimension_of(Unit u) {
    switch (u) {
        case Unit::ElectronVolt:
        case Unit::GigaElectronVolt: return Dimension::Energy;
        case Unit::Second:
        case Unit::Year: return Dimension::Time;
        case Unit::Centimeter:
        case Unit::Meter:
        case Unit::LightYear: return Dimension::Length;
        case Unit::PerSecond: return Dimension::Rate;
        case Unit::SquareCentimeter: return Dimension::CrossSection;
        case Unit::PerCubicCentimeter: return Dimension::NumberDensity;
        case Unit::Dimensionless: return Dimension::Dimensionless;
    }
    return Dimension::Dimensionless;
}

constexpr const char* unit_name(Unit u) {
    switch (u) {
        case Unit::ElectronVolt: return "eV";
        case Unit::GigaElectronVolt: return "GeV";
        case Unit::Second: return "s";
        case Unit::Year: return "yr";
        case Unit::Centimeter: return "cm";
        case Unit::Meter: return "m";
        case Unit::LightYear: return "ly";
        case Unit::PerSecond: return "1/s";
        case Unit::SquareCentimeter: return "cm^2";
        case Unit::PerCubicCentimeter: return "1/cm^3";
        case Unit::Dimensionless: return "dimensionless";
    }
    return "?";
}

namespace detail {

// Scale factor to the canonical unit of the dimension (eV, s, cm, ...).
// Julian year and the IAU light-year (c * Julian year).
constexpr double canonical_factor(Unit u) {
    switch (u) {
        case Unit::ElectronVolt: return 1.0;
        case Unit::GigaElectronVolt: return 1e9;
        case Unit::Second: return 1.0;
        case Unit::Year: return 3.15576e7;
        case Unit::Centimeter: return 1.0;
        case Unit::Meter: return 1e2;
        case Unit::LightYear: return 9.4607304725808e17;
        case Unit::PerSecond: return 1.0;
        case Unit::SquareCentimeter: return 1.0;
        case Unit::PerCubicCentimeter: return 1.0;
        case Unit::Dimensionless: return 1.0;
    }
    return 1.0;
}

}  // namespace detail

/// A value with a runtime dimension tag. Arithmetic across dimensions is
/// rejected; this is deliberately not a full dimensional-analysis engine.
struct Quantity {
    double value = 0.0;
    Unit unit = Unit::Dimensionless;

    Dimension dimension() const { return dimension_of(unit); }
};

/// Convert between units. Within a dimension this is an exact rescale.
/// Length <-> time is additionally supported with v = c assumed (flight
/// baselines and times are used interchangeably throughout); every other
/// cross-dimension request is an error naming both tags.
inline Quantity convert(const Quantity& q, Unit target) {
    const Dimension from = dimension_of(q.unit);
    const Dimension to = dimension_of(target);
    const double in_canonical = q.value * detail::canonical_factor(q.unit);
    if (from == to) {
        return {in_canonical / detail::canonical_factor(target), target};
    }
    if (from == Dimension::Length && to == Dimension::Time) {
        return {in_canonical / constants.c_cm_per_s / detail::canonical_factor(target), target};
    }
    if (from == Dimension::Time && to == Dimension::Length) {
        return {in_canonical * constants.c_cm_per_s / detail::canonical_factor(target), target};
    }
    throw UnitError(std::string("no conversion from ") + unit_name(q.unit) + " to " + unit_name(target));
}

namespace detail {

inline void require_same_dimension(const Quantity& a, const Quantity& b, const char* op) {
    if (dimension_of(a.unit) != dimension_of(b.unit)) {
        throw UnitError(std::string(op) + " between mismatched dimensions: " + unit_name(a.unit) +
                        " vs " + unit_name(b.unit));
    }
}

}  // namespace detail

inline Quantity operator+(const Quantity& a, const Quantity& b) {
    detail::require_same_dimension(a, b, "addition");
    return {a.value + convert(b, a.unit).value, a.unit};
}

inline Quantity operator-(const Quantity& a, const Quantity& b) {
    detail::require_same_dimension(a, b, "subtraction");
    return {a.value - convert(b, a.unit).value, a.unit};
}

inline Quantity operator*(double s, const Quantity& q) { return {s * q.value, q.unit}; }
inline Quantity operator*(const Quantity& q, double s) { return {s * q.value, q.unit}; }
inline Quantity operator/(const Quantity& q, double s) { return {q.value / s, q.unit}; }

/// Dimensionless ratio of two same-dimension quantities.
inline double ratio(const Quantity& a, const Quantity& b) {
    detail::require_same_dimension(a, b, "ratio");
    return a.value / convert(b, a.unit).value;
}

}  // namespace nudamp
