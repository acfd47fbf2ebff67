#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nudamp/units.hpp"

using namespace nudamp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("constants carry the stated decimal literals", "[units]") {
    CHECK(constants.hbar_ev_s == 6.582119569e-16);
    CHECK(constants.c_cm_per_s == 2.99792458e10);
    CHECK(constants.m0c2_ev == 938.272e6);
    CHECK(constants.g_newton_si == 6.67430e-11);
    CHECK(constants.g_fermi_gev2 == 1.1663787e-5);
    CHECK(constants.ev_to_joule == 1.602176634e-19);
    CHECK(constants.hbar_ev_s > 0.0);
    CHECK(constants.c_cm_per_s > 0.0);
}

TEST_CASE("definitional conversions", "[units]") {
    CHECK(convert({1.0, Unit::GigaElectronVolt}, Unit::ElectronVolt).value == 1e9);
    CHECK(convert({1.0, Unit::Meter, }, Unit::Centimeter).value == 100.0);
    CHECK(convert({1.0, Unit::Year}, Unit::Second).value == 3.15576e7);

    // flight baseline at v = c: 1e9 light-years of travel
    const Quantity q = convert({1e9, Unit::LightYear}, Unit::Second);
    CHECK(q.unit == Unit::Second);
    CHECK_THAT(q.value, WithinRel(3.15576e16, 1e-12));
}

TEST_CASE("round-trip conversion stays within one ulp", "[units]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mag(-30.0, 30.0);
    const std::pair<Unit, Unit> pairs[] = {
        {Unit::ElectronVolt, Unit::GigaElectronVolt},
        {Unit::Second, Unit::Year},
        {Unit::Centimeter, Unit::Meter},
        {Unit::Centimeter, Unit::LightYear},
    };
    for (int i = 0; i < 2000; ++i) {
        const double v = std::pow(10.0, mag(rng));
        for (const auto& [a, b] : pairs) {
            const Quantity q{v, a};
            const Quantity back = convert(convert(q, b), a);
            REQUIRE(back.unit == a);
            REQUIRE(std::abs(back.value - v) <= std::ldexp(std::abs(v), -52));
        }
    }
}

TEST_CASE("mismatched dimensions are rejected with both tags named", "[units]") {
    CHECK_THROWS_AS(convert({1.0, Unit::ElectronVolt}, Unit::Second), UnitError);
    CHECK_THROWS_WITH(convert({1.0, Unit::ElectronVolt}, Unit::Second),
                      ContainsSubstring("eV") && ContainsSubstring("s"));
    CHECK_THROWS_WITH((Quantity{1.0, Unit::ElectronVolt} + Quantity{1.0, Unit::Second}),
                      ContainsSubstring("eV") && ContainsSubstring("s"));
    CHECK_THROWS_AS((Quantity{2.0, Unit::SquareCentimeter} - Quantity{1.0, Unit::PerCubicCentimeter}),
                    UnitError);
}

TEST_CASE("same-dimension arithmetic converts on the fly", "[units]") {
    const Quantity sum = Quantity{1.0, Unit::GigaElectronVolt} + Quantity{5e8, Unit::ElectronVolt};
    CHECK(sum.unit == Unit::GigaElectronVolt);
    CHECK_THAT(sum.value, WithinRel(1.5, 1e-15));
    CHECK_THAT(ratio({1.0, Unit::Meter}, {50.0, Unit::Centimeter}), WithinRel(2.0, 1e-15));
    CHECK((2.0 * Quantity{3.0, Unit::Second}).value == 6.0);
}
