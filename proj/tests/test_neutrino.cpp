#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nudamp/neutrino.hpp"
#include "test_helpers.hpp"

using namespace nudamp;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exact dispersion", "[neutrino]") {
    CHECK(energy(0.0, 5.0) == 5.0);
    CHECK(energy(3.0, 4.0) == 5.0);
    CHECK(energy(7.0, 0.0) == 7.0);
    // frozen arbitrary-precision value of sqrt((1e6)^2 + 2.2^2)
    CHECK_THAT(energy(1e6, 2.2), WithinRel(1000000.000002420, 1e-15));
    CHECK_THROWS_AS(energy(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(energy(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("dispersion bounds hold for random inputs", "[neutrino]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(-3.0, 19.0);
    for (int i = 0; i < 5000; ++i) {
        const double p = std::pow(10.0, mag(rng));
        const double m = std::pow(10.0, mag(rng));
        const double e = energy(p, m);
        REQUIRE(e >= std::max(p, m));
        REQUIRE(energy(p, 0.0) == p);
    }
}

TEST_CASE("model construction enforces the invariants", "[neutrino]") {
    const std::vector<std::vector<double>> id2 = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK_NOTHROW(NeutrinoModel({0.0, 0.1}, id2));
    CHECK_THROWS_AS(NeutrinoModel({0.1, 0.0}, id2), std::invalid_argument);      // not ascending
    CHECK_THROWS_AS(NeutrinoModel({-0.1, 0.0}, id2), std::invalid_argument);     // negative mass
    CHECK_THROWS_AS(NeutrinoModel({0.1, 0.1}, id2), std::invalid_argument);      // degenerate, unflagged
    CHECK(NeutrinoModel({0.1, 0.1}, id2, {}, true).degenerate_masses());
    CHECK_FALSE(NeutrinoModel({0.0, 0.1}, id2).degenerate_masses());

    // orthogonality violated at the 1e-6 level
    CHECK_THROWS_WITH(NeutrinoModel({0.0, 0.1}, {{1.0, 1e-6}, {0.0, 1.0}}),
                      ContainsSubstring("orthogonal"));

    CHECK_THROWS_AS(NeutrinoModel({0.0, 0.1}, id2, {1.0}), std::invalid_argument);        // width count
    CHECK_THROWS_AS(NeutrinoModel({0.0, 0.1}, id2, {1.0, -1.0}), std::invalid_argument);  // negative width
}

TEST_CASE("two-flavor constructor builds the rotation matrix", "[neutrino]") {
    const double theta = 0.5879;
    const auto m = NeutrinoModel::two_flavor(theta, 7.59e-5, 0.0);
    CHECK(m.mixing(0, 0) == std::cos(theta));
    CHECK(m.mixing(0, 1) == std::sin(theta));
    CHECK(m.mixing(1, 0) == -std::sin(theta));
    CHECK(m.mixing(1, 1) == std::cos(theta));
    CHECK(m.mass_c2(0) == 0.0);
    CHECK_THAT(m.mass_c2(1) * m.mass_c2(1), WithinRel(7.59e-5, 1e-15));
}

TEST_CASE("random orthogonal mixings satisfy row/column orthonormality", "[neutrino]") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 60; ++rep) {
        for (std::size_t n : {2u, 3u, 4u}) {
            const auto u = testutil::random_orthogonal(n, rng);
            const auto masses = testutil::random_masses(n, 2.2, rng);
            const NeutrinoModel model(masses, u);  // throws beyond 1e-12
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0.0, col = 0.0;
                for (std::size_t a = 0; a < n; ++a) {
                    row += model.mixing(i, a) * model.mixing(i, a);
                    col += model.mixing(a, i) * model.mixing(a, i);
                }
                REQUIRE_THAT(row, WithinAbs(1.0, 1e-12));
                REQUIRE_THAT(col, WithinAbs(1.0, 1e-12));
            }
        }
    }
}

TEST_CASE("energy gap: exact, stable, antisymmetric", "[neutrino]") {
    const auto model = NeutrinoModel::two_flavor(0.7, 7.59e-5, 0.0);
    const auto sc = Scenario::from_momentum_time(1e6, 5e2, 0);

    SECTION("identical eigenstate") { CHECK(energy_gap(sc, model, 1, 1) == 0.0); }

    SECTION("ultra-relativistic value against first order") {
        const double gap = energy_gap(sc, model, 0, 1);
        // frozen arbitrary-precision gap for p = 1e6, dm2 = 7.59e-5
        CHECK_THAT(gap, WithinRel(3.7950000000000000157e-11, 1e-13));
        // first-order dm2/2p agrees within the second-order correction
        const double first_order = 7.59e-5 / (2.0 * 1e6);
        const double second_order = 7.59e-5 * 7.59e-5 / (8.0 * 1e18);
        CHECK(std::abs(gap - first_order) <= second_order + 4.0 * std::ldexp(gap, -52));
    }

    SECTION("antisymmetry is exact") {
        CHECK(energy_gap(sc, model, 0, 1) == -energy_gap(sc, model, 1, 0));
    }

    SECTION("non-relativistic sanity: direct subtraction regime") {
        const auto heavy = NeutrinoModel({1.0, 3.0}, {{1.0, 0.0}, {0.0, 1.0}});
        const auto slow = Scenario::from_momentum_time(10.0, 1.0, 0);
        const double direct = std::hypot(10.0, 3.0) - std::hypot(10.0, 1.0);
        CHECK_THAT(energy_gap(slow, heavy, 0, 1), WithinRel(direct, 1e-13));
    }

    SECTION("index validation") {
        CHECK_THROWS_AS(energy_gap(sc, model, 0, 2), std::out_of_range);
    }
}

TEST_CASE("ultra-relativistic expansion error rate", "[neutrino]") {
    SECTION("degenerate masses give zero") {
        CHECK(ur_expansion_error_rate(1e6, 1.3, 1.3) == 0.0);
    }
    SECTION("2.2 eV upper-bound example, frozen oracle") {
        // m_j chosen so m_k^2 - m_j^2 = 7.59e-5 with m_k = 2.2
        const double mj = 2.1999827499323716;
        CHECK_THAT(ur_expansion_error_rate(1e6, mj, 2.2), WithinRel(1.3952690913147804e-7, 1e-12));
    }
    SECTION("masses reproducing the quoted 1.01e10 prefactor") {
        const double mj = 0.59187385435566312, mk = 0.59193796927535297;
        // frozen oracle at the same double inputs
        CHECK_THAT(ur_expansion_error_rate(1e6, mj, mk), WithinRel(1.0099999999996242e-8, 1e-12));
        // solar phase error lands within one decade of 1e-6
        const double err_t = ur_expansion_error_rate(1e6, mj, mk) * 5e2;
        CHECK(std::abs(std::log10(err_t) - std::log10(1e-6)) <= 1.0);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(ur_expansion_error_rate(0.0, 0.1, 0.2), std::domain_error);
        CHECK_THROWS_AS(ur_expansion_error_rate(1e6, -0.1, 0.2), std::invalid_argument);
    }
}

TEST_CASE("scenario construction", "[neutrino]") {
    CHECK_THROWS_AS(Scenario::from_momentum_time(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::from_momentum_time(-1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::from_momentum_time(1.0, -1.0, 0), std::invalid_argument);
    CHECK(Scenario::from_momentum_time(1.0, 0.0, 0).time_s() == 0.0);  // no-evolution limit

    const auto sc = Scenario::from_energy_baseline(1e19, 9.4607304725808e17, 1);
    CHECK(sc.energy_specified());
    CHECK(sc.baseline_specified());
    CHECK_THAT(sc.time_s(), WithinRel(3.15576e7, 1e-12));  // one light-year at v = c
    CHECK(sc.initial_flavor() == 1);
}
