// test_reservoirs.cpp — Occupations, spectral densities and rates

#include <cmath>
#include <random>

#include <doctest.h>

#include "nesscq/error.hpp"
#include "nesscq/reservoirs.hpp"

using namespace nesscq;
using doctest::Approx;

TEST_CASE("occupation: reference values") {
    CHECK(occupation(BathSpec::boson(1.0), 1.0) == Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-15));
    CHECK(occupation(BathSpec::boson(1.0), 1.0) == Approx(0.5819767).epsilon(1e-7));
    for (double T : {0.1, 1.5, 30.0}) CHECK(occupation(BathSpec::fermion(T, 7.0), 7.0) == 0.5);
    CHECK(occupation(BathSpec::fermion(1.5, 4.0), 13.0) == Approx(1.0 / (std::exp(6.0) + 1.0)).epsilon(1e-15));
    CHECK(occupation(BathSpec::fermion(1.5, 4.0), 13.0) == Approx(0.0024726).epsilon(1e-5));
}

TEST_CASE("occupation: errors and limits") {
    CHECK_THROWS_AS(occupation(BathSpec::boson(1.0, 1.0, -1.0), 0.5 - 1.5), InvalidParameter);
    CHECK_THROWS_AS(occupation(BathSpec::boson(1.0), 0.0), InvalidParameter);
    CHECK_THROWS_AS(occupation(BathSpec::boson(1.0, 1.0, 0.5), 1.0), InvalidParameter);
    CHECK_THROWS_AS(occupation(BathSpec::boson(0.0), 1.0), InvalidParameter);
    CHECK_THROWS_AS(occupation(BathSpec::fermion(-1.0, 0.0), 1.0), InvalidParameter);
    // Overflow guard: extreme reduced energies give the asymptotic values.
    CHECK(occupation(BathSpec::boson(1e-4), 10.0) == 0.0);
    CHECK(occupation(BathSpec::fermion(1e-4, 0.0), 10.0) == 0.0);
    CHECK(occupation(BathSpec::fermion(1e-4, 20.0), 10.0) == 1.0);
    CHECK(std::isfinite(occupation(BathSpec::boson(1e6), 1e-3)));
}

TEST_CASE("occupation: monotonicity") {
    const BathSpec f = BathSpec::fermion(1.5, 4.0);
    const BathSpec b = BathSpec::boson(2.0);
    for (double w = 0.5; w < 30.0; w += 0.5) {
        CHECK(occupation(f, w + 0.5) < occupation(f, w));
        CHECK(occupation(b, w + 0.5) < occupation(b, w));
    }
    for (double mu = -5.0; mu < 25.0; mu += 0.5)
        CHECK(occupation(BathSpec::fermion(1.5, mu + 0.5), 10.0) > occupation(BathSpec::fermion(1.5, mu), 10.0));
    // Boson divergence as omega approaches mu = 0 from above.
    CHECK(occupation(BathSpec::boson(1.0), 1e-8) > 1e7);
}

TEST_CASE("spectral density") {
    CHECK(spectral_density(BathSpec::boson(1.0, 1.0), 3.7) == 1.0);
    BathSpec ohm = BathSpec::boson(1.0);
    ohm.spectrum = OhmicSpectrum{0.1, 40.0};
    CHECK(spectral_density(ohm, 13.0) == Approx(0.1 * 13.0 * std::exp(-13.0 / 40.0)).epsilon(1e-15));
    CHECK(spectral_density(ohm, 13.0) == Approx(0.93935).epsilon(1e-4));
    CHECK(spectral_density(ohm, 40.0) == Approx(0.1 * 40.0 / std::exp(1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(spectral_density(ohm, 0.0), InvalidParameter);
    ohm.spectrum = OhmicSpectrum{0.0, 40.0};
    CHECK_THROWS_AS(ohm.validate(), InvalidParameter);
    CHECK_THROWS_AS(BathSpec::boson(1.0, 0.0).validate(), InvalidParameter);
}

TEST_CASE("rates: reference values") {
    const RatePair b = rates(BathSpec::boson(2.0), 13.0);
    CHECK(b.gamma == Approx(1.0 / std::expm1(6.5)).epsilon(1e-15));
    CHECK(std::abs(b.gamma - 0.0015053) < 1e-6);
    CHECK(b.big_gamma - b.gamma == Approx(1.0).epsilon(1e-15));
    const RatePair f = rates(BathSpec::fermion(1.5, 10.0), 10.0);
    CHECK(f.gamma == 0.5);
    CHECK(f.big_gamma == 0.5);
    const RatePair cold = rates(BathSpec::boson(1e-3, 0.7), 10.0);
    CHECK(cold.gamma == 0.0);
    CHECK(cold.big_gamma == 0.7);
}

TEST_CASE("rates: sum rules and detailed balance") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> T(0.2, 8.0), w(0.5, 25.0), mu(-5.0, 25.0), J(0.1, 3.0);
    for (int n = 0; n < 500; ++n) {
        const double t = T(rng), om = w(rng), j = J(rng), m = mu(rng);
        const RatePair b = rates(BathSpec::boson(t, j), om);
        CHECK(b.big_gamma - b.gamma == Approx(j).epsilon(1e-12));
        CHECK(b.gamma >= 0.0);
        CHECK(b.gamma / b.big_gamma == Approx(std::exp(-om / t)).epsilon(1e-12));
        const RatePair f = rates(BathSpec::fermion(t, m, j), om);
        CHECK(f.big_gamma + f.gamma == Approx(j).epsilon(1e-12));
        CHECK(f.gamma >= 0.0);
        CHECK(f.big_gamma >= 0.0);
        if (std::abs(om - m) / t < 30.0)
            CHECK(f.gamma / f.big_gamma == Approx(std::exp(-(om - m) / t)).epsilon(1e-12));
    }
}

TEST_CASE("transition frequencies") {
    auto f = transition_frequencies(diagonalize({10, 10, 6}));
    CHECK(f.plus == 13);
    CHECK(f.minus == 7);
    f = transition_frequencies(diagonalize({12, 8, 3}));
    CHECK(f.plus == Approx(12.5).epsilon(1e-15));
    CHECK(f.minus == Approx(7.5).epsilon(1e-15));
    f = transition_frequencies(diagonalize({10, 10, 19.9999}));
    CHECK(f.plus == Approx(20.0).epsilon(1e-5));
    CHECK(f.minus > 0.0);
    CHECK(f.minus < 1e-4);
}

TEST_CASE("Markovian warning") {
    const EigenSystem e = diagonalize({10, 10, 6});
    CHECK_FALSE(markovian_warning(e, BathSpec::boson(2.0, 0.5), BathSpec::boson(2.0, 0.5)).has_value());
    const auto w = markovian_warning(e, BathSpec::boson(2.0, 1.0), BathSpec::boson(2.0, 1.0));
    REQUIRE(w.has_value());
    CHECK(w->find("Markovian") != std::string::npos);
}
