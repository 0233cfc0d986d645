// test_observables.cpp — Concurrence, coherences and energy currents

#include <cmath>
#include <random>

#include <doctest.h>

#include "nesscq/analytic.hpp"
#include "nesscq/error.hpp"
#include "nesscq/observables.hpp"
#include "nesscq/redfield.hpp"
#include "oracles.hpp"

using namespace nesscq;
using doctest::Approx;

namespace {

DensityMatrix bare_x(double a, double d, double b, double c, cplx w, cplx z = 0.0) {
    Matrix4cd m = Matrix4cd::Zero();
    m(0, 0) = a;
    m(1, 1) = d;
    m(2, 2) = b;
    m(3, 3) = c;
    m(2, 3) = w;
    m(3, 2) = std::conj(w);
    m(0, 1) = z;
    m(1, 0) = std::conj(z);
    return DensityMatrix(m, Basis::bare);
}

} // namespace

TEST_CASE("concurrence: reference states") {
    CHECK(concurrence(bare_x(0, 0, 0.5, 0.5, -0.5)) == Approx(1.0).epsilon(1e-15));
    CHECK(concurrence(bare_x(0.25, 0.25, 0.25, 0.25, 0.1)) == 0.0);
    CHECK(concurrence(bare_x(0.3, 0.7, 0, 0, 0)) == 0.0);
    CHECK(concurrence(bare_x(0.5, 0.5, 0, 0, 0, 0.5)) == Approx(1.0).epsilon(1e-15));
    const EigenSystem e = diagonalize({10, 10, 6});
    const DensityMatrix eq = to_bare(equilibrium_boson(e, 2.0).rho, e);
    CHECK(concurrence(eq) == Approx(0.0147).epsilon(1e-3));
    CHECK(concurrence(eq) == Approx(wootters_concurrence(eq.entries())).epsilon(1e-12));
}

TEST_CASE("concurrence: input checks") {
    Matrix4cd m = Matrix4cd::Identity() / 4.0;
    m(0, 2) = m(2, 0) = 0.05;
    CHECK_THROWS_AS(concurrence(DensityMatrix(m, Basis::bare)), NotXState);
    CHECK_THROWS_AS(concurrence(DensityMatrix(Matrix4cd::Identity() / 4.0, Basis::eigen)), BasisMismatch);
}

TEST_CASE("x-state formula agrees with Wootters on random X states") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 1000; ++n) {
        std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
        const double t = p[0] + p[1] + p[2] + p[3];
        for (double& x : p) x /= t;
        const cplx w = std::polar(std::sqrt(p[2] * p[3]) * u(rng), 6.283 * u(rng));
        const cplx z = n % 3 ? cplx(0.0) : std::polar(std::sqrt(p[0] * p[1]) * u(rng), 6.283 * u(rng));
        const DensityMatrix rho = bare_x(p[0], p[1], p[2], p[3], w, z);
        const double c = concurrence(rho);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c == Approx(wootters_concurrence(rho.entries())).epsilon(1e-10));
    }
}

TEST_CASE("x-state helper: real-part rule for negative products") {
    const XConcurrence x = x_state_concurrence(-1e-4, 0.9, 0.2);
    CHECK(x.used_real_part);
    CHECK(x.value == Approx(0.4));
    CHECK_FALSE(x_state_concurrence(0.01, 0.9, 0.2).used_real_part);
}

TEST_CASE("coherences") {
    const EigenSystem sym = diagonalize({10, 10, 6});
    const DensityMatrix rho = DensityMatrix::from_block({0.1, 0.5, 0.15, 0.25}, cplx(0.03, -0.07), Basis::eigen);
    const Coherences c = coherences(rho, sym);
    CHECK(c.rho34 == cplx(0.03, -0.07));
    CHECK(std::abs(c.w - cplx(0.5 * (0.15 - 0.25), -0.07)) < 1e-15);

    const EigenSystem asym = diagonalize({12, 8, 3});
    const AnalyticSteadyState eq = general_steady_state(asym, BathSpec::boson(2.0), BathSpec::boson(2.0));
    const Coherences ce = coherences(eq.rho, asym);
    CHECK(ce.rho34 == cplx(0.0, 0.0));
    CHECK(std::abs(ce.w - 0.5 * std::sin(asym.theta) * (eq.rho(2, 2) - eq.rho(3, 3))) < 1e-15);

    const Coherences mixed = coherences(DensityMatrix(Matrix4cd::Identity() / 4.0, Basis::eigen), asym);
    CHECK(std::abs(mixed.rho34) == 0.0);
    CHECK(std::abs(mixed.w) < 1e-16);
}

TEST_CASE("energy current: equilibrium, direction and conservation") {
    const EigenSystem e = diagonalize({10, 10, 6});
    for (const BathSpec& b : {BathSpec::boson(2.0), BathSpec::fermion(1.5, 4.0)}) {
        const Liouvillian L = build_generator(e, b, b);
        const EnergyCurrents I = energy_current(L, e, steady_state(L).rho);
        CHECK(std::abs(I.bath1) < 1e-12);
        CHECK(std::abs(I.bath2) < 1e-12);
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> T(0.5, 5.0), mu(-5.0, 25.0);
    for (int n = 0; n < 200; ++n) {
        const EigenSystem ea = diagonalize({10.0 + (n % 5) - 2.0, 10.0, 6.0});
        BathSpec b1 = BathSpec::boson(T(rng)), b2 = BathSpec::boson(T(rng));
        if (n % 2) {
            const double t = T(rng);
            b1 = BathSpec::fermion(t, mu(rng));
            b2 = BathSpec::fermion(t, mu(rng));
        }
        const Liouvillian L = build_generator(ea, b1, b2);
        const EnergyCurrents I = energy_current(L, ea, steady_state(L).rho);
        CHECK(std::abs(I.bath1 + I.bath2) < 1e-12);
        const bool hotter2 = b2.temperature > b1.temperature + 1e-9;
        const bool higher_mu2 = b2.chemical_potential > b1.chemical_potential + 1e-9;
        if (n % 2 == 0 && hotter2) CHECK(I.bath2 > 0.0);
        if (n % 2 == 1 && higher_mu2) CHECK(I.bath2 > 0.0);
    }
}

TEST_CASE("energy current grows with coupling for boson baths") {
    for (double dT : {1.0, 2.5, 5.0}) {
        double prev = 0.0;
        for (double lambda : {4.0, 6.0, 8.0}) {
            const EigenSystem e = diagonalize({10, 10, lambda});
            const Liouvillian L = build_generator(e, BathSpec::boson(2.0), BathSpec::boson(2.0 + dT));
            const double I2 = energy_current(L, e, steady_state(L).rho).bath2;
            CHECK(I2 > prev);
            prev = I2;
        }
    }
}

TEST_CASE("energy current rejects non-stationary input") {
    const EigenSystem e = diagonalize({10, 10, 6});
    const Liouvillian L = build_generator(e, BathSpec::boson(2.0), BathSpec::boson(4.0));
    try {
        energy_current(L, e, DensityMatrix(Matrix4cd::Identity() / 4.0, Basis::eigen));
        FAIL("expected NotSteadyState");
    } catch (const NotSteadyState& err) {
        CHECK(err.residual() > 1e-3);
    }
}

TEST_CASE("concurrence is invariant under swapping qubits and baths") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const double w1 = 6 + 8 * u(rng), w2 = 6 + 8 * u(rng), lambda = 1 + 8 * u(rng);
        BathSpec b1 = BathSpec::boson(0.5 + 4 * u(rng)), b2 = BathSpec::boson(0.5 + 4 * u(rng));
        if (n % 2) {
            b1 = BathSpec::fermion(1.5, -2 + 20 * u(rng));
            b2 = BathSpec::fermion(1.5, -2 + 20 * u(rng));
        }
        const EigenSystem e = diagonalize({w1, w2, lambda});
        const EigenSystem s = diagonalize({w2, w1, lambda});
        const DensityMatrix r = steady_state(build_generator(e, b1, b2)).rho;
        const DensityMatrix rs = steady_state(build_generator(s, b2, b1)).rho;
        CHECK(observe(build_generator(e, b1, b2), e, r).concurrence ==
              Approx(observe(build_generator(s, b2, b1), s, rs).concurrence).epsilon(1e-12));
    }
}

TEST_CASE("observe bundles every quantity") {
    const EigenSystem e = diagonalize({10, 10, 6});
    const Liouvillian L = build_generator(e, BathSpec::boson(1.2), BathSpec::boson(3.0));
    const DensityMatrix rho = steady_state(L).rho;
    const ObservableSet o = observe(L, e, rho);
    const DensityMatrix bare = to_bare(rho, e);
    CHECK(o.concurrence == Approx(concurrence(bare)).epsilon(1e-14));
    CHECK(o.rho34 == rho(2, 3));
    CHECK(std::abs(o.w - bare(2, 3)) < 1e-15);
    CHECK(o.bare_populations[0] == Approx(bare(0, 0).real()));
    CHECK(o.bare_populations[3] == Approx(bare(1, 1).real()));
    CHECK(o.currents.bath2 > 0.0);
    CHECK_FALSE(o.positivity_warning);
}
