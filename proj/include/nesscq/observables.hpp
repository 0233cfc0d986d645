// observables.hpp — Concurrence, coherences and energy currents of steady states

#pragma once

#include <array>

#include "nesscq/redfield.hpp"
#include "nesscq/system_model.hpp"

namespace nesscq {

struct XConcurrence {
    double value{0.0};
    // True when ad < 0 and only Re√(ad) = 0 was used.
    bool used_real_part{false};
};

// 2 max(0, |w| − √(ad)) on bare-basis X-state components.
XConcurrence x_state_concurrence(double a, double d, cplx w);

// Bare-basis X-state concurrence. Throws NotXState when entries outside the
// X pattern exceed 1e-10, BasisMismatch for eigen-basis input.
double concurrence(const DensityMatrix& rho_bare);

// Wootters concurrence from the spin-flipped spectrum. Works on any two-qubit
// state in the bare ordering {ee, gg, eg, ge}; kept as an independent check.
double wootters_concurrence(const Matrix4cd& rho_bare);

struct Coherences {
    cplx rho34{}; // eigen basis
    cplx w{};     // bare basis, <eg|ρ|ge>
};

Coherences coherences(const DensityMatrix& rho_eigen, const EigenSystem& eig);

struct EnergyCurrents {
    double bath1{0.0}; // I1, energy per unit time from bath 1 into the qubits
    double bath2{0.0}; // I2
};

// Residual threshold, relative to ‖M‖, for accepting a state as stationary.
inline constexpr double kSteadyResidualTol = 1e-9;

EnergyCurrents energy_current(const Liouvillian& L, const EigenSystem& eig,
                              const DensityMatrix& rho_ss);

struct ObservableSet {
    double concurrence{0.0};
    cplx w{};
    cplx rho34{};
    std::array<double, 4> bare_populations{}; // a, b, c, d
    EnergyCurrents currents;
    bool positivity_warning{false};
};

ObservableSet observe(const Liouvillian& L, const EigenSystem& eig, const DensityMatrix& rho_ss);

} // namespace nesscq
