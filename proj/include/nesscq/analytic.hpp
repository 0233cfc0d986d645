// analytic.hpp — Closed-form steady states and entanglement thresholds
//
// A single implementation covers detuned qubits in unequal baths. The symmetric
// and equilibrium cases are obtained from it, since the occupation map reduces
// to the identity at θ = π/2 and the nonequilibrium indicators vanish when the
// two baths coincide.

#pragma once

#include <array>

#include "nesscq/reservoirs.hpp"
#include "nesscq/system_model.hpp"

namespace nesscq {

// N_i^± = N_i((δ ± Ω)/2) for baths 1 and 2.
struct BathOccupations {
    double n1_plus{0.0};
    double n1_minus{0.0};
    double n2_plus{0.0};
    double n2_minus{0.0};
};

struct OccupationSummary {
    double n_bar_plus{0.0};
    double n_bar_minus{0.0};
    double n_tilde_plus{0.0};
    double n_tilde_minus{0.0};
    // θ-mapped variants used by the detuned solution.
    double script_bar_plus{0.0};
    double script_bar_minus{0.0};
    double script_tilde_plus{0.0};
    double script_tilde_minus{0.0};
    double omega_prime{0.0}; // Ω / J
};

OccupationSummary summarize(const BathOccupations& n, double theta, double omega_prime);

struct AnalyticIntermediates {
    // Boson only.
    double r1{0.0}, r2{0.0}, s1{0.0}, s2{0.0};
    double R{0.0};
    double normalization{1.0};
    // Fermion only; equals |ρ34|².
    double R_tilde{0.0};
};

struct AnalyticSteadyState {
    DensityMatrix rho;  // eigen basis
    cplx w{};           // bare-basis coherence
    double concurrence{0.0};
    OccupationSummary occupations;
    AnalyticIntermediates intermediates;
    // Set when ρ11ρ22 < 0 and only Re√(ρ11ρ22) entered the concurrence.
    bool positivity_warning{false};
};

// Closed form from raw occupations. Useful for asymptotic substitutions such as
// N2± = 1 (saturated fermion bath).
AnalyticSteadyState steady_state_from_occupations(Statistics statistics, const EigenSystem& eig,
                                                  double coupling, const BathOccupations& n);

// Both baths flat with one common J and the same statistics; otherwise throws
// UnsupportedClosedForm.
AnalyticSteadyState general_steady_state(const EigenSystem& eig, const BathSpec& bath1,
                                         const BathSpec& bath2);

// Symmetric qubits (Δ = 0) in equal baths.
AnalyticSteadyState equilibrium_boson(const EigenSystem& eig, double temperature, double coupling = 1.0);
AnalyticSteadyState equilibrium_fermion(const EigenSystem& eig, double temperature, double mu,
                                        double coupling = 1.0);

// [sinh(λ/2T) − 1] / [cosh((ω − μ)/T) + cosh(λ/2T)], evaluated without overflow.
// Concurrence of the symmetric equilibrium state is max(0, this).
double equilibrium_entanglement_measure(double omega, double lambda, double temperature,
                                        double mu = 0.0);

// −sinh(λ/2T) / (2[cosh((ω − μ)/T) + cosh(λ/2T)]), the equilibrium bare coherence.
double equilibrium_bare_coherence(double omega, double lambda, double temperature, double mu = 0.0);

// Concurrence at μ = ω: [sinh(λ/2T) − 1] / [1 + cosh(λ/2T)], clipped at 0.
double fermion_max_concurrence(double lambda, double temperature);

struct EffectiveParameters {
    Statistics statistics{Statistics::boson};
    double value{0.0}; // T̄ for bosons, μ̄ for fermions
    bool approximation_valid{true};
};

// Largest |ΔT|/T̄ for which T̄ is flagged as a valid effective temperature.
// Fermions use |Δμ| ≤ T at equal temperatures instead.
inline constexpr double kEffectiveSpread = 0.1;

EffectiveParameters effective_parameters(const BathSpec& bath1, const BathSpec& bath2);

enum class ThresholdKind {
    max_temperature, // boson: C > 0 only for T < T_max
    min_coupling,    // fermion: C ≡ 0 for λ ≤ λ_min
};

struct EntanglementThreshold {
    ThresholdKind kind;
    double value;
};

EntanglementThreshold thresholds(const EigenSystem& eig, Statistics statistics, double temperature);

} // namespace nesscq
