// redfield.hpp — Non-secular Bloch-Redfield generator on (ρ11, ρ22, ρ33, ρ44, ρ34, ρ43)

#pragma once

#include <span>

#include <Eigen/Dense>

#include "nesscq/reservoirs.hpp"
#include "nesscq/system_model.hpp"

namespace nesscq {

using Matrix6cd = Eigen::Matrix<cplx, 6, 6>;
using Vector6cd = Eigen::Matrix<cplx, 6, 1>;

// Indices into the generator state vector.
namespace slot {
inline constexpr int p11 = 0;
inline constexpr int p22 = 1;
inline constexpr int p33 = 2;
inline constexpr int p44 = 3;
inline constexpr int c34 = 4;
inline constexpr int c43 = 5;
} // namespace slot

// The eight rates γ_i^±, Γ_i^± at ω± plus the geometry they were built with.
struct RateContext {
    RatePair bath1_plus;
    RatePair bath1_minus;
    RatePair bath2_plus;
    RatePair bath2_minus;
    double theta{0.0};
    double omega_rabi{0.0};
};

RateContext evaluate_rates(const EigenSystem& eig, const BathSpec& bath1, const BathSpec& bath2);

struct GeneratorOptions {
    // Drop the non-secular dissipator: all population↔coherence couplings vanish.
    bool secular{false};
};

// d/dt |ρ> = M |ρ>, with M = coherent + D1 + D2.
class Liouvillian {
public:
    Liouvillian(const RateContext& rates, GeneratorOptions options = {});

    const Matrix6cd& matrix() const { return matrix_; }
    const Matrix6cd& coherent() const { return coherent_; }
    // bath is 1 or 2.
    const Matrix6cd& dissipator(int bath) const;
    const RateContext& rates() const { return rates_; }
    bool secular() const { return options_.secular; }

private:
    RateContext rates_;
    GeneratorOptions options_;
    Matrix6cd coherent_;
    Matrix6cd d1_;
    Matrix6cd d2_;
    Matrix6cd matrix_;
};

Liouvillian build_generator(const EigenSystem& eig, const BathSpec& bath1, const BathSpec& bath2,
                            GeneratorOptions options = {});

// Dissipator of one bath written out element by element. Pass zero rates for the
// other bath to isolate a single reservoir; both sets at once give D1 + D2.
Matrix6cd dissipator_elements(double theta, const RatePair& bath1_plus, const RatePair& bath1_minus,
                              const RatePair& bath2_plus, const RatePair& bath2_minus,
                              bool secular = false);

Vector6cd to_vector(const DensityMatrix& rho_eigen);
DensityMatrix from_vector(const Vector6cd& v);

struct SteadyStateReport {
    DensityMatrix rho;
    double residual{0.0};       // ‖M vec(ρ)‖₂
    double generator_norm{0.0}; // ‖M‖_F
    double min_eigenvalue{0.0};
    bool positivity_ok{true};
};

// Schur complement onto the populations, null vector by state reduction when
// the reduced generator has nonnegative real rates (equilibrium, secular) and
// from the first-row cofactors otherwise, then coherences from ρc = −Mcc⁻¹ Mcp ρp.
SteadyStateReport steady_state(const Liouvillian& L);

// Independent route: right singular vector of the full 6×6 M.
SteadyStateReport steady_state_svd(const Liouvillian& L);

// exp(M t) applied to ρ0. Entries of ρ0 outside the six generator slots must vanish.
DensityMatrix propagate(const Liouvillian& L, const DensityMatrix& rho0, double t);

struct PositivityScan {
    double worst_min_eigenvalue{0.0};
    double worst_time{0.0};
    bool violated{false};
};

PositivityScan positivity_scan(const Liouvillian& L, const DensityMatrix& rho0,
                               std::span<const double> t_grid, double tol = kPositivityTol);

} // namespace nesscq
