// system_model.hpp — Coupled-qubit Hamiltonian, eigenstructure and basis transforms

#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace nesscq {

using cplx = std::complex<double>;
using Matrix4cd = Eigen::Matrix4cd;

// Eigenvalues below -kPositivityTol count as a positivity violation.
inline constexpr double kPositivityTol = 1e-10;

// Two qubits with frequencies ω1, ω2 and exchange coupling λ (ħ = k_B = 1).
struct QubitPairParams {
    double omega1{0.0};
    double omega2{0.0};
    double lambda{0.0};

    // Throws InvalidParameter / RotatingWaveViolation.
    void validate() const;
};

// Spectral data of H_s. Eigen basis order is {|1>,|2>,|3>,|4>} with
// |1> = |ee>, |2> = |gg>, and |3>,|4> the single-excitation mixtures.
// Bare basis order is {|ee>,|gg>,|eg>,|ge>}.
struct EigenSystem {
    QubitPairParams params;
    double delta{0.0};      // ω1 + ω2
    double big_delta{0.0};  // ω1 − ω2
    double omega_rabi{0.0}; // √(Δ² + λ²)
    double theta{0.0};      // mixing angle in (0, π)
    std::array<double, 4> energies{}; // E1..E4, E2 = 0
    Eigen::Matrix4d u;      // U_ai = <a|i>, bare row, eigen column

    double sin_half() const;
    double cos_half() const;
};

EigenSystem diagonalize(const QubitPairParams& params);

enum class Basis { eigen, bare };

const char* to_string(Basis b);

// 4×4 Hermitian, unit-trace state tagged with the basis it is written in.
// Construction checks Hermiticity and trace to 1e-12; positivity is only
// measured, never enforced.
class DensityMatrix {
public:
    static constexpr double kTolerance = 1e-12;

    DensityMatrix(const Matrix4cd& entries, Basis basis);

    const Matrix4cd& entries() const { return entries_; }
    Basis basis() const { return basis_; }
    cplx operator()(int i, int j) const { return entries_(i, j); }

    double trace() const { return entries_.trace().real(); }
    double min_eigenvalue() const;
    bool positive(double tol = kPositivityTol) const { return min_eigenvalue() >= -tol; }

    // Block form produced by the generator: populations plus ρ34.
    static DensityMatrix from_block(const std::array<double, 4>& populations,
                                    cplx rho34, Basis basis);

private:
    Matrix4cd entries_;
    Basis basis_;
};

// Bare-basis X-state components a, d, b, c, w.
struct BareComponents {
    double a{0.0}; // <ee|ρ|ee>
    double d{0.0}; // <gg|ρ|gg>
    double b{0.0}; // <eg|ρ|eg>
    double c{0.0}; // <ge|ρ|ge>
    cplx w{};      // <eg|ρ|ge>
};

// Componentwise form of UρU† for a block-structured eigen-basis state.
BareComponents bare_components(const DensityMatrix& rho_eigen, const EigenSystem& eig);

DensityMatrix to_bare(const DensityMatrix& rho, const EigenSystem& eig);
DensityMatrix to_eigen(const DensityMatrix& rho, const EigenSystem& eig);

} // namespace nesscq
