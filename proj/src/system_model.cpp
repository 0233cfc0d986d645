#include "nesscq/system_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nesscq/error.hpp"

namespace nesscq {

void QubitPairParams::validate() const {
    if (!std::isfinite(omega1) || !std::isfinite(omega2) || !std::isfinite(lambda))
        throw InvalidParameter("qubit parameters must be finite");
    if (omega1 <= 0.0 || omega2 <= 0.0)
        throw InvalidParameter("qubit frequencies must be positive");
    if (lambda <= 0.0)
        throw InvalidParameter("coupling lambda must be positive (use a small value for the uncoupled limit)");
    const double bound = 2.0 * std::sqrt(omega1 * omega2);
    if (lambda >= bound) {
        std::ostringstream os;
        os << "rotating-wave violation: lambda = " << lambda << " >= 2*sqrt(omega1*omega2) = " << bound;
        throw RotatingWaveViolation(os.str());
    }
}

double EigenSystem::sin_half() const { return std::sin(0.5 * theta); }
double EigenSystem::cos_half() const { return std::cos(0.5 * theta); }

EigenSystem diagonalize(const QubitPairParams& params) {
    params.validate();
    EigenSystem e;
    e.params = params;
    e.delta = params.omega1 + params.omega2;
    e.big_delta = params.omega1 - params.omega2;
    e.omega_rabi = std::hypot(e.big_delta, params.lambda);
    // tanθ = λ/Δ on (0, π): acute for ω1 > ω2, obtuse for ω1 < ω2, π/2 at Δ = 0.
    e.theta = e.big_delta == 0.0 ? 0.5 * std::numbers::pi : std::atan2(params.lambda, e.big_delta);
    e.energies = {e.delta, 0.0, 0.5 * (e.delta + e.omega_rabi), 0.5 * (e.delta - e.omega_rabi)};

    const double c = e.cos_half();
    const double s = e.sin_half();
    e.u.setZero();
    e.u(0, 0) = 1.0;
    e.u(1, 1) = 1.0;
    e.u(2, 2) = c;
    e.u(2, 3) = -s;
    e.u(3, 2) = s;
    e.u(3, 3) = c;
    return e;
}

const char* to_string(Basis b) { return b == Basis::eigen ? "eigen" : "bare"; }

DensityMatrix::DensityMatrix(const Matrix4cd& entries, Basis basis)
    : entries_(entries), basis_(basis) {
    if (!entries_.allFinite())
        throw InvalidParameter("density matrix has non-finite entries");
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kTolerance) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (deviation " << herm << ")";
        throw InvalidParameter(os.str());
    }
    const cplx tr = entries_.trace();
    if (std::abs(tr - 1.0) > kTolerance) {
        std::ostringstream os;
        os << "density matrix trace is " << tr.real() << ", expected 1";
        throw InvalidParameter(os.str());
    }
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix4cd h = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

DensityMatrix DensityMatrix::from_block(const std::array<double, 4>& populations, cplx rho34,
                                        Basis basis) {
    Matrix4cd m = Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = populations[i];
    m(2, 3) = rho34;
    m(3, 2) = std::conj(rho34);
    return DensityMatrix(m, basis);
}

BareComponents bare_components(const DensityMatrix& rho_eigen, const EigenSystem& eig) {
    if (rho_eigen.basis() != Basis::eigen)
        throw BasisMismatch("bare_components expects an eigen-basis state");
    const double c2 = eig.cos_half() * eig.cos_half();
    const double s2 = eig.sin_half() * eig.sin_half();
    const double sin_theta = std::sin(eig.theta);
    const double r33 = rho_eigen(2, 2).real();
    const double r44 = rho_eigen(3, 3).real();
    const cplx r34 = rho_eigen(2, 3);
    const cplx r43 = rho_eigen(3, 2);

    BareComponents out;
    out.a = rho_eigen(0, 0).real();
    out.d = rho_eigen(1, 1).real();
    out.b = c2 * r33 + s2 * r44 - 0.5 * sin_theta * (r34 + r43).real();
    out.c = s2 * r33 + c2 * r44 + 0.5 * sin_theta * (r34 + r43).real();
    out.w = 0.5 * sin_theta * (r33 - r44) + c2 * r34 - s2 * r43;
    return out;
}

DensityMatrix to_bare(const DensityMatrix& rho, const EigenSystem& eig) {
    if (rho.basis() != Basis::eigen)
        throw BasisMismatch("to_bare expects an eigen-basis state");
    const Matrix4cd u = eig.u.cast<cplx>();
    Matrix4cd out = u * rho.entries() * u.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(out, Basis::bare);
}

DensityMatrix to_eigen(const DensityMatrix& rho, const EigenSystem& eig) {
    if (rho.basis() != Basis::bare)
        throw BasisMismatch("to_eigen expects a bare-basis state");
    const Matrix4cd u = eig.u.cast<cplx>();
    Matrix4cd out = u.adjoint() * rho.entries() * u;
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(out, Basis::eigen);
}

} // namespace nesscq
