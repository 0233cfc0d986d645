#include "nesscq/redfield.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nesscq/error.hpp"

namespace nesscq {

RateContext evaluate_rates(const EigenSystem& eig, const BathSpec& bath1, const BathSpec& bath2) {
    const auto f = transition_frequencies(eig);
    RateContext ctx;
    ctx.bath1_plus = rates(bath1, f.plus);
    ctx.bath1_minus = rates(bath1, f.minus);
    ctx.bath2_plus = rates(bath2, f.plus);
    ctx.bath2_minus = rates(bath2, f.minus);
    ctx.theta = eig.theta;
    ctx.omega_rabi = eig.omega_rabi;
    return ctx;
}

Matrix6cd dissipator_elements(double theta, const RatePair& b1p, const RatePair& b1m,
                              const RatePair& b2p, const RatePair& b2m, bool secular) {
    using namespace slot;
    const double s2 = std::sin(0.5 * theta) * std::sin(0.5 * theta);
    const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
    // Cross terms between populations and ρ34/ρ43 all carry sinθ/2.
    const double h = secular ? 0.0 : 0.5 * std::sin(theta);

    const double g1p = b1p.gamma, G1p = b1p.big_gamma;
    const double g1m = b1m.gamma, G1m = b1m.big_gamma;
    const double g2p = b2p.gamma, G2p = b2p.big_gamma;
    const double g2m = b2m.gamma, G2m = b2m.big_gamma;

    Matrix6cd m = Matrix6cd::Zero();

    m(p11, p11) = -2.0 * (s2 * (G1m + G2p) + c2 * (G1p + G2m));
    m(p11, p33) = 2.0 * (s2 * g1m + c2 * g2m);
    m(p11, p44) = 2.0 * (c2 * g1p + s2 * g2p);
    m(p11, c34) = m(p11, c43) = h * (g1p + g1m - g2p - g2m);

    m(p22, p22) = -2.0 * (s2 * (g1m + g2p) + c2 * (g1p + g2m));
    m(p22, p33) = 2.0 * (c2 * G1p + s2 * G2p);
    m(p22, p44) = 2.0 * (c2 * G2m + s2 * G1m);
    m(p22, c34) = m(p22, c43) = -h * (G1p + G1m - G2p - G2m);

    m(p33, p11) = 2.0 * (s2 * G1m + c2 * G2m);
    m(p33, p22) = 2.0 * (c2 * g1p + s2 * g2p);
    m(p33, p33) = -2.0 * (s2 * (g1m + G2p) + c2 * (g2m + G1p));
    m(p33, c34) = m(p33, c43) = -h * (g1p - G1m - g2p + G2m);

    m(p44, p11) = 2.0 * (c2 * G1p + s2 * G2p);
    m(p44, p22) = 2.0 * (s2 * g1m + c2 * g2m);
    m(p44, p44) = -2.0 * (c2 * (g1p + G2m) + s2 * (g2p + G1m));
    m(p44, c34) = m(p44, c43) = -h * (g1m - G1p - g2m + G2p);

    for (int row : {c34, c43}) {
        m(row, p11) = h * (G1p + G1m - G2p - G2m);
        m(row, p22) = -h * (g1p + g1m - g2p - g2m);
        m(row, p33) = -h * (g1m - G1p - g2m + G2p);
        m(row, p44) = -h * (g1p - G1m - g2p + G2m);
    }

    const double decay = -s2 * (g1m + G1m + g2p + G2p) - c2 * (g1p + G1p + g2m + G2m);
    m(c34, c34) = decay;
    m(c43, c43) = decay;
    return m;
}

Liouvillian::Liouvillian(const RateContext& rates, GeneratorOptions options)
    : rates_(rates), options_(options) {
    const RatePair none{};
    coherent_ = Matrix6cd::Zero();
    coherent_(slot::c34, slot::c34) = cplx(0.0, -rates.omega_rabi);
    coherent_(slot::c43, slot::c43) = cplx(0.0, rates.omega_rabi);
    d1_ = dissipator_elements(rates.theta, rates.bath1_plus, rates.bath1_minus, none, none,
                              options.secular);
    d2_ = dissipator_elements(rates.theta, none, none, rates.bath2_plus, rates.bath2_minus,
                              options.secular);
    matrix_ = coherent_ + d1_ + d2_;
}

const Matrix6cd& Liouvillian::dissipator(int bath) const {
    if (bath == 1) return d1_;
    if (bath == 2) return d2_;
    throw InvalidParameter("bath index must be 1 or 2");
}

Liouvillian build_generator(const EigenSystem& eig, const BathSpec& bath1, const BathSpec& bath2,
                            GeneratorOptions options) {
    return Liouvillian(evaluate_rates(eig, bath1, bath2), options);
}

Vector6cd to_vector(const DensityMatrix& rho) {
    if (rho.basis() != Basis::eigen)
        throw BasisMismatch("generator acts on eigen-basis states");
    Vector6cd v;
    v << rho(0, 0), rho(1, 1), rho(2, 2), rho(3, 3), rho(2, 3), rho(3, 2);
    return v;
}

DensityMatrix from_vector(const Vector6cd& v) {
    Matrix4cd m = Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = v(i);
    m(2, 3) = v(slot::c34);
    m(3, 2) = v(slot::c43);
    return DensityMatrix(m, Basis::eigen);
}

namespace {

// Stationary vector of a real generator with nonnegative off-diagonal rates
// (columns sum to zero), by subtraction-free state reduction. Empty when the
// matrix lacks that structure or a reduced state has no exit rate.
std::optional<Eigen::Vector4d> stationary_rates(const Matrix4cd& A) {
    const double scale = A.cwiseAbs().maxCoeff();
    Eigen::Matrix4d P;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (std::abs(A(j, i).imag()) > 1e-14 * scale) return std::nullopt;
            P(i, j) = A(j, i).real(); // P(i, j): rate i -> j
            if (i != j && P(i, j) < 0.0) return std::nullopt;
        }
    for (int k = 3; k > 0; --k) {
        double exit = 0.0;
        for (int j = 0; j < k; ++j) exit += P(k, j);
        if (!(exit > 0.0)) return std::nullopt;
        for (int i = 0; i < k; ++i) P(i, k) /= exit;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (i != j) P(i, j) += P(i, k) * P(k, j);
    }
    Eigen::Vector4d pi;
    pi(0) = 1.0;
    for (int j = 1; j < 4; ++j) {
        pi(j) = 0.0;
        for (int i = 0; i < j; ++i) pi(j) += pi(i) * P(i, j);
    }
    return pi / pi.sum();
}

SteadyStateReport make_report(const Liouvillian& L, const Vector6cd& v) {
    std::array<double, 4> pops{};
    for (int i = 0; i < 4; ++i) pops[i] = v(i).real();
    SteadyStateReport r{DensityMatrix::from_block(pops, v(slot::c34), Basis::eigen)};
    r.residual = (L.matrix() * to_vector(r.rho)).norm();
    r.generator_norm = L.matrix().norm();
    r.min_eigenvalue = r.rho.min_eigenvalue();
    r.positivity_ok = r.min_eigenvalue >= -kPositivityTol;
    return r;
}

} // namespace

SteadyStateReport steady_state(const Liouvillian& L) {
    const Matrix6cd& M = L.matrix();
    const Matrix4cd Mpp = M.topLeftCorner<4, 4>();
    const Eigen::Matrix<cplx, 4, 2> Mpc = M.topRightCorner<4, 2>();
    const Eigen::Matrix<cplx, 2, 4> Mcp = M.bottomLeftCorner<2, 4>();
    const Eigen::Matrix2cd Mcc = M.bottomRightCorner<2, 2>();

    const double cc_scale = Mcc.cwiseAbs().maxCoeff();
    if (!(std::abs(Mcc.determinant()) > 1e-14 * cc_scale * cc_scale))
        throw SingularGenerator("coherence block M_cc is not invertible");
    const Eigen::Matrix2cd Mcc_inv = Mcc.inverse();

    const Matrix4cd A = Mpp - Mpc * Mcc_inv * Mcp;

    Vector6cd v;
    if (const auto pi = stationary_rates(A)) {
        v.head<4>() = pi->cast<cplx>();
        v.tail<2>() = -Mcc_inv * Mcp * v.head<4>();
        return make_report(L, v);
    }

    // Cofactors of the first row of A span its null space when rank(A) = 3.
    Eigen::Vector4cd cof;
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix3cd minor;
        for (int r = 1; r < 4; ++r)
            for (int c = 0, cc = 0; c < 4; ++c)
                if (c != i) minor(r - 1, cc++) = A(r, c);
        cof(i) = (i % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
    }
    const double a_scale = A.cwiseAbs().maxCoeff();
    const cplx total = cof.sum();
    if (!(std::abs(total) > 1e-13 * a_scale * a_scale * a_scale)) {
        std::ostringstream os;
        os << "reduced population generator has rank < 3; steady state is not unique"
           << " (cofactor sum " << std::abs(total) << ")";
        throw SingularGenerator(os.str());
    }

    v.head<4>() = cof / total;
    v.tail<2>() = -Mcc_inv * Mcp * v.head<4>();
    return make_report(L, v);
}

SteadyStateReport steady_state_svd(const Liouvillian& L) {
    Eigen::JacobiSVD<Matrix6cd> svd(L.matrix(), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(4) > 1e-12 * sv(0)))
        throw SingularGenerator("generator null space has dimension > 1");
    Vector6cd v = svd.matrixV().col(5);
    const cplx total = v.head<4>().sum();
    if (!(std::abs(total) > 0.0)) throw SingularGenerator("null vector has zero trace");
    v /= total;
    return make_report(L, v);
}

DensityMatrix propagate(const Liouvillian& L, const DensityMatrix& rho0, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("propagation time must be >= 0");
    if (rho0.basis() != Basis::eigen) throw BasisMismatch("propagate expects an eigen-basis state");
    const Matrix4cd& e = rho0.entries();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool tracked = i == j || (i == 2 && j == 3) || (i == 3 && j == 2);
            if (!tracked && std::abs(e(i, j)) > DensityMatrix::kTolerance)
                throw InvalidParameter("initial state has coherences outside the generator support");
        }
    if (t == 0.0) return rho0;
    const Matrix6cd prop = (L.matrix() * t).exp();
    return from_vector(prop * to_vector(rho0));
}

PositivityScan positivity_scan(const Liouvillian& L, const DensityMatrix& rho0,
                               std::span<const double> t_grid, double tol) {
    PositivityScan scan;
    bool first = true;
    for (double t : t_grid) {
        const double m = propagate(L, rho0, t).min_eigenvalue();
        if (first || m < scan.worst_min_eigenvalue) {
            scan.worst_min_eigenvalue = m;
            scan.worst_time = t;
            first = false;
        }
    }
    scan.violated = !first && scan.worst_min_eigenvalue < -tol;
    return scan;
}

} // namespace nesscq
