#include "nesscq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nesscq/error.hpp"

namespace nesscq {

XConcurrence x_state_concurrence(double a, double d, cplx w) {
    const double ad = a * d;
    // Re√(ad) is zero for ad < 0.
    const double root = ad > 0.0 ? std::sqrt(ad) : 0.0;
    return {2.0 * std::max(0.0, std::abs(w) - root), ad < 0.0};
}

double concurrence(const DensityMatrix& rho) {
    if (rho.basis() != Basis::bare) throw BasisMismatch("concurrence expects a bare-basis state");
    const Matrix4cd& m = rho.entries();
    // X pattern in the {ee, gg, eg, ge} ordering: diagonal plus (ee,gg) and (eg,ge).
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool x = i == j || (i / 2 == j / 2);
            if (!x && std::abs(m(i, j)) > 1e-10) {
                std::ostringstream os;
                os << "state is not an X-state: |rho(" << i << "," << j << ")| = " << std::abs(m(i, j));
                throw NotXState(os.str());
            }
        }
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double b = m(2, 2).real(), c = m(3, 3).real();
    const double by_w = x_state_concurrence(a, d, m(2, 3)).value;
    const double by_z = x_state_concurrence(b, c, m(0, 1)).value;
    return std::max(by_w, by_z);
}

double wootters_concurrence(const Matrix4cd& rho) {
    // σy⊗σy in the {ee, gg, eg, ge} ordering.
    Matrix4cd flip = Matrix4cd::Zero();
    flip(0, 1) = flip(1, 0) = -1.0;
    flip(2, 3) = flip(3, 2) = 1.0;
    const Matrix4cd tilde = flip * rho.conjugate() * flip;
    const Matrix4cd r = rho * tilde;
    Eigen::ComplexEigenSolver<Matrix4cd> es(r, false);
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Coherences coherences(const DensityMatrix& rho_eigen, const EigenSystem& eig) {
    return {rho_eigen(2, 3), bare_components(rho_eigen, eig).w};
}

EnergyCurrents energy_current(const Liouvillian& L, const EigenSystem& eig,
                              const DensityMatrix& rho_ss) {
    const Vector6cd v = to_vector(rho_ss);
    const double residual = (L.matrix() * v).norm();
    const double limit = kSteadyResidualTol * L.matrix().norm();
    if (!(residual <= limit)) {
        std::ostringstream os;
        os << "state is not stationary: residual " << residual << " > " << limit;
        throw NotSteadyState(os.str(), residual);
    }
    // H_s is diagonal in the eigen basis, so Tr{D_i[ρ] H_s} only sees population rates.
    auto current = [&](int bath) {
        const Vector6cd rate = L.dissipator(bath) * v;
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) sum += eig.energies[k] * rate(k).real();
        return sum;
    };
    return {current(1), current(2)};
}

ObservableSet observe(const Liouvillian& L, const EigenSystem& eig, const DensityMatrix& rho_ss) {
    ObservableSet o;
    const BareComponents bare = bare_components(rho_ss, eig);
    const XConcurrence xc = x_state_concurrence(bare.a, bare.d, bare.w);
    o.concurrence = xc.value;
    o.positivity_warning = xc.used_real_part;
    o.w = bare.w;
    o.rho34 = rho_ss(2, 3);
    o.bare_populations = {bare.a, bare.b, bare.c, bare.d};
    o.currents = energy_current(L, eig, rho_ss);
    return o;
}

} // namespace nesscq
