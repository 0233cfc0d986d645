#include "nesscq/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "nesscq/error.hpp"
#include "nesscq/observables.hpp"

namespace nesscq {

namespace {

double flat_coupling(const BathSpec& bath) {
    const auto* flat = std::get_if<FlatSpectrum>(&bath.spectrum);
    if (!flat) throw UnsupportedClosedForm("closed forms need flat spectral densities; use the numerical engine");
    return flat->coupling;
}

void require_symmetric(const EigenSystem& eig, const char* who) {
    if (eig.big_delta != 0.0)
        throw InvalidParameter(std::string(who) + " needs symmetric qubits (omega1 == omega2)");
}

// sinh/cosh combinations of a = λ/2T and b = (ω − μ)/T, all scaled by e^{-m}.
struct ScaledHyperbolic {
    double sinh_a, cosh_a, cosh_b, one;
};

ScaledHyperbolic scaled(double a, double b) {
    b = std::abs(b);
    const double m = std::max(a, b);
    return {0.5 * (std::exp(a - m) - std::exp(-a - m)), 0.5 * (std::exp(a - m) + std::exp(-a - m)),
            0.5 * (std::exp(b - m) + std::exp(-b - m)), std::exp(-m)};
}

} // namespace

OccupationSummary summarize(const BathOccupations& n, double theta, double omega_prime) {
    OccupationSummary s;
    s.n_bar_plus = 0.5 * (n.n1_plus + n.n2_plus);
    s.n_bar_minus = 0.5 * (n.n1_minus + n.n2_minus);
    s.n_tilde_plus = 0.5 * (n.n1_plus - n.n2_plus);
    s.n_tilde_minus = 0.5 * (n.n1_minus - n.n2_minus);
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    s.script_bar_plus = s.n_bar_plus + s.n_tilde_plus * cos_t;
    s.script_bar_minus = s.n_bar_minus - s.n_tilde_minus * cos_t;
    s.script_tilde_plus = s.n_tilde_plus * sin_t;
    s.script_tilde_minus = s.n_tilde_minus * sin_t;
    s.omega_prime = omega_prime;
    return s;
}

AnalyticSteadyState steady_state_from_occupations(Statistics statistics, const EigenSystem& eig,
                                                  double coupling, const BathOccupations& n) {
    if (!(coupling > 0.0)) throw InvalidParameter("coupling J must be positive");
    const OccupationSummary occ = summarize(n, eig.theta, eig.omega_rabi / coupling);
    const double bp = occ.script_bar_plus;
    const double bm = occ.script_bar_minus;
    const double tp = occ.script_tilde_plus;
    const double tm = occ.script_tilde_minus;
    const double op = occ.omega_prime;

    std::array<double, 4> pops{};
    cplx rho34;
    AnalyticIntermediates mid;

    if (statistics == Statistics::boson) {
        const double sum = 1.0 + bp + bm;
        mid.R = 1.0 / (4.0 * sum * sum + op * op);
        mid.r1 = tp + tm * (1.0 + 2.0 * bp + 2.0 * bm);
        mid.r2 = tm + tp * (1.0 + 2.0 * bp + 2.0 * bm);
        mid.s1 = tp - tm * (3.0 + 2.0 * bp + 2.0 * bm);
        mid.s2 = tm - tp * (3.0 + 2.0 * bp + 2.0 * bm);
        mid.normalization =
            (1.0 + 2.0 * bp) * (1.0 + 2.0 * bm) - 16.0 * tp * tm * sum * sum * mid.R;
        const double inv = 1.0 / mid.normalization;
        pops[0] = inv * (bp * bm - mid.r1 * mid.r2 * mid.R);
        pops[1] = inv * ((1.0 + bp) * (1.0 + bm) - mid.s1 * mid.s2 * mid.R);
        pops[2] = inv * (bp * (1.0 + bm) + mid.s1 * mid.r2 * mid.R);
        pops[3] = inv * (bm * (1.0 + bp) + mid.s2 * mid.r1 * mid.R);
        rho34 = -inv * (tp * (1.0 + 2.0 * bm) + tm * (1.0 + 2.0 * bp)) / cplx(2.0 * sum, op);
    } else {
        mid.R_tilde = (tp + tm) * (tp + tm) / (4.0 + op * op);
        pops[0] = bp * bm - mid.R_tilde;
        pops[1] = (1.0 - bp) * (1.0 - bm) - mid.R_tilde;
        pops[2] = bp * (1.0 - bm) + mid.R_tilde;
        pops[3] = bm * (1.0 - bp) + mid.R_tilde;
        rho34 = -(tp + tm) / cplx(2.0, op);
    }

    AnalyticSteadyState out{DensityMatrix::from_block(pops, rho34, Basis::eigen), {}, 0.0, occ, mid, false};
    const BareComponents bare = bare_components(out.rho, eig);
    out.w = bare.w;
    const XConcurrence xc = x_state_concurrence(bare.a, bare.d, bare.w);
    out.concurrence = xc.value;
    out.positivity_warning = xc.used_real_part;
    return out;
}

AnalyticSteadyState general_steady_state(const EigenSystem& eig, const BathSpec& bath1,
                                         const BathSpec& bath2) {
    bath1.validate();
    bath2.validate();
    if (bath1.statistics != bath2.statistics)
        throw UnsupportedClosedForm("closed forms need both baths to share statistics");
    const double j1 = flat_coupling(bath1);
    const double j2 = flat_coupling(bath2);
    if (std::abs(j1 - j2) > 1e-12 * std::max(j1, j2))
        throw UnsupportedClosedForm("closed forms need J1 == J2; use the numerical engine");

    const auto f = transition_frequencies(eig);
    const BathOccupations n{occupation(bath1, f.plus), occupation(bath1, f.minus),
                            occupation(bath2, f.plus), occupation(bath2, f.minus)};
    return steady_state_from_occupations(bath1.statistics, eig, j1, n);
}

AnalyticSteadyState equilibrium_boson(const EigenSystem& eig, double temperature, double coupling) {
    require_symmetric(eig, "equilibrium_boson");
    const BathSpec bath = BathSpec::boson(temperature, coupling);
    return general_steady_state(eig, bath, bath);
}

AnalyticSteadyState equilibrium_fermion(const EigenSystem& eig, double temperature, double mu,
                                        double coupling) {
    require_symmetric(eig, "equilibrium_fermion");
    const BathSpec bath = BathSpec::fermion(temperature, mu, coupling);
    return general_steady_state(eig, bath, bath);
}

double equilibrium_entanglement_measure(double omega, double lambda, double temperature, double mu) {
    if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
    const auto h = scaled(0.5 * lambda / temperature, (omega - mu) / temperature);
    return (h.sinh_a - h.one) / (h.cosh_b + h.cosh_a);
}

double equilibrium_bare_coherence(double omega, double lambda, double temperature, double mu) {
    if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
    const auto h = scaled(0.5 * lambda / temperature, (omega - mu) / temperature);
    return -h.sinh_a / (2.0 * (h.cosh_b + h.cosh_a));
}

double fermion_max_concurrence(double lambda, double temperature) {
    return std::max(0.0, equilibrium_entanglement_measure(0.0, lambda, temperature));
}

EffectiveParameters effective_parameters(const BathSpec& bath1, const BathSpec& bath2) {
    bath1.validate();
    bath2.validate();
    if (bath1.statistics != bath2.statistics)
        throw InvalidParameter("effective parameters need both baths to share statistics");
    EffectiveParameters e;
    e.statistics = bath1.statistics;
    if (e.statistics == Statistics::boson) {
        e.value = 0.5 * (bath1.temperature + bath2.temperature);
        e.approximation_valid =
            std::abs(bath2.temperature - bath1.temperature) <= kEffectiveSpread * e.value;
    } else {
        e.value = 0.5 * (bath1.chemical_potential + bath2.chemical_potential);
        e.approximation_valid =
            bath1.temperature == bath2.temperature &&
            std::abs(bath2.chemical_potential - bath1.chemical_potential) <= bath1.temperature;
    }
    return e;
}

EntanglementThreshold thresholds(const EigenSystem& eig, Statistics statistics, double temperature) {
    const double k = 2.0 * std::log(1.0 + std::numbers::sqrt2);
    if (statistics == Statistics::boson)
        return {ThresholdKind::max_temperature, eig.params.lambda / k};
    if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
    return {ThresholdKind::min_coupling, k * temperature};
}

} // namespace nesscq
