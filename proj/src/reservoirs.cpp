#include "nesscq/reservoirs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nesscq/error.hpp"

namespace nesscq {

namespace {

// exp() overflows past ~709; beyond this the occupation is taken as its limit.
constexpr double kExponentGuard = 700.0;

// 1/(e^x + 1) without overflow for either sign of x.
double fermi(double x) {
    if (x > kExponentGuard) return 0.0;
    if (x < -kExponentGuard) return 1.0;
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(x) + 1.0);
}

double reduced_energy(const BathSpec& bath, double omega) {
    return (omega - bath.chemical_potential) / bath.temperature;
}

} // namespace

const char* to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

BathSpec BathSpec::boson(double temperature, double coupling, double mu) {
    return BathSpec{Statistics::boson, temperature, mu, FlatSpectrum{coupling}};
}

BathSpec BathSpec::fermion(double temperature, double mu, double coupling) {
    return BathSpec{Statistics::fermion, temperature, mu, FlatSpectrum{coupling}};
}

void BathSpec::validate() const {
    if (!std::isfinite(temperature) || temperature <= 0.0)
        throw InvalidParameter("bath temperature must be positive and finite");
    if (!std::isfinite(chemical_potential))
        throw InvalidParameter("bath chemical potential must be finite");
    if (statistics == Statistics::boson && chemical_potential > 0.0)
        throw InvalidParameter("boson chemical potential must be <= 0");
    if (const auto* flat = std::get_if<FlatSpectrum>(&spectrum)) {
        if (!(flat->coupling > 0.0) || !std::isfinite(flat->coupling))
            throw InvalidParameter("flat spectral density J must be positive");
    } else {
        const auto& ohm = std::get<OhmicSpectrum>(spectrum);
        if (!(ohm.alpha > 0.0) || !(ohm.cutoff > 0.0) || !std::isfinite(ohm.alpha) ||
            !std::isfinite(ohm.cutoff))
            throw InvalidParameter("Ohmic spectrum needs alpha > 0 and omega_c > 0");
    }
}

double occupation(const BathSpec& bath, double omega) {
    bath.validate();
    if (!(omega > 0.0)) throw InvalidParameter("occupation needs omega > 0");
    const double x = reduced_energy(bath, omega);
    if (bath.statistics == Statistics::fermion) return fermi(x);

    if (omega <= bath.chemical_potential) {
        std::ostringstream os;
        os << "Bose-Einstein occupation diverges for omega = " << omega
           << " <= mu = " << bath.chemical_potential;
        throw InvalidParameter(os.str());
    }
    if (x > kExponentGuard) return 0.0;
    return 1.0 / std::expm1(x);
}

double spectral_density(const BathSpec& bath, double omega) {
    if (!(omega > 0.0)) throw InvalidParameter("spectral density needs omega > 0");
    if (const auto* flat = std::get_if<FlatSpectrum>(&bath.spectrum)) return flat->coupling;
    const auto& ohm = std::get<OhmicSpectrum>(bath.spectrum);
    return ohm.alpha * omega * std::exp(-omega / ohm.cutoff);
}

RatePair rates(const BathSpec& bath, double omega) {
    const double n = occupation(bath, omega);
    const double j = spectral_density(bath, omega);
    if (bath.statistics == Statistics::boson) return {j * n, j * (n + 1.0)};
    // 1 − N(x) = N(−x) keeps the emission rate accurate when N → 1.
    return {j * n, j * fermi(-reduced_energy(bath, omega))};
}

TransitionFrequencies transition_frequencies(const EigenSystem& eig) {
    return {0.5 * (eig.delta + eig.omega_rabi), 0.5 * (eig.delta - eig.omega_rabi)};
}

std::optional<std::string> markovian_warning(const EigenSystem& eig, const BathSpec& bath1,
                                             const BathSpec& bath2) {
    const auto f = transition_frequencies(eig);
    const double scale =
        std::min({eig.params.omega1, eig.params.omega2, eig.params.lambda});
    double worst = 0.0;
    for (const BathSpec* b : {&bath1, &bath2})
        worst = std::max({worst, spectral_density(*b, f.plus), spectral_density(*b, f.minus)});
    if (worst <= kMarkovianRatio * scale) return std::nullopt;
    std::ostringstream os;
    os << "spectral density " << worst << " exceeds " << kMarkovianRatio
       << " * min(omega1, omega2, lambda) = " << kMarkovianRatio * scale
       << "; Markovian treatment may be inaccurate";
    return os.str();
}

} // namespace nesscq
