// reservoirs.hpp — Bath statistics, spectral densities and transition rates

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "nesscq/system_model.hpp"

namespace nesscq {

enum class Statistics { boson, fermion };

const char* to_string(Statistics s);

struct FlatSpectrum {
    double coupling{1.0}; // J
};

// J(ω) = α ω exp(−ω/ω_c)
struct OhmicSpectrum {
    double alpha{0.0};
    double cutoff{0.0};
};

using Spectrum = std::variant<FlatSpectrum, OhmicSpectrum>;

struct BathSpec {
    Statistics statistics{Statistics::boson};
    double temperature{1.0};
    double chemical_potential{0.0};
    Spectrum spectrum{FlatSpectrum{}};

    static BathSpec boson(double temperature, double coupling = 1.0, double mu = 0.0);
    static BathSpec fermion(double temperature, double mu, double coupling = 1.0);

    // Throws InvalidParameter. Bosons need μ ≤ 0 and T > 0 always.
    void validate() const;
};

// Bose-Einstein or Fermi-Dirac occupation N(ω).
double occupation(const BathSpec& bath, double omega);

double spectral_density(const BathSpec& bath, double omega);

// γ(ω) absorption and Γ(ω) emission rates of one bath.
struct RatePair {
    double gamma{0.0};
    double big_gamma{0.0};
};

RatePair rates(const BathSpec& bath, double omega);

struct TransitionFrequencies {
    double plus{0.0};  // (δ + Ω)/2
    double minus{0.0}; // (δ − Ω)/2
};

TransitionFrequencies transition_frequencies(const EigenSystem& eig);

// Ratio of J(ω±) to min(ω1, ω2, λ) above which the Markov treatment is suspect.
inline constexpr double kMarkovianRatio = 0.1;

// Human-readable warning when either bath couples too strongly at ω±.
std::optional<std::string> markovian_warning(const EigenSystem& eig, const BathSpec& bath1,
                                             const BathSpec& bath2);

} // namespace nesscq
