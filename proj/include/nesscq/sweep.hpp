// sweep.hpp — Parameter sweeps, analytic/numeric comparison and self checks

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nesscq/reservoirs.hpp"
#include "nesscq/system_model.hpp"

namespace nesscq::sweep {

inline constexpr int kSchemaVersion = 1;

enum class Mode { analytic, numeric, both };
enum class OutputFormat { csv, matrix };

// offset:    T2 = T1 + ΔT, μ2 = μ1 + Δμ
// symmetric: T1,2 = T̄ ∓ ΔT/2, μ1,2 = μ̄ ∓ Δμ/2 with the template means held fixed
enum class Parameterization { offset, symmetric };

Mode parse_mode(const std::string& s);
OutputFormat parse_format(const std::string& s);
const char* to_string(Mode m);

// One swept field. Recognised parameters:
//   T, mu, T1, T2, mu1, mu2, delta_T, delta_mu, lambda, omega, omega1, omega2,
//   detuning (ω1,2 = ω̄ ± Δ/2), J, J1, J2, alpha1, alpha2, alpha_ratio (α2 = r α1)
struct Axis {
    std::string parameter;
    std::vector<double> values; // nonempty, strictly increasing
};

// Random flat-equal-J draws for oracle comparisons.
struct RandomGrid {
    std::size_t count{1000};
    std::uint64_t seed{1};
};

struct SweepConfig {
    std::string name;
    Statistics statistics{Statistics::boson};
    QubitPairParams qubits{10.0, 10.0, 6.0};
    BathSpec bath1;
    BathSpec bath2;
    Parameterization parameterization{Parameterization::offset};
    std::vector<Axis> axes;
    Mode mode{Mode::both};
    bool secular{false};
    bool phase_diagram{false};
    std::string output_path;
    OutputFormat format{OutputFormat::csv};
    std::string matrix_quantity{"concurrence"};
    unsigned workers{0}; // 0 = hardware concurrency
    std::optional<RandomGrid> random;

    // Throws ConfigError.
    void validate() const;
};

SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SweepConfig& c);

struct GridPoint {
    QubitPairParams qubits;
    BathSpec bath1;
    BathSpec bath2;
};

std::size_t grid_size(const SweepConfig& c);
std::vector<double> axis_values_at(const SweepConfig& c, std::size_t index);
// Applies the swept values at row `index` (row-major, first axis outermost).
GridPoint grid_point(const SweepConfig& c, std::size_t index);

struct ResultRow {
    std::vector<double> axis_values;
    GridPoint point;
    std::string status{"ok"}; // "ok", or the reason the point was not computed
    std::array<double, 4> populations{};
    cplx rho34{};
    double abs_w{0.0};
    double concurrence{0.0};
    double current1{0.0};
    double current2{0.0};
    double residual{0.0};
    double min_eigenvalue{0.0};
    bool positivity_ok{true};
    bool positivity_warning{false};
    bool markov_warning{false};
    double analytic_diff{0.0}; // NaN unless mode == both

    bool ok() const { return status == "ok"; }
};

struct SweepResult {
    SweepConfig config;
    std::vector<ResultRow> rows;
};

ResultRow evaluate_point(const SweepConfig& c, std::size_t index);
SweepResult run_sweep(const SweepConfig& c);

// Value of a named quantity in a row, used by the matrix writer:
// concurrence, abs_rho34, abs_w, I1, I2, min_eigenvalue, rho11..rho44.
double row_quantity(const ResultRow& r, const std::string& quantity);

void write_csv(const SweepResult& result, std::ostream& os);
void write_matrix(const SweepResult& result, std::ostream& os);

// Evaluates fn(i) for i in [0, n) across `workers` threads; results are indexed,
// so ordering does not depend on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, Fn&& fn);

struct ComparisonReport {
    std::string name;
    std::size_t points{0};
    std::size_t skipped{0};
    double max_diff{0.0};
    double mean_diff{0.0};
    std::size_t worst_index{0};
    // Largest |ρ34| over grid points whose two baths coincide.
    double equal_bath_max_rho34{0.0};
    std::size_t equal_bath_points{0};
    double tolerance{1e-8};
    bool passed{false};
};

inline constexpr double kComparisonTolerance = 1e-8;

// Random flat-equal-J configuration number `index` of a seeded stream.
GridPoint random_point(std::uint64_t seed, std::size_t index);

ComparisonReport run_comparison(const SweepConfig& c);
nlohmann::json to_json(const ComparisonReport& r);

struct CheckResult {
    std::string name;
    bool passed{false};
    double value{0.0};
    double threshold{0.0};
    std::string detail;
};

struct SelfCheckReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

SelfCheckReport run_selfcheck();
nlohmann::json to_json(const SelfCheckReport& r);

} // namespace nesscq::sweep

#include "nesscq/detail/parallel.hpp"
