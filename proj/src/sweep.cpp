#include "nesscq/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "nesscq/analytic.hpp"
#include "nesscq/error.hpp"
#include "nesscq/observables.hpp"
#include "nesscq/redfield.hpp"

namespace nesscq::sweep {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::string kSchemaTag = "nesscq.sweep/" + std::to_string(kSchemaVersion);

// Parameters that set a value outright; applied before the relative ones.
const std::set<std::string> kAbsoluteParameters = {
    "T", "mu", "T1", "T2", "mu1", "mu2", "lambda", "omega", "omega1", "omega2",
    "J", "J1", "J2", "alpha1", "alpha2"};
// Parameters defined relative to the values above.
const std::set<std::string> kRelativeParameters = {"delta_T", "delta_mu", "detuning", "alpha_ratio"};

bool known_parameter(const std::string& p) {
    return kAbsoluteParameters.contains(p) || kRelativeParameters.contains(p);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

Statistics parse_statistics(const std::string& s) {
    if (s == "boson") return Statistics::boson;
    if (s == "fermion") return Statistics::fermion;
    throw ConfigError("statistics must be 'boson' or 'fermion', got '" + s + "'");
}

Spectrum parse_spectrum(const json& j) {
    const auto type = get_or<std::string>(j, "type", "flat");
    if (type == "flat") return FlatSpectrum{get_or<double>(j, "J", 1.0)};
    if (type == "ohmic")
        return OhmicSpectrum{get_or<double>(j, "alpha", 0.0), get_or<double>(j, "cutoff", 0.0)};
    throw ConfigError("spectrum type must be 'flat' or 'ohmic', got '" + type + "'");
}

json spectrum_json(const Spectrum& s) {
    if (const auto* flat = std::get_if<FlatSpectrum>(&s)) return {{"type", "flat"}, {"J", flat->coupling}};
    const auto& ohm = std::get<OhmicSpectrum>(s);
    return {{"type", "ohmic"}, {"alpha", ohm.alpha}, {"cutoff", ohm.cutoff}};
}

BathSpec parse_bath(const json& j, Statistics stat) {
    if (!j.is_object()) throw ConfigError("bath entries must be objects");
    BathSpec b;
    b.statistics = stat;
    b.temperature = get_or<double>(j, "temperature", 1.0);
    b.chemical_potential = get_or<double>(j, "chemical_potential", 0.0);
    b.spectrum = j.contains("spectrum") ? parse_spectrum(j.at("spectrum")) : Spectrum{FlatSpectrum{}};
    return b;
}

json bath_json(const BathSpec& b) {
    return {{"temperature", b.temperature},
            {"chemical_potential", b.chemical_potential},
            {"spectrum", spectrum_json(b.spectrum)}};
}

Axis parse_axis(const json& j) {
    if (!j.is_object()) throw ConfigError("axes entries must be objects");
    Axis a;
    a.parameter = get_or<std::string>(j, "parameter", "");
    if (j.contains("values")) {
        a.values = get_or<std::vector<double>>(j, "values", {});
    } else if (j.contains("start") || j.contains("stop") || j.contains("count")) {
        const double start = get_or<double>(j, "start", 0.0);
        const double stop = get_or<double>(j, "stop", 0.0);
        const auto count = get_or<long long>(j, "count", 0);
        if (count < 1) throw ConfigError("axis '" + a.parameter + "': count must be >= 1");
        a.values.resize(static_cast<std::size_t>(count));
        for (long long i = 0; i < count; ++i)
            a.values[static_cast<std::size_t>(i)] =
                count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    } else {
        throw ConfigError("axis '" + a.parameter + "' needs 'values' or 'start'/'stop'/'count'");
    }
    return a;
}

double& flat_coupling_ref(BathSpec& b, const std::string& who) {
    auto* flat = std::get_if<FlatSpectrum>(&b.spectrum);
    if (!flat) throw ConfigError("parameter '" + who + "' needs a flat spectrum");
    return flat->coupling;
}

double& ohmic_alpha_ref(BathSpec& b, const std::string& who) {
    auto* ohm = std::get_if<OhmicSpectrum>(&b.spectrum);
    if (!ohm) throw ConfigError("parameter '" + who + "' needs an Ohmic spectrum");
    return ohm->alpha;
}

void apply_absolute(GridPoint& p, const std::string& name, double v) {
    if (name == "T") p.bath1.temperature = p.bath2.temperature = v;
    else if (name == "mu") p.bath1.chemical_potential = p.bath2.chemical_potential = v;
    else if (name == "T1") p.bath1.temperature = v;
    else if (name == "T2") p.bath2.temperature = v;
    else if (name == "mu1") p.bath1.chemical_potential = v;
    else if (name == "mu2") p.bath2.chemical_potential = v;
    else if (name == "lambda") p.qubits.lambda = v;
    else if (name == "omega") p.qubits.omega1 = p.qubits.omega2 = v;
    else if (name == "omega1") p.qubits.omega1 = v;
    else if (name == "omega2") p.qubits.omega2 = v;
    else if (name == "J") flat_coupling_ref(p.bath1, name) = flat_coupling_ref(p.bath2, name) = v;
    else if (name == "J1") flat_coupling_ref(p.bath1, name) = v;
    else if (name == "J2") flat_coupling_ref(p.bath2, name) = v;
    else if (name == "alpha1") ohmic_alpha_ref(p.bath1, name) = v;
    else if (name == "alpha2") ohmic_alpha_ref(p.bath2, name) = v;
}

void apply_relative(GridPoint& p, const std::string& name, double v, Parameterization param) {
    if (name == "delta_T" || name == "delta_mu") {
        double& x1 = name == "delta_T" ? p.bath1.temperature : p.bath1.chemical_potential;
        double& x2 = name == "delta_T" ? p.bath2.temperature : p.bath2.chemical_potential;
        if (param == Parameterization::offset) {
            x2 = x1 + v;
        } else {
            const double mean = 0.5 * (x1 + x2);
            x1 = mean - 0.5 * v;
            x2 = mean + 0.5 * v;
        }
    } else if (name == "detuning") {
        const double mean = 0.5 * (p.qubits.omega1 + p.qubits.omega2);
        p.qubits.omega1 = mean + 0.5 * v;
        p.qubits.omega2 = mean - 0.5 * v;
    } else if (name == "alpha_ratio") {
        ohmic_alpha_ref(p.bath2, name) = v * ohmic_alpha_ref(p.bath1, name);
    }
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const Axis* find_axis(const SweepConfig& c, const std::string& name) {
    for (const auto& a : c.axes)
        if (a.parameter == name) return &a;
    return nullptr;
}

// Phase-diagram domain: |Δ| < √(4ω̄² − λ²), and |ΔT| < 2T̄ when ΔT is swept so both T stay positive.
std::optional<std::string> phase_constraint(const SweepConfig& c, const GridPoint& p) {
    const double mean_omega = 0.5 * (p.qubits.omega1 + p.qubits.omega2);
    const double detuning = p.qubits.omega1 - p.qubits.omega2;
    const double limit = std::sqrt(std::max(0.0, 4.0 * mean_omega * mean_omega - p.qubits.lambda * p.qubits.lambda));
    std::ostringstream os;
    if (!(std::abs(detuning) < limit)) {
        os << "constraint: |detuning| = " << std::abs(detuning) << " >= sqrt(4 omega_bar^2 - lambda^2) = " << limit;
        return os.str();
    }
    if (find_axis(c, "delta_T")) {
        const double mean_t = 0.5 * (p.bath1.temperature + p.bath2.temperature);
        const double dt = p.bath2.temperature - p.bath1.temperature;
        if (!(std::abs(dt) < 2.0 * mean_t)) {
            os << "constraint: |delta_T| = " << std::abs(dt) << " >= 2 T_bar = " << 2.0 * mean_t;
            return os.str();
        }
    }
    return std::nullopt;
}

void fill_nan(ResultRow& r) {
    r.populations.fill(kNaN);
    r.rho34 = {kNaN, kNaN};
    r.abs_w = r.concurrence = r.current1 = r.current2 = kNaN;
    r.residual = r.min_eigenvalue = r.analytic_diff = kNaN;
    r.positivity_ok = false;
}

double vector_diff(const DensityMatrix& a, const DensityMatrix& b) {
    return (to_vector(a) - to_vector(b)).cwiseAbs().maxCoeff();
}

} // namespace

Mode parse_mode(const std::string& s) {
    if (s == "analytic") return Mode::analytic;
    if (s == "numeric") return Mode::numeric;
    if (s == "both") return Mode::both;
    throw ConfigError("mode must be analytic, numeric or both; got '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "matrix") return OutputFormat::matrix;
    throw ConfigError("format must be csv or matrix; got '" + s + "'");
}

const char* to_string(Mode m) {
    switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::numeric: return "numeric";
    case Mode::both: return "both";
    }
    return "?";
}

void SweepConfig::validate() const {
    std::set<std::string> seen;
    for (const auto& a : axes) {
        if (!known_parameter(a.parameter)) throw ConfigError("unknown sweep parameter '" + a.parameter + "'");
        if (!seen.insert(a.parameter).second) throw ConfigError("parameter '" + a.parameter + "' swept twice");
        if (a.values.empty()) throw ConfigError("axis '" + a.parameter + "' is empty");
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            if (!std::isfinite(a.values[i])) throw ConfigError("axis '" + a.parameter + "' has a non-finite value");
            if (i > 0 && !(a.values[i] > a.values[i - 1]))
                throw ConfigError("axis '" + a.parameter + "' must be strictly increasing");
        }
    }
    if (axes.empty() && !random) throw ConfigError("config needs at least one axis or a random grid");
    if (bath1.statistics != statistics || bath2.statistics != statistics)
        throw ConfigError("bath statistics must match the config statistics");
    if (mode != Mode::numeric) {
        if (secular) throw ConfigError("the secular generator has no closed form; use mode numeric");
        for (const BathSpec* b : {&bath1, &bath2})
            if (!std::holds_alternative<FlatSpectrum>(b->spectrum))
                throw ConfigError("closed forms need flat spectra with equal J; use mode numeric");
        if (seen.contains("J1") || seen.contains("J2"))
            throw ConfigError("sweeping J1 or J2 separately breaks J1 == J2; use mode numeric");
    }
    if (phase_diagram) {
        if (parameterization != Parameterization::symmetric)
            throw ConfigError("phase-diagram mode needs the symmetric parameterization");
        if (axes.size() != 2 || !seen.contains("detuning") ||
            !(seen.contains("delta_T") || seen.contains("delta_mu")))
            throw ConfigError("phase-diagram mode needs exactly the axes detuning and delta_T or delta_mu");
    }
    if (format == OutputFormat::matrix && axes.size() != 2)
        throw ConfigError("matrix output needs exactly two axes");
    if (random && random->count == 0) throw ConfigError("random grid count must be >= 1");
    // Template check on the first grid point catches spectrum/parameter mismatches early.
    if (!axes.empty()) (void)grid_point(*this, 0);
}

SweepConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const auto schema = get_or<std::string>(j, "schema", "");
    if (schema != kSchemaTag) throw ConfigError("unsupported schema '" + schema + "'; expected '" + kSchemaTag + "'");

    SweepConfig c;
    c.name = get_or<std::string>(j, "name", "");
    c.statistics = parse_statistics(get_or<std::string>(j, "statistics", "boson"));
    if (j.contains("qubits")) {
        const json& q = j.at("qubits");
        c.qubits.omega1 = get_or<double>(q, "omega1", get_or<double>(q, "omega", 10.0));
        c.qubits.omega2 = get_or<double>(q, "omega2", get_or<double>(q, "omega", 10.0));
        c.qubits.lambda = get_or<double>(q, "lambda", 6.0);
    }
    if (!j.contains("bath1")) throw ConfigError("config needs 'bath1'");
    c.bath1 = parse_bath(j.at("bath1"), c.statistics);
    c.bath2 = j.contains("bath2") ? parse_bath(j.at("bath2"), c.statistics) : c.bath1;

    const auto param = get_or<std::string>(j, "parameterization", "offset");
    if (param == "offset") c.parameterization = Parameterization::offset;
    else if (param == "symmetric") c.parameterization = Parameterization::symmetric;
    else throw ConfigError("parameterization must be offset or symmetric; got '" + param + "'");

    if (j.contains("axes")) {
        if (!j.at("axes").is_array()) throw ConfigError("'axes' must be an array");
        for (const auto& a : j.at("axes")) c.axes.push_back(parse_axis(a));
    }
    c.mode = parse_mode(get_or<std::string>(j, "mode", "both"));
    c.secular = get_or<bool>(j, "secular", false);
    c.phase_diagram = get_or<bool>(j, "phase_diagram", false);
    if (j.contains("output")) {
        const json& o = j.at("output");
        c.output_path = get_or<std::string>(o, "path", "");
        c.format = parse_format(get_or<std::string>(o, "format", "csv"));
        c.matrix_quantity = get_or<std::string>(o, "quantity", "concurrence");
    }
    const auto workers = get_or<long long>(j, "workers", 0);
    if (workers < 0) throw ConfigError("workers must be >= 0");
    c.workers = static_cast<unsigned>(workers);
    if (j.contains("random")) {
        const json& r = j.at("random");
        const auto count = get_or<long long>(r, "count", 1000);
        if (count < 1) throw ConfigError("random grid count must be >= 1");
        c.random = RandomGrid{static_cast<std::size_t>(count), get_or<std::uint64_t>(r, "seed", 1)};
    }
    c.validate();
    return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const SweepConfig& c) {
    json axes = json::array();
    for (const auto& a : c.axes) axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
    json j = {{"schema", kSchemaTag},
              {"name", c.name},
              {"statistics", to_string(c.statistics)},
              {"qubits", {{"omega1", c.qubits.omega1}, {"omega2", c.qubits.omega2}, {"lambda", c.qubits.lambda}}},
              {"bath1", bath_json(c.bath1)},
              {"bath2", bath_json(c.bath2)},
              {"parameterization", c.parameterization == Parameterization::offset ? "offset" : "symmetric"},
              {"axes", axes},
              {"mode", to_string(c.mode)},
              {"secular", c.secular},
              {"phase_diagram", c.phase_diagram},
              {"output",
               {{"path", c.output_path},
                {"format", c.format == OutputFormat::csv ? "csv" : "matrix"},
                {"quantity", c.matrix_quantity}}},
              {"workers", c.workers}};
    if (c.random) j["random"] = {{"count", c.random->count}, {"seed", c.random->seed}};
    return j;
}

std::size_t grid_size(const SweepConfig& c) {
    if (c.axes.empty()) return 0;
    std::size_t n = 1;
    for (const auto& a : c.axes) n *= a.values.size();
    return n;
}

std::vector<double> axis_values_at(const SweepConfig& c, std::size_t index) {
    std::vector<double> v(c.axes.size());
    for (std::size_t k = c.axes.size(); k-- > 0;) {
        const auto& vals = c.axes[k].values;
        v[k] = vals[index % vals.size()];
        index /= vals.size();
    }
    return v;
}

GridPoint grid_point(const SweepConfig& c, std::size_t index) {
    GridPoint p{c.qubits, c.bath1, c.bath2};
    const auto v = axis_values_at(c, index);
    for (std::size_t k = 0; k < c.axes.size(); ++k)
        if (kAbsoluteParameters.contains(c.axes[k].parameter)) apply_absolute(p, c.axes[k].parameter, v[k]);
    for (std::size_t k = 0; k < c.axes.size(); ++k)
        if (kRelativeParameters.contains(c.axes[k].parameter))
            apply_relative(p, c.axes[k].parameter, v[k], c.parameterization);
    return p;
}

ResultRow evaluate_point(const SweepConfig& c, std::size_t index) {
    ResultRow row;
    row.axis_values = axis_values_at(c, index);
    row.point = grid_point(c, index);
    const GridPoint& p = row.point;

    if (c.phase_diagram) {
        if (auto violation = phase_constraint(c, p)) {
            row.status = *violation;
            fill_nan(row);
            return row;
        }
    }
    try {
        const EigenSystem eig = diagonalize(p.qubits);
        const Liouvillian L = build_generator(eig, p.bath1, p.bath2, {c.secular});
        row.markov_warning = markovian_warning(eig, p.bath1, p.bath2).has_value();

        std::optional<DensityMatrix> rho;
        std::optional<AnalyticSteadyState> analytic;
        if (c.mode != Mode::numeric) analytic = general_steady_state(eig, p.bath1, p.bath2);
        if (c.mode == Mode::analytic) rho = analytic->rho;
        else rho = steady_state(L).rho;

        row.residual = (L.matrix() * to_vector(*rho)).norm();
        row.min_eigenvalue = rho->min_eigenvalue();
        row.positivity_ok = row.min_eigenvalue >= -kPositivityTol;
        const ObservableSet obs = observe(L, eig, *rho);
        for (int i = 0; i < 4; ++i) row.populations[static_cast<std::size_t>(i)] = (*rho)(i, i).real();
        row.rho34 = obs.rho34;
        row.abs_w = std::abs(obs.w);
        row.concurrence = obs.concurrence;
        row.positivity_warning = obs.positivity_warning;
        row.current1 = obs.currents.bath1;
        row.current2 = obs.currents.bath2;
        row.analytic_diff = c.mode == Mode::both ? vector_diff(analytic->rho, *rho) : kNaN;
    } catch (const Error& e) {
        row.status = std::string("error: ") + e.what();
        fill_nan(row);
    }
    return row;
}

SweepResult run_sweep(const SweepConfig& c) {
    c.validate();
    if (c.axes.empty()) throw ConfigError("sweep needs at least one axis; random grids are for compare");
    SweepResult result{c, {}};
    result.rows = parallel_map<ResultRow>(grid_size(c), c.workers,
                                          [&](std::size_t i) { return evaluate_point(c, i); });
    return result;
}

double row_quantity(const ResultRow& r, const std::string& q) {
    if (q == "concurrence") return r.concurrence;
    if (q == "abs_rho34") return std::abs(r.rho34);
    if (q == "re_rho34") return r.rho34.real();
    if (q == "im_rho34") return r.rho34.imag();
    if (q == "abs_w") return r.abs_w;
    if (q == "I1") return r.current1;
    if (q == "I2") return r.current2;
    if (q == "min_eigenvalue") return r.min_eigenvalue;
    if (q == "residual") return r.residual;
    if (q == "analytic_diff") return r.analytic_diff;
    if (q.size() == 5 && q.starts_with("rho") && q[3] == q[4] && q[3] >= '1' && q[3] <= '4')
        return r.populations[static_cast<std::size_t>(q[3] - '1')];
    throw ConfigError("unknown quantity '" + q + "'");
}

void write_csv(const SweepResult& result, std::ostream& os) {
    const SweepConfig& c = result.config;
    std::vector<std::string> cols = {"index"};
    for (const auto& a : c.axes) cols.push_back("sweep_" + a.parameter);
    for (const char* name : {"omega1", "omega2", "lambda", "T1", "T2", "mu1", "mu2", "rho11", "rho22", "rho33",
                             "rho44", "re_rho34", "im_rho34", "abs_rho34", "abs_w", "concurrence", "I1", "I2",
                             "residual", "min_eigenvalue", "positivity_ok", "positivity_warning",
                             "markov_warning", "analytic_diff", "status"})
        cols.emplace_back(name);

    os << "# nesscq sweep '" << c.name << "' statistics=" << to_string(c.statistics) << " mode=" << to_string(c.mode)
       << " secular=" << (c.secular ? "true" : "false") << " schema=" << kSchemaTag << "\n";
    os << "# columns: sweep_* = swept values; omega1..mu2 = point parameters; rho11..rho44 = eigen-basis "
          "populations; re/im/abs_rho34 = eigen-basis coherence; abs_w = |<eg|rho|ge>|; I1, I2 = energy currents "
          "from baths 1, 2; residual = |M rho|; min_eigenvalue = smallest eigenvalue of rho; positivity_ok = "
          "min_eigenvalue >= -1e-10; positivity_warning = Re sqrt used in concurrence; analytic_diff = max "
          "|analytic - numeric| (mode both); status = ok or reason\n";
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";

    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const ResultRow& r = result.rows[i];
        const GridPoint& p = r.point;
        os << i;
        for (double v : r.axis_values) os << "," << format_number(v);
        for (double v : {p.qubits.omega1, p.qubits.omega2, p.qubits.lambda, p.bath1.temperature, p.bath2.temperature,
                         p.bath1.chemical_potential, p.bath2.chemical_potential, r.populations[0], r.populations[1],
                         r.populations[2], r.populations[3], r.rho34.real(), r.rho34.imag(), std::abs(r.rho34),
                         r.abs_w, r.concurrence, r.current1, r.current2, r.residual, r.min_eigenvalue})
            os << "," << format_number(v);
        os << "," << int(r.positivity_ok) << "," << int(r.positivity_warning) << "," << int(r.markov_warning) << ","
           << format_number(r.analytic_diff) << ",\"" << r.status << "\"\n";
    }
}

void write_matrix(const SweepResult& result, std::ostream& os) {
    const SweepConfig& c = result.config;
    if (c.axes.size() != 2) throw ConfigError("matrix output needs exactly two axes");
    const auto& rows_axis = c.axes[0];
    const auto& cols_axis = c.axes[1];
    os << "# nesscq sweep '" << c.name << "' gnuplot nonuniform matrix of " << c.matrix_quantity << "\n";
    os << "# first row: count then " << cols_axis.parameter << " values; following rows: "
       << rows_axis.parameter << " value then data\n";
    os << cols_axis.values.size();
    for (double x : cols_axis.values) os << " " << format_number(x);
    os << "\n";
    std::size_t k = 0;
    for (double y : rows_axis.values) {
        os << format_number(y);
        for (std::size_t i = 0; i < cols_axis.values.size(); ++i, ++k)
            os << " " << format_number(row_quantity(result.rows[k], c.matrix_quantity));
        os << "\n";
    }
}

GridPoint random_point(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

    const Statistics stat = index % 2 == 0 ? Statistics::boson : Statistics::fermion;
    const bool symmetric = (index / 2) % 2 == 0;
    // Redraw until the closed-form state is positive, so only physical points are compared.
    for (;;) {
        GridPoint p;
        p.qubits.omega1 = uniform(5.0, 15.0);
        p.qubits.omega2 = symmetric ? p.qubits.omega1 : uniform(5.0, 15.0);
        p.qubits.lambda = uniform(0.05, 0.9) * 2.0 * std::sqrt(p.qubits.omega1 * p.qubits.omega2);
        const double j = uniform(0.1, 2.0);
        if (stat == Statistics::boson) {
            p.bath1 = BathSpec::boson(uniform(0.3, 6.0), j);
            p.bath2 = BathSpec::boson(uniform(0.3, 6.0), j);
        } else {
            p.bath1 = BathSpec::fermion(uniform(0.3, 4.0), uniform(-5.0, 25.0), j);
            p.bath2 = BathSpec::fermion(uniform(0.3, 4.0), uniform(-5.0, 25.0), j);
        }
        const EigenSystem eig = diagonalize(p.qubits);
        if (general_steady_state(eig, p.bath1, p.bath2).rho.positive()) return p;
    }
}

ComparisonReport run_comparison(const SweepConfig& c) {
    if (c.secular) throw ConfigError("the secular generator has no closed form; compare needs the full generator");
    SweepConfig grid = c;
    grid.mode = Mode::both;
    grid.phase_diagram = false;
    grid.validate();

    const bool random = c.random.has_value();
    const std::size_t n = random ? c.random->count : grid_size(grid);

    struct Sample {
        bool ok{false};
        double diff{0.0};
        bool equal_baths{false};
        double abs_rho34{0.0};
    };
    const auto samples = parallel_map<Sample>(n, c.workers, [&](std::size_t i) {
        const GridPoint p = random ? random_point(c.random->seed, i) : grid_point(grid, i);
        Sample s;
        try {
            const EigenSystem eig = diagonalize(p.qubits);
            const Liouvillian L = build_generator(eig, p.bath1, p.bath2);
            const DensityMatrix numeric = steady_state(L).rho;
            const DensityMatrix analytic = general_steady_state(eig, p.bath1, p.bath2).rho;
            s.diff = vector_diff(analytic, numeric);
            s.equal_baths = p.bath1.temperature == p.bath2.temperature &&
                            p.bath1.chemical_potential == p.bath2.chemical_potential;
            s.abs_rho34 = std::abs(numeric(2, 3));
            s.ok = true;
        } catch (const UnsupportedClosedForm& e) {
            throw ConfigError(std::string(e.what()) + "; rerun as a sweep with mode numeric");
        } catch (const Error&) {
        }
        return s;
    });

    ComparisonReport r;
    r.name = c.name;
    r.tolerance = kComparisonTolerance;
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& s = samples[i];
        if (!s.ok) {
            ++r.skipped;
            continue;
        }
        ++r.points;
        total += s.diff;
        if (r.points == 1 || s.diff > r.max_diff) {
            r.max_diff = s.diff;
            r.worst_index = i;
        }
        if (s.equal_baths) {
            ++r.equal_bath_points;
            r.equal_bath_max_rho34 = std::max(r.equal_bath_max_rho34, s.abs_rho34);
        }
    }
    r.mean_diff = r.points ? total / static_cast<double>(r.points) : 0.0;
    r.passed = r.points > 0 && r.max_diff <= r.tolerance;
    return r;
}

json to_json(const ComparisonReport& r) {
    return {{"name", r.name},
            {"points", r.points},
            {"skipped", r.skipped},
            {"max_diff", r.max_diff},
            {"mean_diff", r.mean_diff},
            {"worst_index", r.worst_index},
            {"equal_bath_points", r.equal_bath_points},
            {"equal_bath_max_abs_rho34", r.equal_bath_max_rho34},
            {"tolerance", r.tolerance},
            {"passed", r.passed}};
}

bool SelfCheckReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

double equilibrium_concurrence(double omega, double lambda, double T, double mu, Statistics stat) {
    const EigenSystem eig = diagonalize({omega, omega, lambda});
    const auto s = stat == Statistics::boson ? equilibrium_boson(eig, T) : equilibrium_fermion(eig, T, mu);
    return s.concurrence;
}

struct PairState {
    cplx coherence;
    double concurrence;
};

PairState numeric_pair(const QubitPairParams& q, const BathSpec& b1, const BathSpec& b2, bool secular = false) {
    const EigenSystem eig = diagonalize(q);
    const Liouvillian L = build_generator(eig, b1, b2, {secular});
    const DensityMatrix rho = steady_state(L).rho;
    const BareComponents bare = bare_components(rho, eig);
    return {rho(2, 3), x_state_concurrence(bare.a, bare.d, bare.w).value};
}

CheckResult check(std::string name, bool passed, double value, double threshold, std::string detail) {
    return {std::move(name), passed, value, threshold, std::move(detail)};
}

} // namespace

SelfCheckReport run_selfcheck() {
    SelfCheckReport report;
    auto run = [&](const std::string& name, auto&& body) {
        try {
            report.checks.push_back(body());
        } catch (const std::exception& e) {
            report.checks.push_back(check(name, false, kNaN, kNaN, std::string("threw: ") + e.what()));
        }
    };
    const double k = 2.0 * std::log(1.0 + std::numbers::sqrt2);

    run("boson_max_temperature", [&] {
        const double below = equilibrium_concurrence(10, 6, 3.39, 0, Statistics::boson);
        const double above = equilibrium_concurrence(10, 6, 3.41, 0, Statistics::boson);
        return check("boson_max_temperature", below > 0.0 && above == 0.0, 6.0 / k, 0.01,
                     "C(T=3.39) = " + format_number(below) + ", C(T=3.41) = " + format_number(above));
    });
    run("fermion_min_coupling", [&] {
        double worst = 0.0;
        for (int i = 0; i <= 600; ++i)
            worst = std::max(worst, equilibrium_concurrence(10, 2, 1.5, -20.0 + 0.1 * i, Statistics::fermion));
        return check("fermion_min_coupling", worst == 0.0, worst, 0.0,
                     "max C over mu in [-20, 40] at lambda = 2 < lambda_min = " + format_number(1.5 * k));
    });
    run("fermion_maximum_at_mu_equals_omega", [&] {
        const double expected = (std::sinh(2.0) - 1.0) / (1.0 + std::cosh(2.0));
        const double at_omega = equilibrium_concurrence(10, 6, 1.5, 10, Statistics::fermion);
        bool is_max = true;
        for (int i = 0; i <= 600; ++i)
            is_max = is_max && equilibrium_concurrence(10, 6, 1.5, -20.0 + 0.1 * i, Statistics::fermion) <= at_omega + 1e-15;
        const double err = std::abs(at_omega - expected);
        return check("fermion_maximum_at_mu_equals_omega", is_max && err < 1e-12, err, 1e-12,
                     "C(mu = omega) = " + format_number(at_omega));
    });
    run("boson_half_asymptote", [&] {
        // Approach to 1/2 needs (ω − λ/2)/T → 0 as well as λ/2T → ∞, hence T = 0.2 at λ = 19.99.
        const double near = equilibrium_concurrence(10, 19.99, 0.2, 0, Statistics::boson);
        double worst = 0.0;
        for (double lambda : {2.0, 6.0, 12.0, 18.0, 19.99})
            for (double T : {0.01, 0.05, 0.2, 1.0, 3.0})
                worst = std::max(worst, equilibrium_concurrence(10, lambda, T, 0, Statistics::boson));
        return check("boson_half_asymptote", near > 0.49 && worst < 0.5, near, 0.49,
                     "C(lambda = 19.99, T = 0.2); grid maximum " + format_number(worst) + " < 0.5");
    });
    run("fermion_unit_asymptote", [&] {
        const double c = equilibrium_concurrence(10, 6, 0.05, 10, Statistics::fermion);
        return check("fermion_unit_asymptote", c > 0.99, c, 0.99, "C at mu = omega, T = 0.05");
    });
    run("analytic_vs_numeric_random", [&] {
        SweepConfig c;
        c.name = "selfcheck";
        c.random = RandomGrid{200, 12345};
        const ComparisonReport r = run_comparison(c);
        return check("analytic_vs_numeric_random", r.passed && r.max_diff < 1e-10, r.max_diff, 1e-10,
                     std::to_string(r.points) + " random flat-equal-J points");
    });
    run("current_conservation", [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i < 100; ++i) {
            const GridPoint p = random_point(777, i);
            const EigenSystem eig = diagonalize(p.qubits);
            const Liouvillian L = build_generator(eig, p.bath1, p.bath2);
            const auto I = energy_current(L, eig, steady_state(L).rho);
            worst = std::max(worst, std::abs(I.bath1 + I.bath2));
        }
        return check("current_conservation", worst < 1e-12, worst, 1e-12, "max |I1 + I2| over 100 random points");
    });
    run("x_state_matches_wootters", [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i < 100; ++i) {
            const GridPoint p = random_point(4242, i);
            const EigenSystem eig = diagonalize(p.qubits);
            const DensityMatrix rho = general_steady_state(eig, p.bath1, p.bath2).rho;
            const DensityMatrix bare = to_bare(rho, eig);
            worst = std::max(worst, std::abs(concurrence(bare) - wootters_concurrence(bare.entries())));
        }
        return check("x_state_matches_wootters", worst < 1e-10, worst, 1e-10, "100 random steady states");
    });
    run("secular_erases_coherence", [&] {
        double worst = 0.0;
        for (double dt : {0.5, 2.0, 5.0})
            worst = std::max(worst, std::abs(numeric_pair({10, 10, 6}, BathSpec::boson(2.0), BathSpec::boson(2.0 + dt),
                                                          true).coherence));
        for (double dmu : {2.0, 10.0})
            worst = std::max(worst, std::abs(numeric_pair({10, 9, 6}, BathSpec::fermion(1.5, 4.0),
                                                          BathSpec::fermion(1.5, 4.0 + dmu), true).coherence));
        return check("secular_erases_coherence", worst == 0.0, worst, 0.0, "max |rho34| with the secular generator");
    });
    run("ohmic_ordering", [&] {
        const QubitPairParams q{10, 10, 6};
        auto boson = [&](double a2) {
            BathSpec b1 = BathSpec::boson(2.0), b2 = BathSpec::boson(2.5);
            b1.spectrum = OhmicSpectrum{0.01, 40.0};
            b2.spectrum = OhmicSpectrum{a2, 40.0};
            return numeric_pair(q, b1, b2);
        };
        auto fermion = [&](double a2) {
            BathSpec b1 = BathSpec::fermion(1.5, 4.0), b2 = BathSpec::fermion(1.5, 9.0);
            b1.spectrum = OhmicSpectrum{0.01, 40.0};
            b2.spectrum = OhmicSpectrum{a2, 40.0};
            return numeric_pair(q, b1, b2);
        };
        bool ok = true;
        for (int s = 0; s < 2; ++s) {
            const auto lo = s ? fermion(0.005) : boson(0.005);
            const auto mid = s ? fermion(0.01) : boson(0.01);
            const auto hi = s ? fermion(0.02) : boson(0.02);
            ok = ok && std::abs(lo.coherence) < std::abs(mid.coherence) && std::abs(mid.coherence) < std::abs(hi.coherence);
            ok = ok && lo.concurrence < mid.concurrence && mid.concurrence < hi.concurrence;
        }
        return check("ohmic_ordering", ok, 0.0, 0.0,
                     "alpha2 in {alpha1/2, alpha1, 2 alpha1} at delta_T = 0.5 (boson) and delta_mu = 5 (fermion)");
    });
    run("propagation_positivity_and_convergence", [&] {
        const EigenSystem eig = diagonalize({10, 10, 6});
        const Liouvillian L = build_generator(eig, BathSpec::boson(2.0), BathSpec::boson(4.0));
        const DensityMatrix mixed = DensityMatrix::from_block({0.25, 0.25, 0.25, 0.25}, 0.0, Basis::eigen);
        std::vector<double> times;
        for (int i = 0; i <= 200; ++i) times.push_back(0.05 * i);
        const PositivityScan scan = positivity_scan(L, mixed, times);
        const double gap = vector_diff(propagate(L, mixed, 200.0), steady_state(L).rho);
        return check("propagation_positivity_and_convergence", !scan.violated && gap < 1e-8, gap, 1e-8,
                     "worst min eigenvalue " + format_number(scan.worst_min_eigenvalue));
    });
    return report;
}

json to_json(const SelfCheckReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                          {"threshold", std::isfinite(c.threshold) ? json(c.threshold) : json(nullptr)},
                          {"detail", c.detail}});
    return {{"passed", r.passed()}, {"checks", checks}};
}

} // namespace nesscq::sweep
