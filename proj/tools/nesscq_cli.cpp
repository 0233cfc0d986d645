// nesscq_cli.cpp — Command-line front end for sweeps, comparisons and self checks

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nesscq/error.hpp"
#include "nesscq/sweep.hpp"

namespace {

namespace sw = nesscq::sweep;

enum Exit { ok = 0, invalid_config = 1, oracle_failure = 2, io_error = 3 };

struct Overrides {
    std::optional<unsigned> workers;
    std::string output;
    std::string format;
    std::string mode;
    bool secular{false};
    std::optional<std::uint64_t> seed;
};

void apply(sw::SweepConfig& c, const Overrides& o) {
    if (o.workers) c.workers = *o.workers;
    if (!o.output.empty()) c.output_path = o.output;
    if (!o.format.empty()) c.format = sw::parse_format(o.format);
    if (!o.mode.empty()) c.mode = sw::parse_mode(o.mode);
    if (o.secular) c.secular = true;
    if (o.seed) {
        if (!c.random) c.random = sw::RandomGrid{};
        c.random->seed = *o.seed;
    }
    c.validate();
}

template <class Writer>
int emit(const std::string& path, Writer&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return std::cout ? ok : io_error;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return io_error;
    }
    write(out);
    out.close();
    if (!out) {
        std::cerr << "error: failed writing '" << path << "'\n";
        return io_error;
    }
    return ok;
}

int run_sweep(const std::string& config_path, const Overrides& o, bool phase_diagram) {
    sw::SweepConfig c = sw::load_config(config_path);
    if (phase_diagram) {
        c.phase_diagram = true;
        c.parameterization = sw::Parameterization::symmetric;
    }
    apply(c, o);
    const sw::SweepResult result = sw::run_sweep(c);
    std::size_t flagged = 0;
    for (const auto& r : result.rows) flagged += !r.ok() || !r.positivity_ok;
    const int code = emit(c.output_path, [&](std::ostream& os) {
        if (c.format == sw::OutputFormat::matrix) sw::write_matrix(result, os);
        else sw::write_csv(result, os);
    });
    std::cerr << result.rows.size() << " rows, " << flagged << " flagged (status or positivity)\n";
    return code;
}

int run_compare(const std::string& config_path, const Overrides& o) {
    sw::SweepConfig c = sw::load_config(config_path);
    apply(c, o);
    const sw::ComparisonReport r = sw::run_comparison(c);
    const int code = emit(o.output, [&](std::ostream& os) { os << sw::to_json(r).dump(2) << "\n"; });
    if (code != ok) return code;
    return r.passed ? ok : oracle_failure;
}

int run_selfcheck(const Overrides& o) {
    const sw::SelfCheckReport r = sw::run_selfcheck();
    const int code = emit(o.output, [&](std::ostream& os) { os << sw::to_json(r).dump(2) << "\n"; });
    if (code != ok) return code;
    return r.passed() ? ok : oracle_failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state coherence and entanglement of two coupled qubits between two reservoirs"};
    app.require_subcommand(1);

    Overrides o;
    std::string config_path;

    auto add_common = [&](CLI::App* sub, bool takes_config) {
        if (takes_config) sub->add_option("config", config_path, "JSON run configuration")->required();
        sub->add_option("--workers", o.workers, "worker threads (0 = all cores)");
        sub->add_option("--output,-o", o.output, "output path ('-' for stdout)");
        sub->add_option("--format", o.format, "csv or matrix")->check(CLI::IsMember({"csv", "matrix"}));
        sub->add_option("--mode", o.mode, "analytic, numeric or both")
            ->check(CLI::IsMember({"analytic", "numeric", "both"}));
        sub->add_flag("--secular", o.secular, "drop the non-secular dissipator terms");
        sub->add_option("--seed", o.seed, "seed for random-grid comparisons");
    };

    auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid and write CSV or matrix data");
    add_common(sweep, true);
    auto* phase = app.add_subcommand("phase-diagram", "sweep detuning against delta_T or delta_mu");
    add_common(phase, true);
    auto* compare = app.add_subcommand("compare", "closed-form versus numerical steady states");
    add_common(compare, true);
    auto* selfcheck = app.add_subcommand("selfcheck", "threshold, invariant and positivity checks");
    add_common(selfcheck, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid_config;
    }

    try {
        if (sweep->parsed()) return run_sweep(config_path, o, false);
        if (phase->parsed()) return run_sweep(config_path, o, true);
        if (compare->parsed()) return run_compare(config_path, o);
        return run_selfcheck(o);
    } catch (const nesscq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return invalid_config;
    } catch (const nesscq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid_config;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io_error;
    }
}
