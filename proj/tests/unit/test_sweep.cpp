// test_sweep.cpp — Config parsing, grid evaluation, writers, comparison and self checks

#include <cmath>
#include <sstream>
#include <string>

#include <doctest.h>

#include "nesscq/error.hpp"
#include "nesscq/sweep.hpp"

using namespace nesscq;
using namespace nesscq::sweep;
using nlohmann::json;
using doctest::Approx;

namespace {

json base_config() {
    return json::parse(R"({
        "schema": "nesscq.sweep/1",
        "name": "unit",
        "statistics": "boson",
        "qubits": {"omega1": 10, "omega2": 10, "lambda": 6},
        "bath1": {"temperature": 2.0},
        "axes": [{"parameter": "T1", "values": [1.2, 2.0]},
                 {"parameter": "delta_T", "start": 0, "stop": 2, "count": 5}],
        "mode": "both"
    })");
}

std::string csv_of(const SweepResult& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

} // namespace

TEST_CASE("config parsing: accepted forms") {
    const SweepConfig c = parse_config(base_config());
    CHECK(c.name == "unit");
    REQUIRE(c.axes.size() == 2);
    CHECK(c.axes[1].values == std::vector<double>{0, 0.5, 1.0, 1.5, 2.0});
    CHECK(c.bath2.temperature == 2.0);
    CHECK(grid_size(c) == 10);
    const SweepConfig again = parse_config(to_json(c));
    CHECK(to_json(again) == to_json(c));
}

TEST_CASE("config parsing: rejected forms") {
    auto rejects = [](auto edit) {
        json j = base_config();
        edit(j);
        CHECK_THROWS_AS(parse_config(j), ConfigError);
    };
    rejects([](json& j) { j.erase("schema"); });
    rejects([](json& j) { j["schema"] = "nesscq.sweep/2"; });
    rejects([](json& j) { j["axes"][0]["values"] = json::array({2.0, 1.2}); });
    rejects([](json& j) { j["axes"][0]["values"] = json::array({1.2, 1.2}); });
    rejects([](json& j) { j["axes"][0]["values"] = json::array(); });
    rejects([](json& j) { j["axes"][0]["parameter"] = "pressure"; });
    rejects([](json& j) { j["axes"][1]["parameter"] = "T1"; });
    rejects([](json& j) { j["axes"][1]["count"] = 0; });
    rejects([](json& j) { j["statistics"] = "anyon"; });
    rejects([](json& j) { j["mode"] = "guess"; });
    rejects([](json& j) { j["secular"] = true; });
    rejects([](json& j) { j["bath1"]["spectrum"] = {{"type", "ohmic"}, {"alpha", 0.01}, {"cutoff", 40}}; });
    rejects([](json& j) { j["phase_diagram"] = true; });
    rejects([](json& j) { j["output"] = {{"format", "matrix"}}; j["axes"].erase(1); });
    rejects([](json& j) { j["axes"][0]["parameter"] = "alpha1"; j["mode"] = "numeric"; });
    rejects([](json& j) { j["bath1"]["temperature"] = "hot"; });
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("grid points: ordering and parameterizations") {
    const SweepConfig c = parse_config(base_config());
    CHECK(axis_values_at(c, 0) == std::vector<double>{1.2, 0.0});
    CHECK(axis_values_at(c, 6) == std::vector<double>{2.0, 0.5});
    const GridPoint p = grid_point(c, 6);
    CHECK(p.bath1.temperature == 2.0);
    CHECK(p.bath2.temperature == 2.5);

    json j = base_config();
    j["parameterization"] = "symmetric";
    j["bath1"]["temperature"] = 3.0;
    j["axes"] = json::parse(R"([{"parameter": "detuning", "values": [-2, 4]}, {"parameter": "delta_T", "values": [1]}])");
    const SweepConfig s = parse_config(j);
    const GridPoint q = grid_point(s, 1);
    CHECK(q.qubits.omega1 == 12.0);
    CHECK(q.qubits.omega2 == 8.0);
    CHECK(q.bath1.temperature == 2.5);
    CHECK(q.bath2.temperature == 3.5);
}

TEST_CASE("sweep rows: flags, ranges and comparison column") {
    const SweepResult r = run_sweep(parse_config(base_config()));
    REQUIRE(r.rows.size() == 10);
    for (const auto& row : r.rows) {
        CHECK(row.ok());
        CHECK(row.concurrence >= 0.0);
        CHECK(row.concurrence <= 1.0);
        CHECK(row.populations[0] + row.populations[1] + row.populations[2] + row.populations[3] ==
              Approx(1.0).epsilon(1e-12));
        CHECK(row.analytic_diff < 1e-10);
        CHECK(std::abs(row.current1 + row.current2) < 1e-12);
        CHECK(row.positivity_ok);
    }
    CHECK(std::abs(r.rows[0].rho34) < 1e-12);
    CHECK(std::abs(r.rows[4].rho34) > 1e-4);
}

TEST_CASE("sweep rows: invalid points are reported, not fatal") {
    json j = base_config();
    j["axes"][1] = {{"parameter", "delta_T"}, {"values", {-3.0, 0.0}}};
    const SweepResult r = run_sweep(parse_config(j));
    REQUIRE(r.rows.size() == 4);
    CHECK_FALSE(r.rows[0].ok());
    CHECK(r.rows[0].status.rfind("error:", 0) == 0);
    CHECK(std::isnan(r.rows[0].concurrence));
    CHECK(r.rows[1].ok());
}

TEST_CASE("sweep output is independent of the worker count") {
    json j = base_config();
    j["workers"] = 1;
    const std::string serial = csv_of(run_sweep(parse_config(j)));
    j["workers"] = 4;
    const std::string parallel = csv_of(run_sweep(parse_config(j)));
    CHECK(serial == parallel);
}

TEST_CASE("csv layout") {
    const std::string text = csv_of(run_sweep(parse_config(base_config())));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# ", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("# columns:", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("index,sweep_T1,sweep_delta_T,omega1", 0) == 0);
    std::size_t rows = 0;
    std::string first;
    while (std::getline(in, line)) {
        if (rows == 0) first = line;
        ++rows;
    }
    CHECK(rows == 10);
    // Full precision: rho11 of the first row parses back to the exact double.
    const SweepResult r = run_sweep(parse_config(base_config()));
    std::vector<std::string> cells;
    std::stringstream ss(first);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    CHECK(std::stod(cells[10]) == r.rows[0].populations[0]);
}

TEST_CASE("matrix layout") {
    json j = base_config();
    j["output"] = {{"format", "matrix"}, {"quantity", "abs_rho34"}};
    const SweepResult r = run_sweep(parse_config(j));
    std::ostringstream os;
    write_matrix(r, os);
    std::istringstream in(os.str());
    std::string line;
    std::vector<std::string> data;
    while (std::getline(in, line))
        if (!line.starts_with("#")) data.push_back(line);
    REQUIRE(data.size() == 3);
    CHECK(data[0].rfind("5 0 0.5 1 1.5 2", 0) == 0);
    CHECK(data[1].rfind("1.2 0 ", 0) == 0);
    CHECK_THROWS_AS(row_quantity(r.rows[0], "entropy"), ConfigError);
    CHECK(row_quantity(r.rows[3], "rho22") == r.rows[3].populations[1]);
}

TEST_CASE("phase diagram: constraints and origin symmetry") {
    const json j = json::parse(R"({
        "schema": "nesscq.sweep/1", "statistics": "boson",
        "qubits": {"omega1": 10, "omega2": 10, "lambda": 6},
        "bath1": {"temperature": 3.0}, "parameterization": "symmetric", "phase_diagram": true,
        "axes": [{"parameter": "detuning", "start": -20, "stop": 20, "count": 9},
                 {"parameter": "delta_T", "start": -6, "stop": 6, "count": 7}]
    })");
    const SweepConfig c = parse_config(j);
    const SweepResult r = run_sweep(c);
    const std::size_t n = r.rows.size();
    std::size_t constrained = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ResultRow& a = r.rows[i];
        const ResultRow& b = r.rows[n - 1 - i];
        if (!a.ok()) {
            ++constrained;
            CHECK(a.status.rfind("constraint:", 0) == 0);
            continue;
        }
        CHECK(a.concurrence == Approx(b.concurrence).epsilon(1e-10));
    }
    // |detuning| = 20 exceeds √(400 − 36), |delta_T| = 6 reaches 2 T̄ (T = 0).
    CHECK(constrained > 0);
    CHECK_FALSE(r.rows[0].ok());
}

TEST_CASE("comparison: random grid, equal-bath subgrid and detuned grid") {
    SweepConfig c;
    c.name = "random";
    c.random = RandomGrid{200, 3};
    const ComparisonReport r = run_comparison(c);
    CHECK(r.points == 200);
    CHECK(r.passed);
    CHECK(r.max_diff < 1e-10);

    json j = base_config();
    j["axes"] = json::parse(R"([{"parameter": "detuning", "values": [-4, 0, 3]},
                                {"parameter": "delta_T", "values": [0, 1, 2]}])");
    const ComparisonReport g = run_comparison(parse_config(j));
    CHECK(g.passed);
    CHECK(g.equal_bath_points == 3);
    CHECK(g.equal_bath_max_rho34 < 1e-12);
    const json out = to_json(g);
    CHECK(out["passed"] == true);
}

TEST_CASE("comparison: closed-form inapplicable setups are rejected") {
    json j = base_config();
    j["mode"] = "numeric";
    j["bath1"]["spectrum"] = {{"type", "ohmic"}, {"alpha", 0.01}, {"cutoff", 40}};
    CHECK_THROWS_AS(run_comparison(parse_config(j)), ConfigError);
    json s = base_config();
    s["mode"] = "numeric";
    s["secular"] = true;
    CHECK_THROWS_AS(run_comparison(parse_config(s)), ConfigError);
}

TEST_CASE("secular toggle erases eigen coherence in sweeps") {
    json j = base_config();
    j["mode"] = "numeric";
    j["secular"] = true;
    for (const auto& row : run_sweep(parse_config(j)).rows) CHECK(std::abs(row.rho34) == 0.0);
}

TEST_CASE("Ohmic sweep runs numerically with alpha ratio") {
    json j = base_config();
    j["mode"] = "numeric";
    j["bath1"]["spectrum"] = {{"type", "ohmic"}, {"alpha", 0.01}, {"cutoff", 40}};
    j["axes"][0] = {{"parameter", "alpha_ratio"}, {"values", {0.5, 1.0, 2.0}}};
    const SweepConfig c = parse_config(j);
    const GridPoint p = grid_point(c, 10);
    CHECK(std::get<OhmicSpectrum>(p.bath2.spectrum).alpha == Approx(0.02));
    const SweepResult r = run_sweep(c);
    for (const auto& row : r.rows) {
        CHECK(row.ok());
        CHECK(std::isnan(row.analytic_diff));
    }
}

TEST_CASE("selfcheck passes on a fresh build") {
    const SelfCheckReport r = run_selfcheck();
    for (const auto& c : r.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
    CHECK(to_json(r)["passed"] == true);
}
