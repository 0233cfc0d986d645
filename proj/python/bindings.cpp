// bindings.cpp — Python module _nesscq

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nesscq/analytic.hpp"
#include "nesscq/error.hpp"
#include "nesscq/observables.hpp"
#include "nesscq/redfield.hpp"
#include "nesscq/sweep.hpp"

namespace py = pybind11;
using namespace nesscq;

namespace {

// Python dicts cross as JSON text, parsed on each side by its own library.
nlohmann::json to_json_value(const py::handle& obj) {
    const py::module_ json = py::module_::import("json");
    return nlohmann::json::parse(json.attr("dumps")(obj).cast<std::string>());
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

sweep::SweepConfig config_from(const py::handle& obj) {
    if (py::isinstance<py::str>(obj)) return sweep::load_config(obj.cast<std::string>());
    return sweep::parse_config(to_json_value(obj));
}

struct SteadyState {
    Matrix4cd rho_eigen;
    Matrix4cd rho_bare;
    std::array<double, 4> populations{};
    cplx rho34{};
    cplx w{};
    double concurrence{0.0};
    double current1{0.0};
    double current2{0.0};
    double residual{0.0};
    double min_eigenvalue{0.0};
    bool positivity_ok{true};
};

SteadyState numeric(const QubitPairParams& q, const BathSpec& b1, const BathSpec& b2, bool secular) {
    const EigenSystem e = diagonalize(q);
    const Liouvillian L = build_generator(e, b1, b2, {secular});
    const SteadyStateReport rep = steady_state(L);
    const ObservableSet obs = observe(L, e, rep.rho);
    SteadyState s;
    s.rho_eigen = rep.rho.entries();
    s.rho_bare = to_bare(rep.rho, e).entries();
    for (int i = 0; i < 4; ++i) s.populations[static_cast<std::size_t>(i)] = rep.rho(i, i).real();
    s.rho34 = obs.rho34;
    s.w = obs.w;
    s.concurrence = obs.concurrence;
    s.current1 = obs.currents.bath1;
    s.current2 = obs.currents.bath2;
    s.residual = rep.residual;
    s.min_eigenvalue = rep.min_eigenvalue;
    s.positivity_ok = rep.positivity_ok;
    return s;
}

SteadyState closed_form(const QubitPairParams& q, const BathSpec& b1, const BathSpec& b2) {
    const EigenSystem e = diagonalize(q);
    const AnalyticSteadyState a = general_steady_state(e, b1, b2);
    SteadyState s;
    s.rho_eigen = a.rho.entries();
    s.rho_bare = to_bare(a.rho, e).entries();
    for (int i = 0; i < 4; ++i) s.populations[static_cast<std::size_t>(i)] = a.rho(i, i).real();
    s.rho34 = a.rho(2, 3);
    s.w = a.w;
    s.concurrence = a.concurrence;
    s.current1 = s.current2 = std::numeric_limits<double>::quiet_NaN();
    s.min_eigenvalue = a.rho.min_eigenvalue();
    s.positivity_ok = s.min_eigenvalue >= -kPositivityTol;
    return s;
}

// Column name -> values, matching the CSV layout.
py::dict sweep_columns(const sweep::SweepResult& r) {
    std::map<std::string, std::vector<double>> cols;
    std::vector<std::string> status;
    for (const auto& row : r.rows) {
        for (std::size_t a = 0; a < r.config.axes.size(); ++a)
            cols["sweep_" + r.config.axes[a].parameter].push_back(row.axis_values[a]);
        const auto& p = row.point;
        cols["omega1"].push_back(p.qubits.omega1);
        cols["omega2"].push_back(p.qubits.omega2);
        cols["lambda"].push_back(p.qubits.lambda);
        cols["T1"].push_back(p.bath1.temperature);
        cols["T2"].push_back(p.bath2.temperature);
        cols["mu1"].push_back(p.bath1.chemical_potential);
        cols["mu2"].push_back(p.bath2.chemical_potential);
        for (int i = 0; i < 4; ++i)
            cols["rho" + std::to_string(i + 1) + std::to_string(i + 1)].push_back(row.populations[static_cast<std::size_t>(i)]);
        cols["re_rho34"].push_back(row.rho34.real());
        cols["im_rho34"].push_back(row.rho34.imag());
        cols["abs_rho34"].push_back(std::abs(row.rho34));
        cols["abs_w"].push_back(row.abs_w);
        cols["concurrence"].push_back(row.concurrence);
        cols["I1"].push_back(row.current1);
        cols["I2"].push_back(row.current2);
        cols["residual"].push_back(row.residual);
        cols["min_eigenvalue"].push_back(row.min_eigenvalue);
        cols["positivity_ok"].push_back(row.positivity_ok);
        cols["analytic_diff"].push_back(row.analytic_diff);
        status.push_back(row.status);
    }
    py::dict out;
    for (auto& [name, values] : cols) out[py::str(name)] = py::array_t<double>(values.size(), values.data());
    out["status"] = status;
    return out;
}

} // namespace

PYBIND11_MODULE(_nesscq, m) {
    m.doc() = "Nonequilibrium steady states of two coupled qubits between two reservoirs";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<QubitPairParams>(m, "QubitPair")
        .def(py::init([](double omega1, double omega2, double lambda_) {
                 QubitPairParams q{omega1, omega2, lambda_};
                 q.validate();
                 return q;
             }),
             py::arg("omega1"), py::arg("omega2"), py::arg("lambda_"))
        .def_readonly("omega1", &QubitPairParams::omega1)
        .def_readonly("omega2", &QubitPairParams::omega2)
        .def_readonly("lambda_", &QubitPairParams::lambda)
        .def_property_readonly("energies", [](const QubitPairParams& q) { return diagonalize(q).energies; })
        .def_property_readonly("theta", [](const QubitPairParams& q) { return diagonalize(q).theta; })
        .def("__repr__", [](const QubitPairParams& q) {
            return "QubitPair(omega1=" + std::to_string(q.omega1) + ", omega2=" + std::to_string(q.omega2) +
                   ", lambda_=" + std::to_string(q.lambda) + ")";
        });

    py::class_<BathSpec>(m, "Bath")
        .def_static("boson", [](double T, double J) { auto b = BathSpec::boson(T, J); b.validate(); return b; },
                    py::arg("temperature"), py::arg("coupling") = 1.0)
        .def_static("fermion", [](double T, double mu, double J) { auto b = BathSpec::fermion(T, mu, J); b.validate(); return b; },
                    py::arg("temperature"), py::arg("mu"), py::arg("coupling") = 1.0)
        .def_static("ohmic",
                    [](const std::string& statistics, double T, double alpha, double cutoff, double mu) {
                        BathSpec b = statistics == "fermion" ? BathSpec::fermion(T, mu) : BathSpec::boson(T, 1.0, mu);
                        if (statistics != "boson" && statistics != "fermion")
                            throw InvalidParameter("statistics must be 'boson' or 'fermion'");
                        b.spectrum = OhmicSpectrum{alpha, cutoff};
                        b.validate();
                        return b;
                    },
                    py::arg("statistics"), py::arg("temperature"), py::arg("alpha"), py::arg("cutoff"), py::arg("mu") = 0.0)
        .def_property_readonly("statistics", [](const BathSpec& b) { return std::string(to_string(b.statistics)); })
        .def_readonly("temperature", &BathSpec::temperature)
        .def_readonly("mu", &BathSpec::chemical_potential)
        .def("occupation", [](const BathSpec& b, double omega) { return occupation(b, omega); }, py::arg("omega"))
        .def("spectral_density", [](const BathSpec& b, double omega) { return spectral_density(b, omega); }, py::arg("omega"));

    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("rho_eigen", &SteadyState::rho_eigen)
        .def_readonly("rho_bare", &SteadyState::rho_bare)
        .def_readonly("populations", &SteadyState::populations)
        .def_readonly("rho34", &SteadyState::rho34)
        .def_readonly("w", &SteadyState::w)
        .def_readonly("concurrence", &SteadyState::concurrence)
        .def_readonly("current1", &SteadyState::current1)
        .def_readonly("current2", &SteadyState::current2)
        .def_readonly("residual", &SteadyState::residual)
        .def_readonly("min_eigenvalue", &SteadyState::min_eigenvalue)
        .def_readonly("positivity_ok", &SteadyState::positivity_ok);

    m.def("steady_state", &numeric, py::arg("qubits"), py::arg("bath1"), py::arg("bath2"), py::arg("secular") = false,
          "Numerical steady state of the Redfield generator with observables.");
    m.def("analytic_steady_state", &closed_form, py::arg("qubits"), py::arg("bath1"), py::arg("bath2"),
          "Closed-form steady state for flat baths with a common coupling.");
    m.def("concurrence_threshold",
          [](const QubitPairParams& q, const std::string& statistics, double T) {
              const Statistics s = statistics == "fermion" ? Statistics::fermion : Statistics::boson;
              return thresholds(diagonalize(q), s, T).value;
          },
          py::arg("qubits"), py::arg("statistics"), py::arg("temperature"),
          "Boson: largest entangled temperature. Fermion: smallest entangling coupling.");

    m.def("run_sweep",
          [](const py::object& config, std::optional<unsigned> workers) {
              sweep::SweepConfig c = config_from(config);
              if (workers) c.workers = *workers;
              sweep::SweepResult r;
              {
                  py::gil_scoped_release release;
                  r = sweep::run_sweep(c);
              }
              return sweep_columns(r);
          },
          py::arg("config"), py::arg("workers") = py::none(),
          "Run a sweep from a config dict or JSON path; returns columns keyed like the CSV header.");
    m.def("run_comparison",
          [](const py::object& config) {
              const sweep::SweepConfig c = config_from(config);
              sweep::ComparisonReport r;
              {
                  py::gil_scoped_release release;
                  r = sweep::run_comparison(c);
              }
              return to_python(sweep::to_json(r));
          },
          py::arg("config"));
    m.def("run_selfcheck", [] {
        sweep::SelfCheckReport r;
        {
            py::gil_scoped_release release;
            r = sweep::run_selfcheck();
        }
        return to_python(sweep::to_json(r));
    });
}
