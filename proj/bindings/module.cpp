#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "stressnet/control.hpp"
#include "stressnet/convergence.hpp"
#include "stressnet/io.hpp"
#include "stressnet/kinetics.hpp"
#include "stressnet/oracle.hpp"
#include "stressnet/stepper.hpp"

namespace py = pybind11;
using namespace stressnet;

namespace {

// Flattened outcome of one run, self-contained for python consumers.
struct SimResult {
    int nx1 = 0, ny1 = 0, nx2 = 0, ny2 = 0;
    long steps = 0;
    std::vector<ObservableRecord> records;
    std::vector<double> uP1, uN1, uP2, uN2;  // terminal fields, x fastest
    std::string observables_csv;
};

struct OracleResult {
    double max_rel_deviation = 0.0;
    std::size_t n_records = 0;
    std::string ode_csv;
};

struct ConvergenceResult {
    std::vector<int> resolutions;  // zone-1 nx per level
    std::vector<double> mass_errors, field_errors;
    std::vector<double> mass_orders, field_orders;
};

SimResult simulate(SimulationConfig cfg, const std::string& scenario) {
    if (!scenario.empty()) apply_scenario(cfg, scenario);
    Simulation sim(cfg);
    NetworkState s = sim.initial_state();
    SimResult out;
    out.records = sim.run(s);
    out.nx1 = sim.grid1().nx;
    out.ny1 = sim.grid1().ny;
    out.nx2 = sim.grid2().nx;
    out.ny2 = sim.grid2().ny;
    out.steps = sim.steps_taken();
    out.uP1 = s.uP1.values;
    out.uN1 = s.uN1.values;
    out.uP2 = s.uP2.values;
    out.uN2 = s.uN2.values;
    out.observables_csv = write_observables(out.records);
    return out;
}

OracleResult oracle(const SimulationConfig& cfg) {
    OracleReport rep = run_oracle(cfg);
    OracleResult out;
    out.max_rel_deviation = rep.max_rel_deviation;
    out.n_records = rep.pde.size();
    out.ode_csv = write_oracle_csv(rep.ode);
    return out;
}

ConvergenceResult convergence(const SimulationConfig& cfg, int levels) {
    ConvergenceStudy study = run_convergence(cfg, levels);
    ConvergenceResult out;
    for (const ConvergenceLevel& lvl : study.levels) out.resolutions.push_back(lvl.nx1);
    out.mass_errors = study.mass_errors;
    out.field_errors = study.field_errors;
    out.mass_orders = study.mass_orders;
    out.field_orders = study.field_orders;
    return out;
}

}  // namespace

PYBIND11_MODULE(stressnet, m) {
    m.doc() = "two-zone crowd stress network: finite-volume solver, reference "
              "reduction, and convergence studies";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<InvariantViolation>(m, "InvariantViolation");

    py::class_<SimulationConfig>(m, "Config", "parsed simulation configuration")
        .def("__repr__", [](const SimulationConfig&) { return "<stressnet.Config>"; });

    py::class_<ObservableRecord>(m, "Record", "mass functionals at one record time")
        .def_readonly("t", &ObservableRecord::t)
        .def_readonly("M_P1", &ObservableRecord::M_P1)
        .def_readonly("M_N1", &ObservableRecord::M_N1)
        .def_readonly("M_P2", &ObservableRecord::M_P2)
        .def_readonly("M_N2", &ObservableRecord::M_N2)
        .def_readonly("M_P", &ObservableRecord::M_P)
        .def_readonly("M_N", &ObservableRecord::M_N)
        .def_readonly("V", &ObservableRecord::V)
        .def_readonly("min_val", &ObservableRecord::min_val)
        .def_readonly("dt_used", &ObservableRecord::dt_used);

    py::class_<SimResult>(m, "SimResult", "terminal fields and observables of one run")
        .def_readonly("nx1", &SimResult::nx1)
        .def_readonly("ny1", &SimResult::ny1)
        .def_readonly("nx2", &SimResult::nx2)
        .def_readonly("ny2", &SimResult::ny2)
        .def_readonly("steps", &SimResult::steps)
        .def_readonly("records", &SimResult::records)
        .def_readonly("uP1", &SimResult::uP1)
        .def_readonly("uN1", &SimResult::uN1)
        .def_readonly("uP2", &SimResult::uP2)
        .def_readonly("uN2", &SimResult::uN2)
        .def_readonly("observables_csv", &SimResult::observables_csv);

    py::class_<OracleResult>(m, "OracleResult", "solver vs reference deviation")
        .def_readonly("max_rel_deviation", &OracleResult::max_rel_deviation)
        .def_readonly("n_records", &OracleResult::n_records)
        .def_readonly("ode_csv", &OracleResult::ode_csv);

    py::class_<ConvergenceResult>(m, "ConvergenceResult", "self-convergence errors and orders")
        .def_readonly("resolutions", &ConvergenceResult::resolutions)
        .def_readonly("mass_errors", &ConvergenceResult::mass_errors)
        .def_readonly("field_errors", &ConvergenceResult::field_errors)
        .def_readonly("mass_orders", &ConvergenceResult::mass_orders)
        .def_readonly("field_orders", &ConvergenceResult::field_orders);

    m.def("default_config", &default_config, "the stock parameter set");
    m.def("parse_config", &parse_config, py::arg("text"),
          "parse sectioned key = value text (missing keys keep their defaults)");
    m.def("load_config_file", &load_config_file, py::arg("path"));
    m.def("write_config", &write_config, py::arg("config"),
          "canonical full dump; parse_config(write_config(c)) reproduces c");
    m.def(
        "apply_scenario",
        [](SimulationConfig& cfg, const std::string& scenario) { apply_scenario(cfg, scenario); },
        py::arg("config"), py::arg("scenario"),
        "force the control block into scenario 'wc', 'sc1', or 'sc2'");
    m.def("validate_config", &validate_config, py::arg("config"));

    m.def("xi", &xi, py::arg("s"), "imitation saturation s^2/(1+s^2)");
    m.def("ramp", &ramp, py::arg("t"), py::arg("T0"), py::arg("T1"),
          "cosine ease-in schedule, exactly 0 at T0 and 1 at T1");
    m.def(
        "imitation_coefficient",
        [](double uP, double uN, double a, double b, double alpha_P, double alpha_N,
           double eps_guard) {
            ZoneKineticsParams p{a, b, alpha_P, alpha_N, eps_guard};
            p.validate();
            return imitation_coefficient(uP, uN, p);
        },
        py::arg("uP"), py::arg("uN"), py::arg("a"), py::arg("b"), py::arg("alpha_P"),
        py::arg("alpha_N"), py::arg("eps_guard") = 1e-6,
        "net imitation coefficient alpha_P*xi(uP/(uN+eps)) - alpha_N*xi(uN/(uP+eps))");

    m.def("simulate", &simulate, py::arg("config"), py::arg("scenario") = std::string(),
          py::call_guard<py::gil_scoped_release>(),
          "run the configured problem (optionally under a named scenario) to t_end");
    m.def("oracle", &oracle, py::arg("config"), py::call_guard<py::gil_scoped_release>(),
          "run solver and uniform reference side by side; config must admit the reduction");
    m.def("convergence", &convergence, py::arg("config"), py::arg("levels") = 3,
          py::call_guard<py::gil_scoped_release>(),
          "self-convergence study doubling both zones' resolution per level");
}
