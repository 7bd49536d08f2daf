#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "rindler/dynamics.hpp"
#include "rindler/errors.hpp"
#include "rindler/frames.hpp"
#include "rindler/hamiltonian.hpp"
#include "rindler/redshift.hpp"
#include "rindler/scenario.hpp"
#include "rindler/selfcheck.hpp"
#include "rindler/visibility.hpp"

namespace py = pybind11;
using namespace rindler;

namespace {

using Event = std::pair<double, double>;

RestEnergy rest_mode(bool include_rest) { return include_rest ? RestEnergy::included : RestEnergy::excluded; }

HamiltonianSpec supported_clock(std::vector<double> masses, double g, double c, double alpha, double h_rel0,
                                double omega) {
  auto internal = harmonic_internal(masses, omega, h_rel0);
  return HamiltonianSpec(std::move(masses), g, c, std::move(internal), harmonic_support(alpha));
}

std::string run_scenario_from(const std::string& experiment, const py::dict& params) {
  const auto e = parse_experiment(experiment);
  if (!e) throw ConfigError("unknown experiment '" + experiment + "'");
  std::map<std::string, std::string> values;
  for (const auto& [key, value] : params) {
    const auto k = py::str(key).cast<std::string>();
    if (py::isinstance<py::float_>(value) || py::isinstance<py::int_>(value)) {
      values[k] = format_number(value.cast<double>());
    } else {
      values[k] = py::str(value).cast<std::string>();
    }
  }
  return run_scenario(ScenarioConfig(*e, std::move(values)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Composite clocks in uniformly accelerated frames";
  m.attr("__version__") = RINDLER_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<FrameSpec>(m, "FrameSpec")
      .def(py::init<double, double, double>(), py::arg("g"), py::arg("b") = 0.0, py::arg("c") = 1.0)
      .def_property_readonly("g", &FrameSpec::g)
      .def_property_readonly("b", &FrameSpec::b)
      .def_property_readonly("c", &FrameSpec::c)
      .def_property_readonly("horizon_distance", &FrameSpec::horizon_distance)
      .def("__repr__", [](const FrameSpec& f) {
        std::ostringstream s;
        s << "FrameSpec(g=" << f.g() << ", b=" << f.b() << ", c=" << f.c() << ")";
        return s.str();
      });

  m.def("rindler_to_minkowski", [](Event e, const FrameSpec& f) {
    const MinkowskiEvent r = rindler_to_minkowski({e.first, e.second}, f);
    return Event{r.t, r.x};
  }, py::arg("event"), py::arg("frame"), "(t', x') -> (T, X)");
  m.def("minkowski_to_rindler", [](Event e, const FrameSpec& f) {
    const RindlerEvent r = minkowski_to_rindler({e.first, e.second}, f);
    return Event{r.t, r.x};
  }, py::arg("event"), py::arg("frame"), "(T, X) -> (t', x')");
  m.def("shift_rindler", [](Event e, const FrameSpec& f) {
    const RindlerEvent r = shift_rindler({e.first, e.second}, f);
    return Event{r.t, r.x};
  }, py::arg("event"), py::arg("frame"));
  m.def("effective_acceleration", &effective_acceleration, py::arg("frame"));
  m.def("proper_time_rate", &proper_time_rate, py::arg("frame"));
  m.def("observer_four_velocity", [](const FrameSpec& f, double tau) {
    const FourVector v = observer_four_velocity(f, tau);
    return Event{v.t, v.x};
  }, py::arg("frame"), py::arg("tau"));

  py::class_<RedshiftResult>(m, "RedshiftResult")
      .def_property_readonly("absorption_event",
                             [](const RedshiftResult& r) { return Event{r.absorption_event.t, r.absorption_event.x}; })
      .def_readonly("detector_proper_time", &RedshiftResult::detector_proper_time)
      .def_readonly("emitted_energy", &RedshiftResult::emitted_energy)
      .def_readonly("measured_energy", &RedshiftResult::measured_energy)
      .def_readonly("first_order_energy", &RedshiftResult::first_order_energy)
      .def_readonly("doppler_factor", &RedshiftResult::doppler_factor);
  m.def("run_redshift_experiment", &run_redshift_experiment, py::arg("g"), py::arg("b"), py::arg("energy"),
        py::arg("c") = 1.0);

  py::class_<PhaseState>(m, "PhaseState")
      .def(py::init([](double R, double P, std::optional<std::vector<double>> rho,
                       std::optional<std::vector<double>> pi) {
             PhaseState s{R, P, rho.value_or(std::vector<double>{0.0}), pi.value_or(std::vector<double>{0.0})};
             if (s.rel_pos.size() != s.rel_mom.size()) {
               throw ConfigError("rel_pos and rel_mom must have the same length");
             }
             return s;
           }),
           py::arg("R") = 0.0, py::arg("P") = 0.0, py::arg("rel_pos") = py::none(), py::arg("rel_mom") = py::none())
      .def_static("constrained", [](const std::vector<double>& masses, double R, double P, std::vector<double> rho,
                                     std::vector<double> pi) {
        return PhaseState::constrained(masses, R, P, std::move(rho), std::move(pi));
      }, py::arg("masses"), py::arg("R"), py::arg("P"), py::arg("rel_pos"), py::arg("rel_mom"))
      .def_readwrite("R", &PhaseState::R)
      .def_readwrite("P", &PhaseState::P)
      .def_readwrite("rel_pos", &PhaseState::rel_pos)
      .def_readwrite("rel_mom", &PhaseState::rel_mom);

  py::class_<HamiltonianSpec>(m, "Spec")
      .def_property_readonly("masses", &HamiltonianSpec::masses)
      .def_property_readonly("total_mass", &HamiltonianSpec::total_mass)
      .def_property_readonly("g", &HamiltonianSpec::g)
      .def_property_readonly("c", &HamiltonianSpec::c)
      .def("with_light_speed", &HamiltonianSpec::with_light_speed, py::arg("c"))
      .def("with_gravity", &HamiltonianSpec::with_gravity, py::arg("g"));

  m.def("supported_clock", &supported_clock, py::arg("masses"), py::arg("g"), py::arg("c"), py::arg("alpha"),
        py::arg("h_rel0") = 0.0, py::arg("omega") = 1.0,
        "Harmonically bound constituents held by the support alpha X^2 / 2.");
  m.def("total_hamiltonian", [](const HamiltonianSpec& spec, const PhaseState& s, double scale, bool include_rest) {
    return total_hamiltonian_eq1(spec, s, EvalOptions{scale, rest_mode(include_rest)});
  }, py::arg("spec"), py::arg("state"), py::arg("internal_scale") = 1.0, py::arg("include_rest") = true);
  m.def("bracket_hamiltonian", [](const HamiltonianSpec& spec, const PhaseState& s, double scale, bool include_rest) {
    return rindler_hamiltonian_bracket(spec, s, scale, rest_mode(include_rest));
  }, py::arg("spec"), py::arg("state"), py::arg("internal_scale") = 1.0, py::arg("include_rest") = true);
  m.def("check_expansion_consistency", [](const HamiltonianSpec& spec, const PhaseState& s, std::vector<double> speeds) {
    const ExpansionReport r = check_expansion_consistency(spec, s, std::move(speeds));
    py::dict out;
    out["light_speeds"] = r.light_speeds;
    out["differences"] = r.differences;
    out["fitted_exponent"] = r.fitted_exponent;
    out["passed"] = r.passed;
    return out;
  }, py::arg("spec"), py::arg("state"), py::arg("light_speeds") = std::vector<double>{10.0, 20.0, 40.0, 80.0});

  py::class_<EquilibriumResult>(m, "EquilibriumResult")
      .def_readonly("state", &EquilibriumResult::state)
      .def_readonly("residual", &EquilibriumResult::residual)
      .def_readonly("closed_form_X", &EquilibriumResult::closed_form_X)
      .def_readonly("iterations", &EquilibriumResult::iterations);
  m.def("find_equilibrium", [](const HamiltonianSpec& spec) { return find_equilibrium(spec); }, py::arg("spec"));

  m.def("integrate", [](const HamiltonianSpec& spec, const PhaseState& s0, double dt, std::size_t steps,
                        std::optional<std::pair<double, double>> step_change) {
    InternalSchedule schedule;
    if (step_change) schedule = step_schedule(step_change->first, step_change->second);
    Trajectory tr;
    {
      py::gil_scoped_release release;
      tr = integrate(spec, s0, dt, steps, schedule);
    }
    std::vector<double> X, P;
    for (const PhaseState& s : tr.states) {
      X.push_back(s.R);
      P.push_back(s.P);
    }
    py::dict out;
    out["t"] = tr.times;
    out["X"] = X;
    out["P"] = P;
    out["H"] = tr.energies;
    return out;
  }, py::arg("spec"), py::arg("state"), py::arg("dt"), py::arg("steps"), py::arg("step_change") = py::none(),
     "Implicit-midpoint trajectory; step_change=(t_switch, factor) rescales H_rel.");

  py::class_<InternalSpectrum>(m, "Spectrum")
      .def(py::init([](const std::vector<std::pair<double, double>>& levels) {
             std::vector<EnergyLevel> l;
             for (const auto& [e, p] : levels) l.push_back({e, p});
             return InternalSpectrum(std::move(l));
           }),
           py::arg("levels"), "levels: list of (energy, probability)")
      .def_property_readonly("levels", [](const InternalSpectrum& s) {
        std::vector<std::pair<double, double>> out;
        for (const auto& l : s.levels()) out.emplace_back(l.energy, l.probability);
        return out;
      })
      .def("shifted", &InternalSpectrum::shifted, py::arg("delta"))
      .def("__len__", &InternalSpectrum::size);
  m.def("harmonic_spectrum", &harmonic_spectrum, py::arg("levels"), py::arg("spacing") = 1.0,
        py::arg("ratio") = 0.5);

  py::class_<InterferometerConfig>(m, "InterferometerConfig")
      .def(py::init([](double x_upper, double x_lower, double duration, double g, double c, double hbar,
                       double counter_coupling) {
             InterferometerConfig cfg{x_upper, x_lower, duration, g, c, hbar, counter_coupling};
             cfg.validate();
             return cfg;
           }),
           py::arg("x_upper") = 1.0, py::arg("x_lower") = 0.0, py::arg("duration") = 1.0, py::arg("g") = 1.0,
           py::arg("c") = 1.0, py::arg("hbar") = 1.0, py::arg("counter_coupling") = 0.0)
      .def_readwrite("x_upper", &InterferometerConfig::x_upper)
      .def_readwrite("x_lower", &InterferometerConfig::x_lower)
      .def_readwrite("duration", &InterferometerConfig::duration)
      .def_readwrite("g", &InterferometerConfig::g)
      .def_readwrite("c", &InterferometerConfig::c)
      .def_readwrite("hbar", &InterferometerConfig::hbar)
      .def_readwrite("counter_coupling", &InterferometerConfig::counter_coupling);
  m.def("visibility", &visibility, py::arg("config"), py::arg("spectrum"));
  m.def("visibility_oracle", &visibility_oracle, py::arg("config"), py::arg("spectrum"));

  m.def("run_scenario", &run_scenario_from, py::arg("experiment"), py::arg("params"),
        "Runs a rindler-lab experiment and returns its CSV text.");
  m.def("selfcheck", [] {
    std::vector<CheckResult> results;
    {
      py::gil_scoped_release release;
      results = run_selfcheck();
    }
    py::list out;
    for (const auto& r : results) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
