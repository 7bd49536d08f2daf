#include "rindler/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "rindler/dynamics.hpp"
#include "rindler/errors.hpp"
#include "rindler/frames.hpp"
#include "rindler/hamiltonian.hpp"
#include "rindler/redshift.hpp"
#include "rindler/visibility.hpp"

namespace rindler {

namespace {

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::frames_check, "frames-check"}, {Experiment::redshift, "redshift"},
    {Experiment::equilibrium, "equilibrium"},   {Experiment::drift, "drift"},
    {Experiment::visibility, "visibility"},     {Experiment::expansion_check, "expansion-check"},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

double parse_number(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError("parameter '" + key + "' is not a finite number: '" + text + "'");
  }
  return v;
}

class CsvWriter {
 public:
  explicit CsvWriter(const ScenarioConfig& config) {
    out_ << "# rindler-lab " << RINDLER_VERSION << '\n';
    out_ << "# experiment = " << experiment_name(config.experiment()) << '\n';
    for (const auto& [key, value] : config.parameters()) out_ << "# " << key << " = " << value << '\n';
  }

  void comment(const std::string& key, double value) {
    out_ << "# " << key << " = " << format_number(value) << '\n';
  }

  void header(const std::vector<std::string>& columns) { row_of(columns); }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_number(values[i]);
    }
    out_ << '\n';
  }

  std::ostream& stream() { return out_; }
  std::string str() const { return out_.str(); }

 private:
  void row_of(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::ostringstream out_;
};

std::string run_frames_check(const ScenarioConfig& cfg) {
  const FrameSpec frame(cfg.number("g"), cfg.number("b"), cfg.number("c"));
  const auto samples = static_cast<std::size_t>(cfg.number_or("samples", 100));
  const auto seed = static_cast<std::uint64_t>(cfg.number_or("seed", 1));
  const FrameSpec base = frame.unshifted();
  const FrameSpec shifted_base(effective_acceleration(frame), 0.0, frame.c());
  const double a = frame.horizon_distance();
  const double t_scale = frame.c() / frame.g();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CsvWriter csv(cfg);
  csv.header({"t_rindler", "x_rindler", "T", "X", "t_roundtrip", "x_roundtrip", "t_shifted",
              "x_shifted", "roundtrip_error", "consistency_error"});
  for (std::size_t i = 0; i < samples; ++i) {
    const RindlerEvent e{t_scale * (4.0 * unit(rng) - 2.0), a * (2.9 * unit(rng) - 0.9)};
    const MinkowskiEvent m = rindler_to_minkowski(e, base);
    const RindlerEvent back = minkowski_to_rindler(m, base);
    const RindlerEvent s = shift_rindler(e, frame);
    const MinkowskiEvent ms = rindler_to_minkowski(s, shifted_base);
    const double roundtrip =
        std::max(std::abs(back.t - e.t) / std::max(std::abs(e.t), t_scale),
                 std::abs(back.x - e.x) / std::max(std::abs(e.x), a));
    const double consistency =
        std::max(std::abs(ms.t - m.t) / std::max(std::abs(m.t), t_scale),
                 std::abs(ms.x - (m.x - frame.b())) / std::max(std::abs(m.x - frame.b()), a));
    csv.row({e.t, e.x, m.t, m.x, back.t, back.x, s.t, s.x, roundtrip, consistency});
  }
  return csv.str();
}

std::string run_redshift(const ScenarioConfig& cfg) {
  const double g = cfg.number("g"), b = cfg.number("b"), E = cfg.number("E"), c = cfg.number("c");
  const RedshiftResult r = run_redshift_experiment(g, b, E, c);
  CsvWriter csv(cfg);
  csv.header({"g", "b", "c", "E_emitted", "T_absorption", "X_absorption", "tau_absorption",
              "measured_energy", "first_order_energy", "doppler_factor", "first_order",
              "exp_factor"});
  csv.row({g, b, c, E, r.absorption_event.t, r.absorption_event.x, r.detector_proper_time,
           r.measured_energy, r.first_order_energy, r.doppler_factor, 1.0 + g * b / (c * c),
           std::exp(g * r.detector_proper_time / c)});
  return csv.str();
}

// Composite of `particles` equal constituents with harmonic internal binding
// and internal ground energy Hrel0, supported by alpha X^2 / 2.
HamiltonianSpec supported_clock(const ScenarioConfig& cfg) {
  const double M = cfg.number("M");
  const auto n = static_cast<std::size_t>(cfg.number_or("particles", 1));
  if (n < 1) throw ConfigError("particles must be >= 1");
  std::vector<double> masses(n, M / static_cast<double>(n));
  return HamiltonianSpec(masses, cfg.number("g"), cfg.number("c"),
                         harmonic_internal(masses, cfg.number_or("omega", 1.0), cfg.number("Hrel0")),
                         harmonic_support(cfg.number("alpha")));
}

std::string run_equilibrium(const ScenarioConfig& cfg) {
  const HamiltonianSpec spec = supported_clock(cfg);
  const EquilibriumResult eq = find_equilibrium(spec);
  CsvWriter csv(cfg);
  csv.header({"M", "g", "alpha", "Hrel0", "c", "X_closed_form", "X_solver", "P_solver", "residual",
              "iterations"});
  csv.row({spec.total_mass(), spec.g(), cfg.number("alpha"), cfg.number("Hrel0"), spec.c(),
           eq.closed_form_X.value_or(std::nan("")), eq.state.R, eq.state.P, eq.residual,
           static_cast<double>(eq.iterations)});
  return csv.str();
}

// "constant" or "step:<t_switch>:<factor>".
std::pair<InternalSchedule, double> parse_schedule(const std::string& text) {
  if (text == "constant") return {InternalSchedule{}, 0.0};
  if (text.rfind("step:", 0) == 0) {
    const auto sep = text.find(':', 5);
    if (sep == std::string::npos) throw ConfigError("schedule must be 'step:<t_switch>:<factor>'");
    const double t_switch = parse_number("schedule", text.substr(5, sep - 5));
    const double factor = parse_number("schedule", text.substr(sep + 1));
    return {step_schedule(t_switch, factor), t_switch};
  }
  throw ConfigError("unknown schedule '" + text + "' (expected 'constant' or 'step:<t>:<factor>')");
}

std::string run_drift(const ScenarioConfig& cfg) {
  const HamiltonianSpec spec = supported_clock(cfg);
  const double dt = cfg.number("dt");
  const double steps = cfg.number("steps");
  if (!(steps >= 1)) throw ConfigError("steps must be >= 1");
  const auto [schedule, change_time] = parse_schedule(cfg.text_or("schedule", "constant"));
  const auto stride = static_cast<std::size_t>(std::max(1.0, cfg.number_or("stride", 1)));

  const EquilibriumResult eq = find_equilibrium(spec);
  const double horizon = steps * dt;
  if (!(horizon > change_time)) throw ConfigError("schedule change lies beyond the integration horizon");
  const DriftResult drift =
      drift_under_internal_change(spec, schedule, eq.state, horizon, dt, change_time);

  CsvWriter csv(cfg);
  csv.comment("initial_X", drift.initial_X);
  csv.comment("averaged_X", drift.averaged_X);
  csv.comment("observed_shift", drift.averaged_X - drift.initial_X);
  csv.comment("predicted_shift", drift.predicted_shift);
  Trajectory thinned;
  for (std::size_t i = 0; i < drift.trajectory.size(); i += stride) {
    thinned.times.push_back(drift.trajectory.times[i]);
    thinned.states.push_back(drift.trajectory.states[i]);
    thinned.energies.push_back(drift.trajectory.energies[i]);
  }
  write_trajectory_csv(csv.stream(), thinned);
  return csv.str();
}

std::string run_visibility(const ScenarioConfig& cfg) {
  InterferometerConfig base;
  base.g = cfg.number("g");
  base.c = cfg.number("c");
  base.hbar = cfg.number("hbar");
  base.duration = cfg.number("T");
  base.x_lower = cfg.number_or("x_lower", 0.0);
  base.x_upper = base.x_lower + cfg.number("dx");
  base.counter_coupling = cfg.number_or("lambda", 0.0);
  const auto levels = static_cast<std::size_t>(cfg.number_or("levels", 8));
  const InternalSpectrum spectrum =
      harmonic_spectrum(levels, cfg.number_or("spacing", 1.0), cfg.number_or("ratio", 0.5));

  // sweep = <lambda|T|dx>:<start>:<stop>:<points>
  std::string variable = "lambda";
  std::vector<double> values{base.counter_coupling};
  if (cfg.has("sweep")) {
    std::vector<std::string> parts;
    std::stringstream ss(cfg.text_or("sweep", ""));
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
    if (parts.size() != 4 || (parts[0] != "lambda" && parts[0] != "T" && parts[0] != "dx")) {
      throw ConfigError("sweep must be '<lambda|T|dx>:<start>:<stop>:<points>'");
    }
    variable = parts[0];
    const double start = parse_number("sweep", parts[1]);
    const double stop = parse_number("sweep", parts[2]);
    const double points = parse_number("sweep", parts[3]);
    if (!(points >= 1)) throw ConfigError("sweep needs at least one point");
    const auto n = static_cast<std::size_t>(points);
    values.clear();
    for (std::size_t i = 0; i < n; ++i) {
      values.push_back(n == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }

  // Independent sweep points are evaluated concurrently; rows stay in order.
  std::vector<std::future<std::pair<double, double>>> jobs;
  for (double v : values) {
    InterferometerConfig point = base;
    if (variable == "lambda") point.counter_coupling = v;
    if (variable == "T") point.duration = v;
    if (variable == "dx") point.x_upper = point.x_lower + v;
    point.validate();
    jobs.push_back(std::async(std::launch::async, [point, &spectrum] {
      return std::pair{visibility(point, spectrum), visibility_oracle(point, spectrum)};
    }));
  }
  CsvWriter csv(cfg);
  csv.header({variable, "V_closed_form", "V_oracle"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto [closed, oracle] = jobs[i].get();
    csv.row({values[i], closed, oracle});
  }
  return csv.str();
}

std::string run_expansion_check(const ScenarioConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.number_or("particles", 1));
  if (n < 1) throw ConfigError("particles must be >= 1");
  const double M = cfg.number("M");
  std::vector<double> masses(n, M / static_cast<double>(n));
  const HamiltonianSpec spec(masses, cfg.number("g"), cfg.number("c"),
                             harmonic_internal(masses, cfg.number_or("omega", 1.0), cfg.number("Hrel0")),
                             harmonic_support(cfg.number_or("alpha", 1.0)));
  const PhaseState state = PhaseState::constrained(masses, cfg.number("X"), cfg.number("P"),
                                                   std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
  std::vector<double> speeds;
  std::stringstream ss(cfg.text_or("c_values", "10,20,40,80"));
  for (std::string item; std::getline(ss, item, ',');) speeds.push_back(parse_number("c_values", trim(item)));
  const ExpansionReport report = check_expansion_consistency(spec, state, speeds);

  CsvWriter csv(cfg);
  csv.stream() << "# rest energy M c^2 excluded from H_expanded and H_bracket\n";
  csv.header({"c", "H_expanded", "H_bracket", "difference", "fitted_exponent"});
  EvalOptions without_rest;
  without_rest.rest_energy = RestEnergy::excluded;
  for (std::size_t i = 0; i < report.light_speeds.size(); ++i) {
    const HamiltonianSpec at_c = spec.with_light_speed(report.light_speeds[i]);
    csv.row({report.light_speeds[i], total_hamiltonian_eq1(at_c, state, without_rest),
             rindler_hamiltonian_bracket(at_c, state, 1.0, RestEnergy::excluded), report.differences[i],
             report.fitted_exponent.value_or(std::nan(""))});
  }
  return csv.str();
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [e, n] : kExperimentNames) {
    if (n == name) return e;
  }
  return std::nullopt;
}

std::string_view experiment_name(Experiment e) {
  for (const auto& [candidate, n] : kExperimentNames) {
    if (candidate == e) return n;
  }
  return "unknown";
}

ScenarioConfig::ScenarioConfig(Experiment experiment, std::map<std::string, std::string> parameters)
    : experiment_(experiment), parameters_(std::move(parameters)) {
  const std::string units = lower(text_or("units", "geometric"));
  if (units == "geometric") {
    units_ = UnitSystem::geometric;
  } else if (units == "si") {
    units_ = UnitSystem::si;
  } else {
    throw ConfigError("units must be 'geometric' or 'SI', got '" + units + "'");
  }
  parameters_["units"] = units_ == UnitSystem::si ? "SI" : "geometric";
  if (units_ == UnitSystem::si) {
    parameters_.try_emplace("c", format_number(si::speed_of_light));
    parameters_.try_emplace("hbar", format_number(si::reduced_planck));
  } else {
    parameters_.try_emplace("c", "1");
    parameters_.try_emplace("hbar", "1");
  }
  if (auto it = parameters_.find("experiment"); it != parameters_.end()) {
    if (it->second != experiment_name(experiment_)) {
      throw ConfigError("config declares experiment '" + it->second + "' but '" +
                        std::string(experiment_name(experiment_)) + "' was requested");
    }
  }
}

double ScenarioConfig::number(const std::string& key) const {
  auto it = parameters_.find(key);
  if (it == parameters_.end()) {
    throw ConfigError("missing required key '" + key + "' for experiment " +
                      std::string(experiment_name(experiment_)));
  }
  return parse_number(key, it->second);
}

double ScenarioConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::string ScenarioConfig::text_or(const std::string& key, const std::string& fallback) const {
  auto it = parameters_.find(key);
  return it == parameters_.end() ? fallback : it->second;
}

ScenarioConfig parse_config(std::istream& in, Experiment experiment) {
  std::map<std::string, std::string> params;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!params.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return ScenarioConfig(experiment, std::move(params));
}

ScenarioConfig load_config(const std::filesystem::path& path, Experiment experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, experiment);
}

std::string run_scenario(const ScenarioConfig& config) {
  switch (config.experiment()) {
    case Experiment::frames_check: return run_frames_check(config);
    case Experiment::redshift: return run_redshift(config);
    case Experiment::equilibrium: return run_equilibrium(config);
    case Experiment::drift: return run_drift(config);
    case Experiment::visibility: return run_visibility(config);
    case Experiment::expansion_check: return run_expansion_check(config);
  }
  throw ConfigError("unknown experiment");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace rindler
