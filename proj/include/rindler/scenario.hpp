#pragma once

// Scenario runner behind the rindler-lab command line tool.
//
// Config files are flat `key = value` text; `#` starts a comment. A `units`
// key selects `geometric` (default; c = hbar = 1 unless given) or `SI`
// (c and hbar default to their SI values). Output is CSV with `#`
// provenance lines (tool version and the full resolved parameter set), a
// header row, and values printed with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rindler {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;
inline constexpr int kExitInvariantFailure = 4;

enum class Experiment { frames_check, redshift, equilibrium, drift, visibility, expansion_check };

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

enum class UnitSystem { geometric, si };

class ScenarioConfig {
 public:
  ScenarioConfig(Experiment experiment, std::map<std::string, std::string> parameters);

  Experiment experiment() const noexcept { return experiment_; }
  UnitSystem units() const noexcept { return units_; }
  const std::map<std::string, std::string>& parameters() const noexcept { return parameters_; }

  bool has(const std::string& key) const { return parameters_.count(key) != 0; }
  /// Throws ConfigError when the key is missing or not a number.
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;

 private:
  Experiment experiment_;
  UnitSystem units_ = UnitSystem::geometric;
  std::map<std::string, std::string> parameters_;
};

/// Parses `key = value` lines. A config-level `experiment` key must agree
/// with `experiment`. Throws ConfigError on malformed input.
ScenarioConfig parse_config(std::istream& in, Experiment experiment);
ScenarioConfig load_config(const std::filesystem::path& path, Experiment experiment);

/// Runs the experiment and returns the complete CSV document. Throws
/// ConfigError for missing or invalid keys and NumericError subclasses for
/// module failures.
std::string run_scenario(const ScenarioConfig& config);

/// Formats with 17 significant digits.
std::string format_number(double v);

}  // namespace rindler
