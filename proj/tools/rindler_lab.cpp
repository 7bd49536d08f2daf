// rindler-lab: runs the Rindler-frame experiments from flat config files.
//
//   rindler-lab <experiment> --config <file> [--out <path>]
//   rindler-lab selfcheck
//
// Exit codes: 0 ok, 2 config error, 3 numeric/solver error, 4 invariant failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "rindler/errors.hpp"
#include "rindler/scenario.hpp"
#include "rindler/selfcheck.hpp"

namespace {

int run_experiment(const std::string& name, const std::string& config_path, const std::string& out_path) {
  const auto experiment = rindler::parse_experiment(name);
  if (!experiment) {
    std::cerr << "rindler-lab: unknown experiment '" << name << "'\n";
    return rindler::kExitConfigError;
  }
  try {
    const rindler::ScenarioConfig config = rindler::load_config(config_path, *experiment);
    const std::string csv = rindler::run_scenario(config);
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "rindler-lab: cannot write '" << out_path << "'\n";
        return rindler::kExitConfigError;
      }
      out << csv;
    }
    return rindler::kExitOk;
  } catch (const rindler::ConfigError& e) {
    std::cerr << "rindler-lab: config error: " << e.what() << '\n';
    return rindler::kExitConfigError;
  } catch (const rindler::NumericError& e) {
    std::cerr << "rindler-lab: numeric error: " << e.what() << '\n';
    return rindler::kExitNumericError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rindler-frame laboratory: redshift, equilibrium, drift and visibility experiments"};
  app.set_version_flag("--version", std::string(RINDLER_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string chosen;
  for (const char* name :
       {"frames-check", "redshift", "equilibrium", "drift", "visibility", "expansion-check"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "key = value config file")->required();
    sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* selfcheck = app.add_subcommand("selfcheck", "run the invariant suite");
  selfcheck->callback([&chosen] { chosen = "selfcheck"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rindler::kExitConfigError;
  }

  if (chosen == "selfcheck") {
    const bool ok = rindler::print_check_table(std::cout, rindler::run_selfcheck());
    return ok ? rindler::kExitOk : rindler::kExitInvariantFailure;
  }
  return run_experiment(chosen, config_path, out_path);
}
