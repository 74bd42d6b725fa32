// Command-line front end: tableau, integrate-ode, integrate-dde, convergence
// and reproduce subcommands sharing one flat set of flags.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "hbvm/config.hpp"
#include "hbvm/experiment.hpp"

namespace {

struct Flag {
  const char* name;  // config key
  const char* option;
  const char* help;
};

const std::vector<Flag> kFlags = {
    {"problem", "--problem", "problem id"},
    {"k", "--k", "number of quadrature nodes (stages)"},
    {"s", "--s", "polynomial degree"},
    {"nodes", "--nodes", "'gauss' or a comma-separated list of abscissae"},
    {"nu", "--nu", "steps per delay (DDE)"},
    {"K", "--K", "number of delay intervals (DDE)"},
    {"h", "--h", "timestep"},
    {"steps", "--steps", "number of steps (ODE) or first ladder entry"},
    {"t0", "--t0", "initial time"},
    {"T", "--T", "final time"},
    {"rtol", "--rtol", "relative tolerance of the nonlinear solver"},
    {"atol", "--atol", "absolute tolerance of the nonlinear solver"},
    {"max_iter", "--max-iter", "iteration budget per step"},
    {"scheme", "--scheme", "fixed-point | newton"},
    {"out", "--out", "output file (directory for reproduce)"},
    {"precision", "--precision", "significant digits in CSV output"},
    {"levels", "--levels", "convergence ladder length"},
    {"reference", "--reference", "convergence reference: analytic | fine"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HBVM(k,s) integrators for ODEs and constant-delay DDEs"};
  app.require_subcommand(1);
  // --h is the timestep; keep only the long help flag.
  app.set_help_flag("--help", "print this help message and exit");

  std::string config_path;
  std::map<std::string, std::string> values;
  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"tableau", "print c, b and A of HBVM(k,s) as CSV"},
      {"integrate-ode", "integrate an ODE test problem on a uniform mesh"},
      {"integrate-dde", "integrate a delay problem on a commensurable mesh"},
      {"convergence", "measure mesh and dense-output orders on a step ladder"},
      {"reproduce", "rerun the published delay Hamiltonian experiments"}};
  for (const auto& [kind, description] : kinds) {
    CLI::App* sub = app.add_subcommand(kind, description);
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--config", config_path, "flat key = value configuration file");
    for (const auto& flag : kFlags) {
      sub->add_option(flag.option, values[flag.name], flag.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? hbvm::kSuccess : hbvm::kInvalidConfig;
  }

  hbvm::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = hbvm::load_config(config_path);
    config.kind = app.get_subcommands().front()->get_name();
    for (const auto& flag : kFlags) {
      const CLI::App* sub = app.get_subcommands().front();
      if (sub->count(flag.option) > 0) config.set(flag.name, values[flag.name]);
    }
  } catch (const hbvm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hbvm::kInvalidConfig;
  }
  return hbvm::run_experiment(config, std::cout, std::cerr);
}
