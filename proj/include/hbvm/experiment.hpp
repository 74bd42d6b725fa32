#pragma once

#include <iosfwd>

#include "hbvm/config.hpp"

namespace hbvm {

/// Process exit codes of the command-line front end.
enum ExitCode : int { kSuccess = 0, kSolverFailure = 1, kInvalidConfig = 2 };

/// Runs the experiment named by config.kind. Tabular results go to `out`
/// (or to config.out when set), diagnostics to `err`.
int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hbvm
