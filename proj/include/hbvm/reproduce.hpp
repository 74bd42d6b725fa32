#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hbvm/dde.hpp"
#include "hbvm/hamiltonian.hpp"

namespace hbvm {

/// Run configuration of one delay Hamiltonian experiment.
struct ReproductionSetup {
  ProblemId id = ProblemId::problem1;
  int steps_per_delay = 5;  // h = delay / steps_per_delay
  int intervals = 2000;     // T = intervals * delay
  std::vector<std::pair<int, int>> methods;  // (k, s)
  /// Sampling stride in steps (one period of the attracting orbit) and the
  /// residue n mod stride of the sampled mesh points; stride 0 disables.
  int sample_stride = 0;
  int sample_phase = 0;
  /// Steps with t < transient_fraction * T are discarded from diagnostics.
  double transient_fraction = 0.1;
};

/// The published configurations: problem1 h = 0.2, T = 2000, HBVM(2,2) and
/// HBVM(4,2); problem2 h = 0.1, T = 1000, HBVM(2,2) and HBVM(10,2);
/// problem3 h = 0.5, T = 500, HBVM(2,2) and HBVM(10,2).
ReproductionSetup published_setup(ProblemId id);

struct MethodRun {
  int k = 0;
  int s = 0;
  std::string label;
  DdeRunReport result;
  EnergySeries energy;
  /// Post-transient mesh indices n = phase (mod stride) and their states.
  std::vector<int> sample_steps;
  std::vector<Vector> samples;

  /// max |H(y_n) - H(y_{n-1})| after the transient.
  double energy_oscillation = 0.0;
  double max_energy = 0.0;  // over n >= 1
  /// Mean q over the post-transient window (first component block).
  Vector mean_position;
};

struct Reproduction {
  ReproductionSetup setup;
  std::vector<MethodRun> runs;

  const MethodRun& run(int k, int s) const;
};

Reproduction reproduce(const ReproductionSetup& setup, const SolverSettings& settings);

/// Writes, for every method, <problem>_hbvm<k>_<s>.csv (the solution),
/// ..._energy.csv (n, t, H, |dH|) and, when sampling is enabled,
/// ..._samples.csv. Returns the written paths.
std::vector<std::filesystem::path> write_reproduction(const Reproduction& reproduction,
                                                      const std::filesystem::path& directory,
                                                      int precision);

}  // namespace hbvm
