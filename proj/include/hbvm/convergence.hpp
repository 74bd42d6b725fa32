#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hbvm/method.hpp"
#include "hbvm/problems.hpp"

namespace hbvm {

struct ConvergenceRow {
  double h = 0.0;
  double mesh_error = 0.0;     // max_n |y_n - y(t_n)|
  double uniform_error = 0.0;  // max over steps and sampled c of |u(t) - y(t)|
  std::optional<double> mesh_slope;     // against the previous row
  std::optional<double> uniform_slope;
};

struct ConvergenceTable {
  std::string method;
  int k = 0;
  int s = 0;
  std::vector<ConvergenceRow> rows;

  /// Consecutive-row slopes whose two errors both exceed `noise_floor`.
  std::vector<double> mesh_slopes(double noise_floor) const;
  std::vector<double> uniform_slopes(double noise_floor) const;

  /// True when every usable slope lies within `tolerance` of 2s (mesh) and
  /// s + 1 (uniform) and at least one slope is usable.
  bool mesh_order_matches(double tolerance, double noise_floor) const;
  bool uniform_order_matches(double tolerance, double noise_floor) const;
};

enum class ReferenceKind { analytic, fine_step };

/// Errors below this level are treated as round-off when judging slopes.
inline constexpr double kDefaultNoiseFloor = 1e-13;

/// `ladder` holds step counts: N for an ODE over [t0, T], nu (steps per
/// delay) for a DDE over its case's number of delay intervals. It must be
/// strictly increasing by a fixed ratio. With ReferenceKind::fine_step the
/// reference is a run of the same method with 100 times the largest count.
std::vector<ConvergenceTable> run_convergence(const OdeCase& problem,
                                              const std::vector<Method>& methods,
                                              const std::vector<int>& ladder,
                                              const SolverSettings& settings,
                                              ReferenceKind reference);

std::vector<ConvergenceTable> run_convergence(const DdeCase& problem,
                                              const std::vector<Method>& methods,
                                              const std::vector<int>& ladder,
                                              const SolverSettings& settings,
                                              ReferenceKind reference);

/// Geometric ladder first, first*ratio, ..., up to and including last.
std::vector<int> geometric_ladder(int first, int last, int ratio = 2);

}  // namespace hbvm
