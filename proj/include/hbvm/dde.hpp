#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hbvm/ode.hpp"

namespace hbvm {

/// y'(t) = f(y(t), y(t - delay)) for t >= t0, y(t) = history(t) on
/// [t0 - delay, t0), y(t0) = initial_value (defaults to history(t0)).
struct DdeProblem {
  int dim = 0;
  std::function<Vector(const Vector& now, const Vector& delayed)> rhs;
  double delay = 1.0;
  double t0 = 0.0;
  std::function<Vector(double)> history;
  std::optional<Vector> initial_value;
  /// Optional partial Jacobians df/dy(t) and df/dy(t - delay).
  std::function<Matrix(const Vector&, const Vector&)> jacobian_now;
  std::function<Matrix(const Vector&, const Vector&)> jacobian_delayed;

  Vector start_value() const;
};

/// Uniform mesh with delay = steps_per_delay * h and T - t0 = intervals * delay.
/// h is always delay / steps_per_delay and mesh points are t0 + n h.
class CommensurableMesh {
 public:
  CommensurableMesh(double delay, int steps_per_delay, int intervals, double t0 = 0.0);

  double delay() const { return delay_; }
  int steps_per_delay() const { return nu_; }
  int intervals() const { return intervals_; }
  double t0() const { return t0_; }
  double step_size() const { return delay_ / nu_; }
  int steps() const { return nu_ * intervals_; }
  double time(int n) const { return t0_ + n * step_size(); }
  double end_time() const { return time(steps()); }

 private:
  double delay_;
  int nu_;
  int intervals_;
  double t0_;
};

/// The piecewise approximant u(t): the pre-history for t < t0 and one stored
/// step polynomial per completed step afterwards.
class HistoryBuffer {
 public:
  HistoryBuffer(std::function<Vector(double)> history, const CommensurableMesh& mesh);

  const CommensurableMesh& mesh() const { return mesh_; }
  int completed_steps() const { return static_cast<int>(segments_.size()); }
  const StepPolynomial& segment(int n) const;  // 1-based step index
  const std::vector<StepPolynomial>& segments() const { return segments_; }

  void append(StepPolynomial polynomial);

  /// u(t) for t in [t0 - delay, t_current].
  Vector eval_global(double t) const;

  /// u_{n-nu}(c_i h) for every node: column i of the m x k result.
  Matrix delayed_values(int n, std::span<const double> nodes) const;

 private:
  std::function<Vector(double)> history_;
  CommensurableMesh mesh_;
  std::vector<StepPolynomial> segments_;
};

/// Solves step n (1-based) given a history complete through step n - 1.
StepResult dde_step(const DdeProblem& problem, const Method& method,
                    const HistoryBuffer& history, int n, const SolverSettings& settings,
                    const Matrix* guess = nullptr);

struct DdeRunReport {
  RunReport run;
  HistoryBuffer history;
};

DdeRunReport integrate_dde(const DdeProblem& problem, const Method& method,
                           const CommensurableMesh& mesh, const SolverSettings& settings);

}  // namespace hbvm
