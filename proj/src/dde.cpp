#include "hbvm/dde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gamma_iteration.hpp"

namespace hbvm {

Vector DdeProblem::start_value() const {
  return initial_value ? *initial_value : history(t0);
}

CommensurableMesh::CommensurableMesh(double delay, int steps_per_delay, int intervals,
                                     double t0)
    : delay_(delay), nu_(steps_per_delay), intervals_(intervals), t0_(t0) {
  if (!(delay > 0.0)) {
    throw std::invalid_argument("CommensurableMesh: delay must be positive");
  }
  if (steps_per_delay < 1) {
    throw std::invalid_argument("CommensurableMesh: need at least one step per delay");
  }
  if (intervals < 1) {
    throw std::invalid_argument("CommensurableMesh: need at least one delay interval");
  }
}

HistoryBuffer::HistoryBuffer(std::function<Vector(double)> history,
                             const CommensurableMesh& mesh)
    : history_(std::move(history)), mesh_(mesh) {
  if (!history_) {
    throw std::invalid_argument("HistoryBuffer: missing pre-history");
  }
}

const StepPolynomial& HistoryBuffer::segment(int n) const {
  if (n < 1 || n > completed_steps()) {
    throw std::out_of_range("HistoryBuffer: no segment for step " + std::to_string(n));
  }
  return segments_[n - 1];
}

void HistoryBuffer::append(StepPolynomial polynomial) {
  segments_.push_back(std::move(polynomial));
}

Vector HistoryBuffer::eval_global(double t) const {
  const double t0 = mesh_.t0();
  const double h = mesh_.step_size();
  if (t < t0 - mesh_.delay() || t > mesh_.time(completed_steps())) {
    throw std::out_of_range("HistoryBuffer: time outside the stored history");
  }
  if (t < t0 || (t == t0 && segments_.empty())) {
    return history_(t);
  }
  int n = static_cast<int>(std::ceil((t - t0) / h));
  n = std::clamp(n, 1, completed_steps());
  const double c = std::clamp((t - mesh_.time(n - 1)) / h, 0.0, 1.0);
  return segments_[n - 1].eval(c);
}

Matrix HistoryBuffer::delayed_values(int n, std::span<const double> nodes) const {
  const int lag = n - mesh_.steps_per_delay();
  const int k = static_cast<int>(nodes.size());
  if (lag > completed_steps()) {
    throw std::logic_error("HistoryBuffer: delayed segment " + std::to_string(lag) +
                           " not computed yet");
  }
  Matrix out;
  for (int i = 0; i < k; ++i) {
    Vector v;
    if (lag <= 0) {
      // t_{n-1} + c_i h - delay, formed from integers to avoid drift.
      v = history_(mesh_.t0() + (lag - 1 + nodes[i]) * mesh_.step_size());
    } else {
      v = segments_[lag - 1].eval(nodes[i]);
    }
    if (i == 0) {
      out.resize(v.size(), k);
    }
    out.col(i) = v;
  }
  return out;
}

StepResult dde_step(const DdeProblem& problem, const Method& method,
                    const HistoryBuffer& history, int n, const SolverSettings& settings,
                    const Matrix* guess) {
  if (n < 1 || history.completed_steps() != n - 1) {
    throw std::logic_error("dde_step: history must be complete through step n - 1");
  }
  const Vector y_prev =
      n == 1 ? problem.start_value() : history.segment(n - 1).right_value();
  const double h = history.mesh().step_size();
  const Matrix delayed = history.delayed_values(n, method.rule().nodes);

  auto field = [&](int i, const Vector& y) { return problem.rhs(y, Vector(delayed.col(i))); };
  auto jacobian = [&]() -> Matrix {
    const Vector w = delayed.col(method.stages() / 2);
    if (problem.jacobian_now) {
      return problem.jacobian_now(y_prev, w);
    }
    return finite_difference_jacobian([&](const Vector& y) { return problem.rhs(y, w); },
                                      y_prev);
  };
  GammaSolution sol = detail::iterate_gamma(method, y_prev, h, settings, field, jacobian, guess);

  StepResult out;
  out.polynomial = StepPolynomial{y_prev, h, std::move(sol.gamma)};
  out.y = out.polynomial.right_value();
  out.iterations = sol.iterations;
  return out;
}

DdeRunReport integrate_dde(const DdeProblem& problem, const Method& method,
                           const CommensurableMesh& mesh, const SolverSettings& settings) {
  settings.validate();
  if (problem.delay != mesh.delay()) {
    throw std::invalid_argument("integrate_dde: mesh delay differs from the problem delay");
  }
  if (problem.t0 != mesh.t0()) {
    throw std::invalid_argument("integrate_dde: mesh start differs from the problem start");
  }
  DdeRunReport out{RunReport{}, HistoryBuffer(problem.history, mesh)};
  RunReport& run = out.run;
  const int N = mesh.steps();
  run.t.reserve(N + 1);
  run.y.reserve(N + 1);
  run.steps.reserve(N);
  run.iterations.reserve(N + 1);
  run.t.push_back(mesh.t0());
  run.y.push_back(problem.start_value());
  run.iterations.push_back(0);
  if (run.y.front().size() != problem.dim) {
    throw std::invalid_argument("integrate_dde: initial value has wrong dimension");
  }

  for (int n = 1; n <= N; ++n) {
    const Matrix* guess = nullptr;
    if (settings.initial_guess == InitialGuess::carry_over && !run.steps.empty()) {
      guess = &run.steps.back().gamma;
    }
    StepResult result;
    try {
      result = dde_step(problem, method, out.history, n, settings, guess);
    } catch (const std::exception& e) {
      throw IntegrationError("step " + std::to_string(n) + ": " + e.what(),
                             static_cast<std::size_t>(n));
    }
    out.history.append(result.polynomial);
    run.t.push_back(mesh.time(n));
    run.y.push_back(std::move(result.y));
    run.steps.push_back(std::move(result.polynomial));
    run.iterations.push_back(result.iterations);
  }
  return out;
}

}  // namespace hbvm
