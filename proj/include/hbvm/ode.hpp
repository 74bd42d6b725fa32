#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbvm/method.hpp"

namespace hbvm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// y' = f(y) with y(t0) = initial_value.
struct OdeProblem {
  int dim = 0;
  std::function<Vector(const Vector&)> rhs;
  /// Optional df/dy; finite differences are used when empty.
  std::function<Matrix(const Vector&)> jacobian;
  Vector initial_value;
};

/// Degree-s polynomial on one step:
///   u(c h) = y_left + h sum_j (int_0^c P_j) gamma.col(j),   c in [0,1].
struct StepPolynomial {
  Vector y_left;
  double h = 0.0;
  Matrix gamma;  // m x s, column j holds gamma_j

  int degree() const { return static_cast<int>(gamma.cols()); }

  /// u(c h). Exact endpoint values: eval(0) = y_left,
  /// eval(1) = y_left + h gamma_0.
  Vector eval(double c) const;
  Vector right_value() const;
};

enum class IterationScheme { fixed_point, simplified_newton };
enum class InitialGuess { zero, carry_over };

struct SolverSettings {
  IterationScheme scheme = IterationScheme::fixed_point;
  double rtol = 1e-14;
  double atol = 1e-16;
  int max_iterations = 100;
  InitialGuess initial_guess = InitialGuess::zero;

  /// Throws std::invalid_argument on non-positive tolerances or budget.
  void validate() const;

  /// Threshold on the max-norm of an iteration update.
  double tolerance(const Vector& y_prev) const;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// A failed step inside a mesh loop; `step()` is the 1-based step index.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct GammaSolution {
  Matrix gamma;  // m x s
  int iterations = 0;
};

/// Solves the block-s system gamma_j = sum_i b_i P_j(c_i) f(u(c_i h)).
/// `guess` (m x s) replaces the zero initial iterate when given.
GammaSolution solve_gamma(const OdeProblem& problem, const Method& method,
                          const Vector& y_prev, double h,
                          const SolverSettings& settings,
                          const Matrix* guess = nullptr);

/// Stage-space form Y_i = y_prev + h sum_l a_il f(Y_l). Returns Y as m x k
/// (column i is stage i). Kept as an independent cross-check of solve_gamma.
Matrix solve_stages(const OdeProblem& problem, const ButcherTableau& tableau,
                    const Vector& y_prev, double h, const SolverSettings& settings);

struct StepResult {
  Vector y;
  StepPolynomial polynomial;
  int iterations = 0;
};

StepResult step(const OdeProblem& problem, const Method& method, const Vector& y_prev,
                double h, const SolverSettings& settings,
                const Matrix* guess = nullptr);

/// Mesh values, per-step polynomials and iteration counts of a run.
/// Index n runs over 0..N; steps[n-1] and iterations[n] belong to step n
/// (iterations[0] is 0).
struct RunReport {
  std::vector<double> t;
  std::vector<Vector> y;
  std::vector<StepPolynomial> steps;
  std::vector<int> iterations;

  std::size_t size() const { return t.size(); }
  long total_iterations() const;
  /// Dense output on [t.front(), t.back()].
  Vector dense(double time) const;
};

/// Uniform mesh with h = (T - t0) / N.
RunReport integrate(const OdeProblem& problem, const Method& method, double t0,
                    double T, int N, const SolverSettings& settings);

/// Forward-difference Jacobian of `f` at y.
Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                  const Vector& y);

}  // namespace hbvm
