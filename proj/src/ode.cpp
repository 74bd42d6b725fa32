#include "hbvm/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <unsupported/Eigen/KroneckerProduct>

#include "gamma_iteration.hpp"
#include "hbvm/legendre.hpp"

namespace hbvm {

Vector StepPolynomial::eval(double c) const {
  if (c == 0.0) {
    return y_left;
  }
  if (c == 1.0) {
    return right_value();
  }
  const int s = degree();
  const LegendreBasis basis(s);
  Vector integ(s);
  basis.integrals(c, std::span<double>(integ.data(), s));
  return y_left + h * (gamma * integ);
}

Vector StepPolynomial::right_value() const { return y_left + h * gamma.col(0); }

void SolverSettings::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) {
    throw std::invalid_argument("SolverSettings: tolerances must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("SolverSettings: max_iterations must be at least 1");
  }
}

double SolverSettings::tolerance(const Vector& y_prev) const {
  const double scale = 1.0 + (y_prev.size() > 0 ? y_prev.cwiseAbs().maxCoeff() : 0.0);
  return std::max(atol, rtol * scale);
}

Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                  const Vector& y) {
  const Vector f0 = f(y);
  Matrix jac(f0.size(), y.size());
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double dy = root_eps * std::max(1.0, std::abs(y(j)));
    Vector yp = y;
    yp(j) += dy;
    jac.col(j) = (f(yp) - f0) / (yp(j) - y(j));
  }
  return jac;
}

namespace {

Matrix ode_jacobian(const OdeProblem& problem, const Vector& y) {
  return problem.jacobian ? problem.jacobian(y) : finite_difference_jacobian(problem.rhs, y);
}

}  // namespace

GammaSolution solve_gamma(const OdeProblem& problem, const Method& method,
                          const Vector& y_prev, double h,
                          const SolverSettings& settings, const Matrix* guess) {
  return detail::iterate_gamma(
      method, y_prev, h, settings,
      [&](int, const Vector& y) { return problem.rhs(y); },
      [&] { return ode_jacobian(problem, y_prev); }, guess);
}

Matrix solve_stages(const OdeProblem& problem, const ButcherTableau& tableau,
                    const Vector& y_prev, double h, const SolverSettings& settings) {
  settings.validate();
  if (!(h > 0.0)) {
    throw std::invalid_argument("solve_stages: timestep must be positive");
  }
  const int m = static_cast<int>(y_prev.size());
  const int k = tableau.k;
  Matrix stages = y_prev.replicate(1, k);
  Matrix values(m, k);
  auto evaluate = [&](int iteration) {
    for (int i = 0; i < k; ++i) {
      values.col(i) = problem.rhs(Vector(stages.col(i)));
    }
    detail::require_finite(values, iteration);
  };

  Eigen::PartialPivLU<Matrix> newton;
  if (settings.scheme == IterationScheme::simplified_newton) {
    const Matrix jac = ode_jacobian(problem, y_prev);
    newton.compute(Matrix::Identity(m * k, m * k) -
                   h * Matrix(Eigen::kroneckerProduct(tableau.A, jac)));
  }

  const double tol = settings.tolerance(y_prev);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= settings.max_iterations; ++it) {
    evaluate(it);
    const Matrix target = (h * values * tableau.A.transpose()).colwise() + y_prev;
    Matrix update;
    if (settings.scheme == IterationScheme::fixed_point) {
      update = target - stages;
    } else {
      const Matrix residual = stages - target;
      update = -Vector(newton.solve(residual.reshaped())).reshaped(m, k);
    }
    stages += update;
    const double size = update.cwiseAbs().maxCoeff();
    if (size <= tol) {
      return stages;
    }
    const double floor = 64.0 * eps * (1.0 + stages.cwiseAbs().maxCoeff());
    if (size <= floor && size >= previous) {
      return stages;
    }
    previous = size;
  }
  throw SolverError("stage iteration did not converge", settings.max_iterations);
}

StepResult step(const OdeProblem& problem, const Method& method, const Vector& y_prev,
                double h, const SolverSettings& settings, const Matrix* guess) {
  GammaSolution sol = solve_gamma(problem, method, y_prev, h, settings, guess);
  StepResult out;
  out.polynomial = StepPolynomial{y_prev, h, std::move(sol.gamma)};
  out.y = out.polynomial.right_value();
  out.iterations = sol.iterations;
  return out;
}

long RunReport::total_iterations() const {
  long total = 0;
  for (int it : iterations) {
    total += it;
  }
  return total;
}

Vector RunReport::dense(double time) const {
  if (steps.empty() || t.size() != steps.size() + 1) {
    throw std::out_of_range("RunReport::dense: no step polynomials stored");
  }
  const double t0 = t.front();
  const double h = steps.front().h;
  if (time < t0 || time > t.back()) {
    throw std::out_of_range("RunReport::dense: time outside the integrated span");
  }
  auto n = static_cast<std::size_t>(std::ceil((time - t0) / h));
  n = std::clamp<std::size_t>(n, 1, steps.size());
  const double c = std::clamp((time - t[n - 1]) / h, 0.0, 1.0);
  return steps[n - 1].eval(c);
}

RunReport integrate(const OdeProblem& problem, const Method& method, double t0,
                    double T, int N, const SolverSettings& settings) {
  settings.validate();
  if (N < 1) {
    throw std::invalid_argument("integrate: need at least one step");
  }
  if (!(T > t0)) {
    throw std::invalid_argument("integrate: need T > t0");
  }
  if (problem.initial_value.size() != problem.dim) {
    throw std::invalid_argument("integrate: initial value has wrong dimension");
  }
  const double h = (T - t0) / N;
  RunReport report;
  report.t.reserve(N + 1);
  report.y.reserve(N + 1);
  report.steps.reserve(N);
  report.iterations.reserve(N + 1);
  report.t.push_back(t0);
  report.y.push_back(problem.initial_value);
  report.iterations.push_back(0);

  for (int n = 1; n <= N; ++n) {
    const Matrix* guess = nullptr;
    if (settings.initial_guess == InitialGuess::carry_over && !report.steps.empty()) {
      guess = &report.steps.back().gamma;
    }
    StepResult result;
    try {
      result = step(problem, method, report.y.back(), h, settings, guess);
    } catch (const std::exception& e) {
      throw IntegrationError("step " + std::to_string(n) + ": " + e.what(),
                             static_cast<std::size_t>(n));
    }
    report.t.push_back(t0 + n * h);
    report.y.push_back(std::move(result.y));
    report.steps.push_back(std::move(result.polynomial));
    report.iterations.push_back(result.iterations);
  }
  return report;
}

}  // namespace hbvm
