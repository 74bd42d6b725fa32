#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "hbvm/ode.hpp"

namespace hbvm::detail {

inline void require_finite(const Matrix& values, int iteration) {
  if (!values.allFinite()) {
    throw SolverError("non-finite value in vector field evaluation", iteration);
  }
}

// Shared iteration for the reduced system
//   gamma = Phi(gamma),  Phi(gamma)_j = sum_i proj(j,i) f_i(y + h sum_l I(i,l) gamma_l).
// `field(i, y)` evaluates the vector field at stage i (the delayed argument,
// if any, is bound inside it). `jacobian()` returns the m x m matrix used by
// simplified Newton and is only called for that scheme.
template <class Field, class Jacobian>
GammaSolution iterate_gamma(const Method& method, const Vector& y_prev, double h,
                            const SolverSettings& settings, Field&& field,
                            Jacobian&& jacobian, const Matrix* guess) {
  settings.validate();
  if (!(h > 0.0)) {
    throw std::invalid_argument("solve_gamma: timestep must be positive");
  }
  const int m = static_cast<int>(y_prev.size());
  const int s = method.degree();
  const int k = method.stages();
  const Matrix& proj = method.projection();
  const Matrix& integ = method.integrals();

  GammaSolution out;
  out.gamma = Matrix::Zero(m, s);
  if (guess != nullptr && guess->rows() == m && guess->cols() == s) {
    out.gamma = *guess;
  }

  Matrix stages(m, k);
  Matrix values(m, k);
  auto phi = [&](const Matrix& gamma, int iteration) {
    stages = (h * gamma * integ.transpose()).colwise() + y_prev;
    for (int i = 0; i < k; ++i) {
      values.col(i) = field(i, Vector(stages.col(i)));
    }
    require_finite(values, iteration);
    return Matrix(values * proj.transpose());
  };

  Eigen::PartialPivLU<Matrix> newton;
  if (settings.scheme == IterationScheme::simplified_newton) {
    const Matrix jac = jacobian();
    const Matrix lhs = Matrix::Identity(m * s, m * s) -
                       h * Matrix(Eigen::kroneckerProduct(method.coupling(), jac));
    newton.compute(lhs);
  }

  const double tol = settings.tolerance(y_prev);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= settings.max_iterations; ++it) {
    Matrix update;
    if (settings.scheme == IterationScheme::fixed_point) {
      update = phi(out.gamma, it) - out.gamma;
    } else {
      const Matrix residual = out.gamma - phi(out.gamma, it);
      const Vector delta = newton.solve(residual.reshaped());
      update = -delta.reshaped(m, s);
    }
    if (!update.allFinite()) {
      throw SolverError("non-finite iterate", it);
    }
    out.gamma += update;
    out.iterations = it;
    const double size = update.cwiseAbs().maxCoeff();
    if (size <= tol) {
      return out;
    }
    // Round-off floor: the update stopped shrinking at a few ulps of gamma.
    const double floor =
        64.0 * eps * std::max(1.0 + y_prev.cwiseAbs().maxCoeff(), out.gamma.cwiseAbs().maxCoeff());
    if (size <= floor && size >= previous) {
      return out;
    }
    previous = size;
  }
  throw SolverError("gamma iteration did not converge in " +
                        std::to_string(settings.max_iterations) + " iterations",
                    settings.max_iterations);
}

}  // namespace hbvm::detail
