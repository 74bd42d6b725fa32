#pragma once

#include <Eigen/Dense>
#include <string>

#include "hbvm/quadrature.hpp"
#include "hbvm/tableau.hpp"

namespace hbvm {

/// HBVM(k,s): a degree-s Legendre expansion of the vector field whose
/// Fourier coefficients are approximated with a k-point quadrature.
///
/// Holds the matrices the step solver needs, precomputed once:
/// projection() = P_s^T Omega (s x k), integrals() = I_s (k x s), and their
/// product coupling() = P_s^T Omega I_s (s x s), which equals X_s when q >= 2s.
class Method {
 public:
  Method(QuadratureRule rule, int s);

  /// HBVM(k,s) on Gauss-Legendre nodes.
  static Method gauss(int k, int s);

  int stages() const { return rule_.stages(); }
  int degree() const { return s_; }
  int quadrature_order() const { return rule_.order; }
  const QuadratureRule& rule() const { return rule_; }

  const Eigen::MatrixXd& projection() const { return projection_; }
  const Eigen::MatrixXd& integrals() const { return integrals_; }
  const Eigen::MatrixXd& coupling() const { return coupling_; }

  ButcherTableau tableau() const { return build_tableau(rule_, s_); }

  /// "HBVM(k,s)"
  std::string label() const;

 private:
  QuadratureRule rule_;
  int s_;
  Eigen::MatrixXd projection_;
  Eigen::MatrixXd integrals_;
  Eigen::MatrixXd coupling_;
};

}  // namespace hbvm
