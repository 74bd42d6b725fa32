#pragma once

#include <Eigen/Dense>

#include "hbvm/quadrature.hpp"

namespace hbvm {

/// The matrices linking the quadrature to the degree-s Legendre expansion:
///   P_s(i,j)  = P_j(c_i),            k x s
///   P_s1(i,j) = P_j(c_i),            k x (s+1)
///   I_s(i,j)  = int_0^{c_i} P_j,     k x s
///   omega     = diag(b)
///   Xhat      = tridiagonal (s+1) x s matrix of xi values, X_s its top block.
struct StructureMatrices {
  Eigen::MatrixXd P_s;
  Eigen::MatrixXd P_s1;
  Eigen::MatrixXd I_s;
  Eigen::VectorXd omega;
  Eigen::MatrixXd Xhat;
  Eigen::MatrixXd X_s;
};

StructureMatrices build_structure(const QuadratureRule& rule, int s);

/// Butcher tableau of HBVM(k,s): A = I_s P_s^T Omega.
struct ButcherTableau {
  int k = 0;
  int s = 0;
  int q = 0;
  Eigen::VectorXd c;
  Eigen::VectorXd b;
  Eigen::MatrixXd A;
};

ButcherTableau build_tableau(const QuadratureRule& rule, int s);

/// Max-norm residuals of the identities that hold when q >= 2s.
struct WTransformationReport {
  double orthonormality = 0.0;   // |P_s^T Omega P_s - I_s|
  double mixed_product = 0.0;    // |P_s^T Omega P_s1 - [I_s 0]|
  double x_recovery = 0.0;       // |P_s^T Omega A P_s - X_s|
  double integral_factor = 0.0;  // |I_s - P_s1 Xhat|
  double row_sum = 0.0;          // |A 1 - c|

  double max() const;
};

/// Evaluates the residuals for a tableau. Identity violations (for q < 2s)
/// show up as large residuals rather than errors.
WTransformationReport verify_w_transformation(const ButcherTableau& tab);

}  // namespace hbvm
