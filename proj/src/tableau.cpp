#include "hbvm/tableau.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

#include "hbvm/legendre.hpp"

namespace hbvm {

StructureMatrices build_structure(const QuadratureRule& rule, int s) {
  const int k = rule.stages();
  if (s < 1 || s > k) {
    throw std::invalid_argument("build_structure: need 1 <= s <= k");
  }
  const LegendreBasis basis(s + 1);
  StructureMatrices m;
  m.P_s1.resize(k, s + 1);
  m.I_s.resize(k, s);
  m.omega = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), k);

  Eigen::VectorXd p(s + 1);
  Eigen::VectorXd integ(s);
  for (int i = 0; i < k; ++i) {
    basis.values(rule.nodes[i], std::span<double>(p.data(), s + 1));
    basis.integrals(rule.nodes[i], std::span<double>(integ.data(), s));
    m.P_s1.row(i) = p.transpose();
    m.I_s.row(i) = integ.transpose();
  }
  m.P_s = m.P_s1.leftCols(s);

  m.Xhat = Eigen::MatrixXd::Zero(s + 1, s);
  m.Xhat(0, 0) = xi(0);
  for (int j = 1; j <= s; ++j) {
    m.Xhat(j, j - 1) = xi(j);
    if (j < s) {
      m.Xhat(j - 1, j) = -xi(j);
    }
  }
  m.X_s = m.Xhat.topRows(s);
  return m;
}

ButcherTableau build_tableau(const QuadratureRule& rule, int s) {
  if (s > rule.stages()) {
    throw std::invalid_argument("build_tableau: s must not exceed k");
  }
  const StructureMatrices m = build_structure(rule, s);
  ButcherTableau tab;
  tab.k = rule.stages();
  tab.s = s;
  tab.q = rule.order;
  tab.c = Eigen::Map<const Eigen::VectorXd>(rule.nodes.data(), tab.k);
  tab.b = m.omega;
  tab.A = m.I_s * m.P_s.transpose() * m.omega.asDiagonal();
  return tab;
}

double WTransformationReport::max() const {
  return std::max({orthonormality, mixed_product, x_recovery, integral_factor, row_sum});
}

WTransformationReport verify_w_transformation(const ButcherTableau& tab) {
  QuadratureRule rule;
  rule.nodes.assign(tab.c.data(), tab.c.data() + tab.k);
  rule.weights.assign(tab.b.data(), tab.b.data() + tab.k);
  rule.order = tab.q;
  const StructureMatrices m = build_structure(rule, tab.s);
  const int s = tab.s;

  const Eigen::MatrixXd weighted = m.P_s.transpose() * m.omega.asDiagonal();
  Eigen::MatrixXd expected_mixed = Eigen::MatrixXd::Zero(s, s + 1);
  expected_mixed.leftCols(s).setIdentity();

  WTransformationReport r;
  r.orthonormality =
      (weighted * m.P_s - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff();
  r.mixed_product = (weighted * m.P_s1 - expected_mixed).cwiseAbs().maxCoeff();
  r.x_recovery = (weighted * tab.A * m.P_s - m.X_s).cwiseAbs().maxCoeff();
  r.integral_factor = (m.I_s - m.P_s1 * m.Xhat).cwiseAbs().maxCoeff();
  r.row_sum = (tab.A * Eigen::VectorXd::Ones(tab.k) - tab.c).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace hbvm
