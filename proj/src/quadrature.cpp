#include "hbvm/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hbvm/legendre.hpp"

namespace hbvm {

namespace {

constexpr double kExactnessThreshold = 1e-12;
constexpr double kMaxMomentCondition = 1e12;
constexpr int kMaxNewtonIterations = 100;

// Classical Legendre L_k(t) on [-1,1] and its derivative.
void legendre_with_derivative(int k, double t, double& value, double& slope) {
  double prev = 1.0;
  double cur = t;
  if (k == 0) {
    value = 1.0;
    slope = 0.0;
    return;
  }
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0) * t * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  value = cur;
  slope = k * (t * cur - prev) / (t * t - 1.0);
}

}  // namespace

QuadratureRule gauss_rule(int k) {
  if (k < 1) {
    throw std::invalid_argument("gauss_rule: need at least one node");
  }
  QuadratureRule rule;
  rule.nodes.resize(k);
  rule.weights.resize(k);
  rule.order = 2 * k;

  // Newton on L_k for the roots in (0,1) of [-1,1], then mirror. Root i of
  // L_k lies close to cos(pi (i + 3/4) / (k + 1/2)).
  const int half = (k + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double value = 0.0;
    double slope = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      legendre_with_derivative(k, t, value, slope);
      const double dt = value / slope;
      t -= dt;
      if (std::abs(dt) <= 2e-16) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      legendre_with_derivative(k, t, value, slope);
      if (std::abs(value) > 1e-15 * std::max(1.0, std::abs(slope))) {
        throw std::runtime_error("gauss_rule: Newton iteration did not converge for k = " +
                                 std::to_string(k));
      }
    }
    legendre_with_derivative(k, t, value, slope);
    const double w = 1.0 / ((1.0 - t * t) * slope * slope);  // (2/(..)) / 2
    // t > 0 maps to the upper node on [0,1].
    const double upper = 0.5 * (1.0 + t);
    const double lower = 0.5 * (1.0 - t);
    rule.nodes[k - 1 - i] = upper;
    rule.nodes[i] = lower;
    rule.weights[k - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (k % 2 == 1) {
    rule.nodes[k / 2] = 0.5;
  }
  return rule;
}

QuadratureRule interpolatory_rule(std::span<const double> nodes) {
  const int k = static_cast<int>(nodes.size());
  if (k < 1) {
    throw std::invalid_argument("interpolatory_rule: need at least one node");
  }
  for (int i = 0; i < k; ++i) {
    if (!(nodes[i] > 0.0 && nodes[i] < 1.0)) {
      throw std::domain_error("interpolatory_rule: node " + std::to_string(nodes[i]) +
                              " outside (0,1)");
    }
    for (int l = 0; l < i; ++l) {
      if (nodes[i] == nodes[l]) {
        throw std::invalid_argument("interpolatory_rule: repeated node");
      }
    }
  }

  const LegendreBasis basis(2 * k);
  // Columns hold P_0..P_{2k} at each node.
  Eigen::MatrixXd p(2 * k + 1, k);
  for (int i = 0; i < k; ++i) {
    basis.values(nodes[i], std::span<double>(p.col(i).data(), 2 * k + 1));
  }

  // sum_i b_i P_j(c_i) = delta_j0, j < k
  const Eigen::MatrixXd moments = p.topRows(k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(moments);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kMaxMomentCondition) {
    throw std::invalid_argument("interpolatory_rule: nodes too close, moment system is ill-conditioned");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  rhs(0) = 1.0;
  const Eigen::VectorXd b = moments.fullPivLu().solve(rhs);

  QuadratureRule rule;
  rule.nodes.assign(nodes.begin(), nodes.end());
  rule.weights.assign(b.data(), b.data() + k);
  rule.order = 2 * k;
  for (int j = k; j < 2 * k; ++j) {
    if (std::abs(p.row(j).dot(b)) > kExactnessThreshold) {
      rule.order = j;
      break;
    }
  }
  return rule;
}

int quadrature_error_order(const QuadratureRule& rule, int j) {
  if (j < 0 || j >= rule.stages()) {
    throw std::out_of_range("quadrature_error_order: index " + std::to_string(j) +
                            " outside [0, k)");
  }
  return rule.order - j;
}

}  // namespace hbvm
