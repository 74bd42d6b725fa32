#pragma once

#include <span>
#include <vector>

namespace hbvm {

/// A k-point quadrature on [0,1]. `order` is q: the rule integrates every
/// polynomial of degree < q exactly, with k <= q <= 2k.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  int stages() const { return static_cast<int>(nodes.size()); }
};

/// k-point Gauss-Legendre rule on [0,1]: nodes at the zeros of P_k, order 2k.
QuadratureRule gauss_rule(int k);

/// Interpolatory rule on arbitrary distinct nodes in (0,1). Weights are
/// obtained by moment matching in the Legendre basis; the order is found by
/// testing exactness on P_k, P_{k+1}, ... (threshold 1e-12), capped at 2k.
QuadratureRule interpolatory_rule(std::span<const double> nodes);

/// Asymptotic order q - j of the quadrature error on the j-th Fourier
/// coefficient, for 0 <= j < k.
int quadrature_error_order(const QuadratureRule& rule, int j);

}  // namespace hbvm
