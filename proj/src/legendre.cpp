#include "hbvm/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hbvm {

double xi(int j) {
  if (j < 0) {
    throw std::out_of_range("xi: negative index");
  }
  if (j == 0) {
    return 0.5;
  }
  const double jj = static_cast<double>(j);
  return 1.0 / (2.0 * std::sqrt(4.0 * jj * jj - 1.0));
}

LegendreBasis::LegendreBasis(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) {
    throw std::invalid_argument("LegendreBasis: negative maximum degree");
  }
  // Orthonormal P_j = sqrt(2j+1) L_j(2x-1), with the classical recurrence
  // (j+1) L_{j+1}(t) = (2j+1) t L_j(t) - j L_{j-1}(t).
  alpha_.resize(max_degree + 1);
  beta_.resize(max_degree + 1);
  for (int j = 0; j <= max_degree; ++j) {
    const double jj = j;
    const double up = std::sqrt(2.0 * jj + 3.0);
    alpha_[j] = up * std::sqrt(2.0 * jj + 1.0) / (jj + 1.0);
    beta_[j] = j == 0 ? 0.0 : up * jj / ((jj + 1.0) * std::sqrt(2.0 * jj - 1.0));
  }
}

void LegendreBasis::check_argument(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("LegendreBasis: argument " + std::to_string(x) +
                            " outside [0,1]");
  }
}

void LegendreBasis::check_degree(int j) const {
  if (j < 0 || j > max_degree_) {
    throw std::out_of_range("LegendreBasis: degree " + std::to_string(j) +
                            " exceeds capacity " + std::to_string(max_degree_));
  }
}

double LegendreBasis::value(int j, double x) const {
  check_degree(j);
  check_argument(x);
  const double t = 2.0 * x - 1.0;
  double prev = 0.0;
  double cur = 1.0;
  for (int i = 0; i < j; ++i) {
    const double next = alpha_[i] * t * cur - beta_[i] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void LegendreBasis::values(double x, std::span<double> out) const {
  if (out.empty()) {
    return;
  }
  check_degree(static_cast<int>(out.size()) - 1);
  check_argument(x);
  const double t = 2.0 * x - 1.0;
  out[0] = 1.0;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    out[i + 1] = alpha_[i] * t * out[i] - beta_[i] * prev;
    prev = out[i];
  }
}

double LegendreBasis::integral(int j, double c) const {
  if (j < 0 || j + 1 > max_degree_) {
    throw std::out_of_range("LegendreBasis: integral of degree " +
                            std::to_string(j) + " needs capacity " +
                            std::to_string(j + 1));
  }
  check_argument(c);
  if (j == 0) {
    return xi(1) * value(1, c) + xi(0);
  }
  return xi(j + 1) * value(j + 1, c) - xi(j) * value(j - 1, c);
}

void LegendreBasis::integrals(double c, std::span<double> out) const {
  if (out.empty()) {
    return;
  }
  const int n = static_cast<int>(out.size());
  if (n > max_degree_) {
    throw std::out_of_range("LegendreBasis: integrals up to degree " +
                            std::to_string(n - 1) + " need capacity " +
                            std::to_string(n));
  }
  std::vector<double> p(n + 1);
  values(c, p);
  out[0] = xi(1) * p[1] + xi(0) * p[0];
  for (int j = 1; j < n; ++j) {
    out[j] = xi(j + 1) * p[j + 1] - xi(j) * p[j - 1];
  }
}

}  // namespace hbvm
