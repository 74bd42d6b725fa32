#pragma once

#include <span>
#include <vector>

namespace hbvm {

/// Coefficient of the integral recurrence
///   int_0^c P_j = xi(j+1) P_{j+1}(c) - xi(j) P_{j-1}(c),   j >= 1,
/// with xi(0) = 1/2 and xi(j) = 1 / (2 sqrt(4j^2 - 1)) otherwise.
double xi(int j);

/// Shifted Legendre polynomials on [0,1], scaled to unit L2 norm and with
/// positive leading coefficient, so that int_0^1 P_i P_j = delta_ij.
///
/// Values are produced by the three-term recurrence; the coefficients are
/// computed once at construction and the object is immutable afterwards.
class LegendreBasis {
 public:
  explicit LegendreBasis(int max_degree);

  int max_degree() const { return max_degree_; }

  /// P_j(x). Throws std::out_of_range for j > max_degree and
  /// std::domain_error for x outside [0,1].
  double value(int j, double x) const;

  /// int_0^c P_j(x) dx. Needs P_{j+1}, so j must not exceed max_degree - 1.
  double integral(int j, double c) const;

  /// Writes P_0(x), ..., P_{out.size()-1}(x).
  void values(double x, std::span<double> out) const;

  /// Writes int_0^c P_j for j = 0, ..., out.size()-1.
  void integrals(double c, std::span<double> out) const;

 private:
  void check_argument(double x) const;
  void check_degree(int j) const;

  int max_degree_;
  // P_{j+1}(x) = alpha_[j] (2x - 1) P_j(x) - beta_[j] P_{j-1}(x)
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

}  // namespace hbvm
