#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbvm/dde.hpp"
#include "hbvm/ode.hpp"

namespace hbvm {

enum class StructureKind { skew, dissipative, none };

/// y' = S grad H(y).
struct ConservativeStructure {
  Matrix S;
  std::function<double(const Vector&)> energy;
  std::function<Vector(const Vector&)> gradient;
  /// Optional Hessian of H, used to supply the Jacobian S * hess H.
  std::function<Matrix(const Vector&)> hessian;
  /// Degree of H when it is a polynomial.
  std::optional<int> polynomial_degree;

  /// skew if |S + S^T| <= 1e-15, dissipative if the symmetric part has no
  /// eigenvalue above 1e-15, none otherwise.
  StructureKind classify() const;
};

OdeProblem as_ode(const ConservativeStructure& structure, Vector initial_value);

struct EnergySeries {
  std::vector<double> values;       // H(y_n), n = 0..N
  std::vector<double> differences;  // |H(y_n) - H(y_{n-1})|, n = 1..N
};

EnergySeries energy_series(const RunReport& report,
                           const std::function<double(const Vector&)>& energy);

struct ConservationVerdict {
  enum class Kind { exact, nonincreasing, asymptotic };
  Kind kind = Kind::exact;
  bool satisfied = false;
  /// First offending step (1-based) when a per-step bound fails.
  std::optional<std::size_t> offending_step;
  /// Largest per-step |dH| (exact) or largest increase (nonincreasing).
  double worst_change = 0.0;
  /// Fitted order of the one-step energy error; only for Kind::asymptotic.
  std::optional<double> measured_order;
  std::string describe() const;
};

/// Checks the energy behaviour of an ODE run against what the method
/// guarantees: per-step conservation (skew S) or non-increase (S <= 0) to
/// 1e-13 * max(1, |H|) when H is a polynomial of degree <= q/s; otherwise a
/// one-step refinement study h, h/2, h/4 from the run's initial value must
/// show |dH| = O(h^{q+1}) or stay at round-off.
ConservationVerdict conservation_check(const ConservativeStructure& structure,
                                       const Method& method, const RunReport& run,
                                       const SolverSettings& settings);

/// q' = H_p(now) + alpha H_p(delayed), p' = -[H_q(now) + alpha H_q(delayed)],
/// with (q, p) = (phi, psi) on [-delay, 0]. States are stored as y = (q, p).
struct DelayHamiltonianProblem {
  std::string name;
  int dof = 1;
  double alpha = 0.0;
  double delay = 1.0;
  std::function<double(const Vector& q, const Vector& p)> hamiltonian;
  std::function<Vector(const Vector& q, const Vector& p)> grad_q;
  std::function<Vector(const Vector& q, const Vector& p)> grad_p;
  /// Full 2m x 2m Hessian of H in the y = (q, p) ordering.
  std::function<Matrix(const Vector& y)> hessian;
  std::optional<int> polynomial_degree;
  std::function<Vector(double)> phi;
  std::function<Vector(double)> psi;

  int dim() const { return 2 * dof; }
  double energy(const Vector& y) const;
  Vector gradient(const Vector& y) const;  // (H_q, H_p)

  DdeProblem to_dde() const;
  /// Undelayed counterpart y' = J grad H with J = [[0, I], [-I, 0]].
  ConservativeStructure structure() const;
};

enum class ProblemId { problem1, problem2, problem3 };

ProblemId parse_problem_id(std::string_view name);
std::string to_string(ProblemId id);

/// The three delay Hamiltonian test problems.
DelayHamiltonianProblem make_problem(ProblemId id);

/// Symplectic matrix [[0, I], [-I, 0]] of size 2m.
Matrix canonical_symplectic(int dof);

}  // namespace hbvm
