#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbvm/dde.hpp"
#include "hbvm/hamiltonian.hpp"
#include "hbvm/ode.hpp"

namespace hbvm {

/// An ODE test problem with its default time span and, when known, the
/// exact solution and energy.
struct OdeCase {
  std::string id;
  OdeProblem problem;
  double t0 = 0.0;
  double T = 1.0;
  std::function<Vector(double)> exact;
  std::optional<ConservativeStructure> structure;
  std::vector<std::string> component_names;
};

/// Ids: exp_decay (y' = -y), harmonic (H = (q^2 + p^2)/2), quartic
/// (problem1 without delay), pendulum (problem3 without delay).
OdeCase make_ode_case(std::string_view id);
std::vector<std::string> ode_case_ids();

struct DdeCase {
  std::string id;
  DdeProblem problem;
  int steps_per_delay = 10;
  int intervals = 1;
  std::function<Vector(double)> exact;
  std::function<double(const Vector&)> energy;
  std::vector<std::string> component_names;
};

/// Ids: dde_linear (y'(t) = -y(t-1), history 1) and problem1..problem3.
DdeCase make_dde_case(std::string_view id);
std::vector<std::string> dde_case_ids();

/// Exact solution of y'(t) = -y(t-1) with y = 1 on [-1, 0]:
///   y(t) = sum_{j=0}^{floor(t)+1} (-1)^j (t - j + 1)^j / j!.
double linear_delay_exact(double t);

/// q, p for one degree of freedom; q1.., p1.. otherwise.
std::vector<std::string> hamiltonian_component_names(int dof);

}  // namespace hbvm
