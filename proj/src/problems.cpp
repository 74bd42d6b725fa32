#include "hbvm/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace hbvm {

std::vector<std::string> hamiltonian_component_names(int dof) {
  std::vector<std::string> names;
  for (const char* prefix : {"q", "p"}) {
    for (int i = 1; i <= dof; ++i) {
      names.push_back(dof == 1 ? std::string(prefix) : prefix + std::to_string(i));
    }
  }
  return names;
}

double linear_delay_exact(double t) {
  if (t <= 0.0) {
    return 1.0;
  }
  const int last = static_cast<int>(std::floor(t)) + 1;
  double sum = 0.0;
  double factorial = 1.0;
  for (int j = 0; j <= last; ++j) {
    if (j > 0) factorial *= j;
    const double base = t - j + 1.0;
    if (base <= 0.0) break;
    sum += ((j % 2 == 0) ? 1.0 : -1.0) * std::pow(base, j) / factorial;
  }
  return sum;
}

std::vector<std::string> ode_case_ids() { return {"exp_decay", "harmonic", "quartic", "pendulum"}; }

std::vector<std::string> dde_case_ids() {
  return {"dde_linear", "problem1", "problem2", "problem3"};
}

namespace {

OdeCase hamiltonian_ode_case(std::string id, const DelayHamiltonianProblem& source, double T) {
  OdeCase c;
  c.id = std::move(id);
  c.structure = source.structure();
  c.problem = as_ode(*c.structure, source.to_dde().history(0.0));
  c.T = T;
  c.component_names = hamiltonian_component_names(source.dof);
  return c;
}

}  // namespace

OdeCase make_ode_case(std::string_view id) {
  if (id == "exp_decay") {
    OdeCase c;
    c.id = "exp_decay";
    c.problem.dim = 1;
    c.problem.rhs = [](const Vector& y) -> Vector { return -y; };
    c.problem.jacobian = [](const Vector&) -> Matrix { return -Matrix::Identity(1, 1); };
    c.problem.initial_value = Vector::Ones(1);
    c.exact = [](double t) -> Vector { return Vector::Constant(1, std::exp(-t)); };
    c.component_names = {"y"};
    return c;
  }
  if (id == "harmonic") {
    OdeCase c;
    c.id = "harmonic";
    ConservativeStructure st;
    st.S = canonical_symplectic(1);
    st.energy = [](const Vector& y) { return 0.5 * y.squaredNorm(); };
    st.gradient = [](const Vector& y) -> Vector { return y; };
    st.hessian = [](const Vector&) -> Matrix { return Matrix::Identity(2, 2); };
    st.polynomial_degree = 2;
    Vector y0(2);
    y0 << 1.0, 0.0;
    c.problem = as_ode(st, y0);
    c.structure = st;
    c.T = 10.0;
    c.exact = [](double t) -> Vector {
      Vector y(2);
      y << std::cos(t), -std::sin(t);
      return y;
    };
    c.component_names = {"q", "p"};
    return c;
  }
  if (id == "quartic") {
    return hamiltonian_ode_case("quartic", make_problem(ProblemId::problem1), 20.0);
  }
  if (id == "pendulum") {
    return hamiltonian_ode_case("pendulum", make_problem(ProblemId::problem3), 20.0);
  }
  throw std::invalid_argument("unknown ODE problem '" + std::string(id) + "'");
}

DdeCase make_dde_case(std::string_view id) {
  if (id == "dde_linear") {
    DdeCase c;
    c.id = "dde_linear";
    c.problem.dim = 1;
    c.problem.delay = 1.0;
    c.problem.rhs = [](const Vector&, const Vector& w) -> Vector { return -w; };
    c.problem.jacobian_now = [](const Vector&, const Vector&) -> Matrix {
      return Matrix::Zero(1, 1);
    };
    c.problem.history = [](double) -> Vector { return Vector::Ones(1); };
    c.steps_per_delay = 8;
    c.intervals = 3;
    c.exact = [](double t) -> Vector { return Vector::Constant(1, linear_delay_exact(t)); };
    c.component_names = {"y"};
    return c;
  }
  const ProblemId pid = parse_problem_id(id);
  const DelayHamiltonianProblem source = make_problem(pid);
  DdeCase c;
  c.id = std::string(id);
  c.problem = source.to_dde();
  c.energy = [source](const Vector& y) { return source.energy(y); };
  c.component_names = hamiltonian_component_names(source.dof);
  switch (pid) {
    case ProblemId::problem1: c.steps_per_delay = 5; c.intervals = 2000; break;
    case ProblemId::problem2: c.steps_per_delay = 10; c.intervals = 1000; break;
    case ProblemId::problem3: c.steps_per_delay = 2; c.intervals = 500; break;
  }
  return c;
}

}  // namespace hbvm
