#include "hbvm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hbvm {

StructureKind ConservativeStructure::classify() const {
  const Matrix sym = S + S.transpose();
  if (sym.cwiseAbs().maxCoeff() <= 1e-15) {
    return StructureKind::skew;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().maxCoeff() <= 1e-15) {
    return StructureKind::dissipative;
  }
  return StructureKind::none;
}

OdeProblem as_ode(const ConservativeStructure& structure, Vector initial_value) {
  OdeProblem p;
  p.dim = static_cast<int>(structure.S.rows());
  const Matrix S = structure.S;
  auto gradient = structure.gradient;
  p.rhs = [S, gradient](const Vector& y) -> Vector { return S * gradient(y); };
  if (structure.hessian) {
    auto hessian = structure.hessian;
    p.jacobian = [S, hessian](const Vector& y) -> Matrix { return S * hessian(y); };
  }
  p.initial_value = std::move(initial_value);
  return p;
}

EnergySeries energy_series(const RunReport& report,
                           const std::function<double(const Vector&)>& energy) {
  EnergySeries out;
  out.values.reserve(report.y.size());
  for (const Vector& y : report.y) {
    out.values.push_back(energy(y));
  }
  if (out.values.size() > 1) {
    out.differences.reserve(out.values.size() - 1);
    for (std::size_t n = 1; n < out.values.size(); ++n) {
      out.differences.push_back(std::abs(out.values[n] - out.values[n - 1]));
    }
  }
  return out;
}

std::string ConservationVerdict::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::exact: os << "exact conservation"; break;
    case Kind::nonincreasing: os << "non-increasing energy"; break;
    case Kind::asymptotic: os << "asymptotic conservation"; break;
  }
  os << (satisfied ? ": satisfied" : ": violated");
  if (offending_step) {
    os << " at step " << *offending_step;
  }
  os << " (worst change " << worst_change;
  if (measured_order) {
    os << ", measured order " << *measured_order;
  }
  os << ")";
  return os.str();
}

namespace {

constexpr double kRoundOffFactor = 1e-13;
constexpr double pi = std::numbers::pi;

}  // namespace

ConservationVerdict conservation_check(const ConservativeStructure& structure,
                                       const Method& method, const RunReport& run,
                                       const SolverSettings& settings) {
  if (run.steps.empty()) {
    throw std::invalid_argument("conservation_check: run has no steps");
  }
  const StructureKind kind = structure.classify();
  if (kind == StructureKind::none) {
    throw std::invalid_argument("conservation_check: S is neither skew nor dissipative");
  }
  const EnergySeries series = energy_series(run, structure.energy);
  double scale = 1.0;
  for (double v : series.values) {
    scale = std::max(scale, std::abs(v));
  }
  const double bound = kRoundOffFactor * scale;

  auto per_step = [&](ConservationVerdict::Kind verdict_kind) {
    ConservationVerdict v;
    v.kind = verdict_kind;
    v.satisfied = true;
    for (std::size_t n = 1; n < series.values.size(); ++n) {
      const double change = series.values[n] - series.values[n - 1];
      const double measured = verdict_kind == ConservationVerdict::Kind::exact ? std::abs(change) : change;
      v.worst_change = std::max(v.worst_change, measured);
      if (measured > bound && v.satisfied) {
        v.satisfied = false;
        v.offending_step = n;
      }
    }
    return v;
  };

  const int q = method.quadrature_order();
  const int s = method.degree();
  const bool polynomial_ok =
      structure.polynomial_degree && *structure.polynomial_degree * s <= q && q >= 2 * s;
  const auto per_step_kind = kind == StructureKind::skew ? ConservationVerdict::Kind::exact
                                                         : ConservationVerdict::Kind::nonincreasing;
  if (polynomial_ok) {
    return per_step(per_step_kind);
  }

  // Energy changes already at round-off need no refinement study.
  ConservationVerdict v = per_step(per_step_kind);
  if (v.satisfied) {
    return v;
  }

  v = ConservationVerdict{};
  v.kind = ConservationVerdict::Kind::asymptotic;
  const OdeProblem problem = as_ode(structure, run.y.front());
  const double h0 = run.steps.front().h;
  std::vector<double> logs_h;
  std::vector<double> logs_e;
  for (int r = 0; r < 3; ++r) {
    const double h = h0 / std::pow(2.0, r);
    const StepResult result = step(problem, method, run.y.front(), h, settings);
    double change = structure.energy(result.y) - structure.energy(run.y.front());
    if (kind == StructureKind::dissipative) {
      change = std::max(change, 0.0);
    }
    change = std::abs(change);
    v.worst_change = std::max(v.worst_change, change);
    if (change > bound) {
      logs_h.push_back(std::log(h));
      logs_e.push_back(std::log(change));
    }
  }
  if (logs_h.size() < 2) {
    v.satisfied = true;
    return v;
  }
  const double n = static_cast<double>(logs_h.size());
  double mh = 0.0, me = 0.0;
  for (std::size_t i = 0; i < logs_h.size(); ++i) {
    mh += logs_h[i] / n;
    me += logs_e[i] / n;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < logs_h.size(); ++i) {
    num += (logs_h[i] - mh) * (logs_e[i] - me);
    den += (logs_h[i] - mh) * (logs_h[i] - mh);
  }
  v.measured_order = num / den;
  v.satisfied = *v.measured_order >= q + 1 - 0.5;
  return v;
}

Matrix canonical_symplectic(int dof) {
  Matrix J = Matrix::Zero(2 * dof, 2 * dof);
  J.topRightCorner(dof, dof).setIdentity();
  J.bottomLeftCorner(dof, dof) = -Matrix::Identity(dof, dof);
  return J;
}

double DelayHamiltonianProblem::energy(const Vector& y) const {
  return hamiltonian(y.head(dof), y.tail(dof));
}

Vector DelayHamiltonianProblem::gradient(const Vector& y) const {
  const Vector q = y.head(dof);
  const Vector p = y.tail(dof);
  Vector g(2 * dof);
  g.head(dof) = grad_q(q, p);
  g.tail(dof) = grad_p(q, p);
  return g;
}

DdeProblem DelayHamiltonianProblem::to_dde() const {
  DdeProblem d;
  d.dim = dim();
  d.delay = delay;
  d.t0 = 0.0;
  const int m = dof;
  const double a = alpha;
  auto gq = grad_q;
  auto gp = grad_p;
  d.rhs = [m, a, gq, gp](const Vector& now, const Vector& delayed) -> Vector {
    const Vector q = now.head(m), p = now.tail(m);
    const Vector qd = delayed.head(m), pd = delayed.tail(m);
    Vector f(2 * m);
    f.head(m) = gp(q, p) + a * gp(qd, pd);
    f.tail(m) = -(gq(q, p) + a * gq(qd, pd));
    return f;
  };
  auto ph = phi;
  auto ps = psi;
  d.history = [m, ph, ps](double t) -> Vector {
    Vector y(2 * m);
    y.head(m) = ph(t);
    y.tail(m) = ps(t);
    return y;
  };
  if (hessian) {
    const Matrix J = canonical_symplectic(m);
    auto hess = hessian;
    d.jacobian_now = [J, hess](const Vector& now, const Vector&) -> Matrix {
      return J * hess(now);
    };
    d.jacobian_delayed = [J, hess, a](const Vector&, const Vector& delayed) -> Matrix {
      return a * J * hess(delayed);
    };
  }
  return d;
}

ConservativeStructure DelayHamiltonianProblem::structure() const {
  ConservativeStructure c;
  c.S = canonical_symplectic(dof);
  auto self = *this;
  c.energy = [self](const Vector& y) { return self.energy(y); };
  c.gradient = [self](const Vector& y) { return self.gradient(y); };
  c.hessian = hessian;
  c.polynomial_degree = polynomial_degree;
  return c;
}

ProblemId parse_problem_id(std::string_view name) {
  if (name == "problem1") return ProblemId::problem1;
  if (name == "problem2") return ProblemId::problem2;
  if (name == "problem3") return ProblemId::problem3;
  throw std::invalid_argument("unknown problem id '" + std::string(name) + "'");
}

std::string to_string(ProblemId id) {
  switch (id) {
    case ProblemId::problem1: return "problem1";
    case ProblemId::problem2: return "problem2";
    case ProblemId::problem3: return "problem3";
  }
  throw std::invalid_argument("unknown problem id");
}

namespace {

Vector constant(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

DelayHamiltonianProblem quartic_problem() {
  DelayHamiltonianProblem p;
  p.name = "problem1";
  p.dof = 1;
  p.alpha = 0.1;
  p.delay = 1.0;
  p.hamiltonian = [](const Vector& q, const Vector& r) {
    return 0.25 * (std::pow(q(0), 4) + std::pow(r(0), 4));
  };
  p.grad_q = [](const Vector& q, const Vector&) -> Vector { return q.array().cube(); };
  p.grad_p = [](const Vector&, const Vector& r) -> Vector { return r.array().cube(); };
  p.hessian = [](const Vector& y) -> Matrix {
    return (3.0 * y.array().square()).matrix().asDiagonal();
  };
  p.polynomial_degree = 4;
  const Vector q0 = constant({std::sqrt(2.0)});
  const Vector p0 = constant({0.0});
  p.phi = [q0](double) { return q0; };
  p.psi = [p0](double) { return p0; };
  return p;
}

// grad of (c/2) / |x|^2 is -c x / |x|^4.
void check_away_from_origin(double norm2, const char* which) {
  if (norm2 < 1e-8) {
    throw std::domain_error(std::string("problem2: |") + which +
                            "|^2 below 1e-8, Hamiltonian is singular");
  }
}

Matrix inverse_square_hessian(const Vector& x, double c) {
  // hess of (c/2) |x|^-2 = c (4 x x^T / |x|^6 - I / |x|^4)
  const double r2 = x.squaredNorm();
  const int n = static_cast<int>(x.size());
  return c * (4.0 * x * x.transpose() / (r2 * r2 * r2) -
              Matrix::Identity(n, n) / (r2 * r2));
}

DelayHamiltonianProblem singular_quartic_problem() {
  DelayHamiltonianProblem p;
  p.name = "problem2";
  p.dof = 2;
  p.alpha = 0.05;
  p.delay = 1.0;
  p.hamiltonian = [](const Vector& q, const Vector& r) {
    const double q2 = q.squaredNorm();
    const double r2 = r.squaredNorm();
    check_away_from_origin(q2, "q");
    check_away_from_origin(r2, "p");
    return 0.25 * (q.array().pow(4).sum() + r.array().pow(4).sum()) +
           0.5 * pi * (1.0 / q2 + 2.0 / r2);
  };
  p.grad_q = [](const Vector& q, const Vector&) -> Vector {
    const double q2 = q.squaredNorm();
    check_away_from_origin(q2, "q");
    return q.array().cube().matrix() - pi * q / (q2 * q2);
  };
  p.grad_p = [](const Vector&, const Vector& r) -> Vector {
    const double r2 = r.squaredNorm();
    check_away_from_origin(r2, "p");
    return r.array().cube().matrix() - 2.0 * pi * r / (r2 * r2);
  };
  p.hessian = [](const Vector& y) -> Matrix {
    const Vector q = y.head(2), r = y.tail(2);
    check_away_from_origin(q.squaredNorm(), "q");
    check_away_from_origin(r.squaredNorm(), "p");
    Matrix hess = Matrix::Zero(4, 4);
    hess.topLeftCorner(2, 2) = (3.0 * q.array().square()).matrix().asDiagonal();
    hess.bottomRightCorner(2, 2) = (3.0 * r.array().square()).matrix().asDiagonal();
    hess.topLeftCorner(2, 2) += inverse_square_hessian(q, pi);
    hess.bottomRightCorner(2, 2) += inverse_square_hessian(r, 2.0 * pi);
    return hess;
  };
  const Vector q0 = constant({0.1, 1.0});
  const Vector p0 = constant({1.0, 0.2});
  p.phi = [q0](double) { return q0; };
  p.psi = [p0](double) { return p0; };
  return p;
}

DelayHamiltonianProblem pendulum_problem() {
  DelayHamiltonianProblem p;
  p.name = "problem3";
  p.dof = 1;
  p.alpha = -1e-5;
  p.delay = 1.0;
  p.hamiltonian = [](const Vector& q, const Vector& r) {
    return 0.5 * r(0) * r(0) - std::cos(q(0));
  };
  p.grad_q = [](const Vector& q, const Vector&) -> Vector { return q.array().sin(); };
  p.grad_p = [](const Vector&, const Vector& r) -> Vector { return r; };
  p.hessian = [](const Vector& y) -> Matrix {
    Matrix hess = Matrix::Zero(2, 2);
    hess(0, 0) = std::cos(y(0));
    hess(1, 1) = 1.0;
    return hess;
  };
  const Vector q0 = constant({0.0});
  const Vector p0 = constant({1.99999});
  p.phi = [q0](double) { return q0; };
  p.psi = [p0](double) { return p0; };
  return p;
}

}  // namespace

DelayHamiltonianProblem make_problem(ProblemId id) {
  switch (id) {
    case ProblemId::problem1: return quartic_problem();
    case ProblemId::problem2: return singular_quartic_problem();
    case ProblemId::problem3: return pendulum_problem();
  }
  throw std::invalid_argument("make_problem: unknown problem id");
}

}  // namespace hbvm
