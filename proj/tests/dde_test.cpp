#include "hbvm/dde.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hbvm/hamiltonian.hpp"
#include "hbvm/method.hpp"
#include "hbvm/problems.hpp"
#include "oracles.hpp"

namespace {

using hbvm::CommensurableMesh;
using hbvm::DdeProblem;
using hbvm::HistoryBuffer;
using hbvm::Matrix;
using hbvm::Method;
using hbvm::SolverSettings;
using hbvm::Vector;

DdeProblem linear_delay() {
  DdeProblem p;
  p.dim = 1;
  p.rhs = [](const Vector&, const Vector& w) -> Vector { return -w; };
  p.history = [](double) { return Vector::Ones(1); };
  return p;
}

double max_mesh_error(const hbvm::RunReport& run) {
  double err = 0.0;
  for (std::size_t n = 0; n < run.size(); ++n) {
    err = std::max(err, std::abs(run.y[n](0) - hbvm::testing::linear_delay_oracle(run.t[n])));
  }
  return err;
}

TEST(Mesh, StepSizeAndTimes) {
  const CommensurableMesh mesh(2.0, 8, 3, 1.0);
  EXPECT_EQ(mesh.step_size(), 0.25);
  EXPECT_EQ(mesh.steps(), 24);
  EXPECT_EQ(mesh.end_time(), 7.0);
  EXPECT_THROW(CommensurableMesh(0.0, 4, 1), std::invalid_argument);
  EXPECT_THROW(CommensurableMesh(1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(CommensurableMesh(1.0, 4, 0), std::invalid_argument);
}

TEST(History, FirstDelayedStepReadsPreHistory) {
  const CommensurableMesh mesh(1.0, 4, 2);
  HistoryBuffer buffer([](double t) { return Vector::Constant(1, t); }, mesh);
  const std::vector<double> nodes{0.2, 0.7};
  const Matrix w = buffer.delayed_values(1, nodes);
  EXPECT_NEAR(w(0, 0), 0.2 * 0.25 - 1.0, 1e-15);
  EXPECT_NEAR(w(0, 1), 0.7 * 0.25 - 1.0, 1e-15);
  EXPECT_THROW(buffer.delayed_values(5, nodes), std::logic_error);
}

TEST(History, LaterStepsReadStoredSegment) {
  const CommensurableMesh mesh(1.0, 4, 2);
  HistoryBuffer buffer([](double) { return Vector::Ones(1); }, mesh);
  Matrix gamma(1, 2);
  gamma << 2.0, 0.5;
  buffer.append(hbvm::StepPolynomial{Vector::Ones(1), 0.25, gamma});
  const std::vector<double> nodes{0.3, 0.9};
  const Matrix w = buffer.delayed_values(5, nodes);
  EXPECT_EQ(w(0, 0), buffer.segment(1).eval(0.3)(0));
  EXPECT_EQ(w(0, 1), buffer.segment(1).eval(0.9)(0));
  EXPECT_EQ(buffer.eval_global(-0.5)(0), 1.0);
  EXPECT_EQ(buffer.eval_global(0.25)(0), buffer.segment(1).right_value()(0));
  EXPECT_THROW(buffer.eval_global(0.3), std::out_of_range);
  EXPECT_THROW(buffer.segment(2), std::out_of_range);
}

TEST(DdeStep, ConstantSolution) {
  DdeProblem p;
  p.dim = 2;
  p.rhs = [](const Vector& y, const Vector& w) -> Vector { return y - w; };
  p.history = [](double) { return Vector::Constant(2, 3.0); };
  const auto out = hbvm::integrate_dde(p, Method::gauss(4, 2), CommensurableMesh(1.0, 5, 3),
                                       SolverSettings{});
  for (const auto& y : out.run.y) EXPECT_EQ(y, Vector::Constant(2, 3.0));
}

TEST(DdeStep, ReducesToOdeWhenDelayUnused) {
  const auto ode = hbvm::make_ode_case("pendulum");
  DdeProblem p;
  p.dim = 2;
  p.rhs = [&](const Vector& y, const Vector&) { return ode.problem.rhs(y); };
  const Vector y0 = ode.problem.initial_value;
  p.history = [y0](double) { return y0; };
  const Method method = Method::gauss(4, 2);
  const CommensurableMesh mesh(1.0, 10, 2);
  const auto dde = hbvm::integrate_dde(p, method, mesh, SolverSettings{});
  const auto run = hbvm::integrate(ode.problem, method, 0.0, 2.0, 20, SolverSettings{});
  ASSERT_EQ(dde.run.size(), run.size());
  for (std::size_t n = 0; n < run.size(); ++n) EXPECT_EQ(dde.run.y[n], run.y[n]) << n;
}

TEST(DdeStep, MethodOfStepsExactness) {
  // y is linear on [0,1] and quadratic on [1,2]
  const auto p = linear_delay();
  for (int s : {1, 2}) {
    const auto out = hbvm::integrate_dde(p, Method::gauss(2 * s, s),
                                         CommensurableMesh(1.0, 4, s), SolverSettings{});
    EXPECT_LE(max_mesh_error(out.run), 1e-15) << "s=" << s;
    for (double t = 0.0; t <= s; t += 0.03125) {
      EXPECT_NEAR(out.history.eval_global(t)(0), hbvm::testing::linear_delay_oracle(t), 1e-15);
    }
  }
}

TEST(DdeStep, FirstIntervalEndsAtZero) {
  const auto p = linear_delay();
  const auto out =
      hbvm::integrate_dde(p, Method::gauss(2, 2), CommensurableMesh(1.0, 5, 1), SolverSettings{});
  EXPECT_NEAR(out.run.y.back()(0), 0.0, 1e-15);
}

TEST(DdeStep, ApproximantIsContinuous) {
  const auto c = hbvm::make_dde_case("problem1");
  const CommensurableMesh mesh(1.0, 5, 4);
  const auto out = hbvm::integrate_dde(c.problem, Method::gauss(4, 2), mesh, SolverSettings{});
  for (int n = 1; n < mesh.steps(); ++n) {
    EXPECT_EQ(out.history.segment(n).right_value(), out.history.segment(n + 1).eval(0.0));
  }
}

TEST(DdeStep, FirstStepOfQuarticProblem) {
  // On the first step the delayed argument is the constant pre-history, so
  // the step is an ODE step that a fine RK4 run resolves. The gap is the
  // local truncation error of the method: about 7e-7 at h = 0.2, shrinking
  // at a fixed high order.
  const auto problem = hbvm::make_problem(hbvm::ProblemId::problem1);
  const auto dde = problem.to_dde();
  const Vector w = dde.history(-1.0);
  const auto field = [&](const Vector& y) { return dde.rhs(y, w); };
  std::vector<double> hs, errs;
  for (int nu : {5, 10, 20}) {
    const double h = 1.0 / nu;
    const Vector reference = hbvm::testing::rk4(field, dde.start_value(), h, 2000);
    HistoryBuffer buffer(dde.history, CommensurableMesh(1.0, nu, 1));
    const auto result = hbvm::dde_step(dde, Method::gauss(4, 2), buffer, 1, SolverSettings{});
    hs.push_back(h);
    errs.push_back((result.y - reference).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(errs[0], 1e-6);
  EXPECT_LE(errs[2], 1e-10);
  EXPECT_GE(hbvm::testing::fitted_slope(hs, errs), 5.0);
}

TEST(DdeStep, NewtonUsesSuppliedJacobian) {
  const auto c = hbvm::make_dde_case("problem2");
  SolverSettings newton;
  newton.scheme = hbvm::IterationScheme::simplified_newton;
  const CommensurableMesh mesh(1.0, 10, 2);
  const auto a = hbvm::integrate_dde(c.problem, Method::gauss(10, 2), mesh, SolverSettings{});
  const auto b = hbvm::integrate_dde(c.problem, Method::gauss(10, 2), mesh, newton);
  EXPECT_LE((a.run.y.back() - b.run.y.back()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(b.run.total_iterations(), a.run.total_iterations());
}

TEST(DdeStep, RequiresCompleteHistory) {
  const auto p = linear_delay();
  HistoryBuffer buffer(p.history, CommensurableMesh(1.0, 4, 1));
  EXPECT_THROW(hbvm::dde_step(p, Method::gauss(1, 1), buffer, 2, SolverSettings{}),
               std::logic_error);
}

TEST(DdeStep, MismatchedMeshRejected) {
  auto p = linear_delay();
  p.delay = 2.0;
  EXPECT_THROW(hbvm::integrate_dde(p, Method::gauss(1, 1), CommensurableMesh(1.0, 4, 1),
                                   SolverSettings{}),
               std::invalid_argument);
}

TEST(DdeOracle, ClosedFormAgreesWithMethodOfSteps) {
  for (double t = 0.0; t <= 6.0; t += 0.05) {
    EXPECT_NEAR(hbvm::linear_delay_exact(t), hbvm::testing::linear_delay_oracle(t), 1e-13)
        << "t=" << t;
  }
}

TEST(DdeOrder, SuperconvergenceOneStage) {
  const auto p = linear_delay();
  std::vector<double> hs, errs;
  for (int nu : {4, 8, 16, 32}) {
    const auto out = hbvm::integrate_dde(p, Method::gauss(2, 1), CommensurableMesh(1.0, nu, 3),
                                         SolverSettings{});
    hs.push_back(1.0 / nu);
    errs.push_back(max_mesh_error(out.run));
  }
  EXPECT_NEAR(hbvm::testing::fitted_slope(hs, errs), 2.0, 0.25);
}

TEST(DdeOrder, TwoStageMeshValuesExactWhileSolutionIsPolynomialOfLowDegree) {
  // On [j-1, j] the solution has degree j. With s = 2 the neglected Legendre
  // component of the field integrates to zero over each step, so mesh
  // values stay exact up to round-off through t = 4.
  const auto p = linear_delay();
  for (int nu : {4, 16, 64}) {
    const auto out = hbvm::integrate_dde(p, Method::gauss(4, 2), CommensurableMesh(1.0, nu, 4),
                                         SolverSettings{});
    EXPECT_LE(max_mesh_error(out.run), 1e-13) << "nu=" << nu;
  }
}

TEST(DdeOrder, SuperconvergenceTwoStage) {
  const auto p = linear_delay();
  for (int k : {2, 4}) {
    std::vector<double> hs, errs;
    for (int nu : {4, 8, 16, 32}) {
      const auto out = hbvm::integrate_dde(p, Method::gauss(k, 2), CommensurableMesh(1.0, nu, 5),
                                           SolverSettings{});
      hs.push_back(1.0 / nu);
      errs.push_back(max_mesh_error(out.run));
    }
    EXPECT_NEAR(hbvm::testing::fitted_slope(hs, errs), 4.0, 0.25) << "k=" << k;
  }
}

TEST(DdeOrder, UniformOrder) {
  const auto p = linear_delay();
  std::vector<double> hs, errs;
  for (int nu : {4, 8, 16, 32}) {
    const auto out = hbvm::integrate_dde(p, Method::gauss(4, 2), CommensurableMesh(1.0, nu, 3),
                                         SolverSettings{});
    double err = 0.0;
    for (double t = 0.0; t <= 3.0; t += 1.0 / 256) {
      err = std::max(err, std::abs(out.history.eval_global(t)(0) -
                                   hbvm::testing::linear_delay_oracle(t)));
    }
    hs.push_back(1.0 / nu);
    errs.push_back(err);
  }
  EXPECT_NEAR(hbvm::testing::fitted_slope(hs, errs), 3.0, 0.3);
}

}  // namespace
