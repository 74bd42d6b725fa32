#include "hbvm/convergence.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <memory>
#include <future>
#include <stdexcept>

namespace hbvm {

namespace {

constexpr int kUniformSamples = 16;

std::vector<double> slopes(const std::vector<ConvergenceRow>& rows, double noise_floor,
                           double ConvergenceRow::*error) {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double e0 = rows[i - 1].*error;
    const double e1 = rows[i].*error;
    if (e0 > noise_floor && e1 > noise_floor) {
      out.push_back(std::log(e0 / e1) / std::log(rows[i - 1].h / rows[i].h));
    }
  }
  return out;
}

bool within(const std::vector<double>& values, double target, double tolerance) {
  if (values.empty()) return false;
  for (double v : values) {
    if (std::abs(v - target) > tolerance) return false;
  }
  return true;
}

void check_ladder(const std::vector<int>& ladder) {
  if (ladder.size() < 2) {
    throw std::invalid_argument("run_convergence: ladder needs at least two entries");
  }
  const double ratio = static_cast<double>(ladder[1]) / ladder[0];
  if (!(ratio > 1.0)) {
    throw std::invalid_argument("run_convergence: ladder must be increasing");
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] != ladder[i - 1] * static_cast<int>(ratio) ||
        ladder[i - 1] * ratio != ladder[i]) {
      throw std::invalid_argument("run_convergence: ladder must have a fixed integer ratio");
    }
  }
}

using Reference = std::function<Vector(double)>;

// Errors of one run against a reference; `dense` evaluates the numerical
// piecewise polynomial on step n (1-based) at c.
ConvergenceRow measure(const RunReport& run, const Reference& reference) {
  ConvergenceRow row;
  row.h = run.t[1] - run.t[0];
  for (std::size_t n = 0; n < run.size(); ++n) {
    row.mesh_error = std::max(row.mesh_error, (run.y[n] - reference(run.t[n])).cwiseAbs().maxCoeff());
  }
  for (std::size_t n = 1; n < run.size(); ++n) {
    const StepPolynomial& poly = run.steps[n - 1];
    for (int j = 1; j < kUniformSamples; ++j) {
      const double c = static_cast<double>(j) / kUniformSamples;
      const double t = run.t[n - 1] + c * poly.h;
      row.uniform_error =
          std::max(row.uniform_error, (poly.eval(c) - reference(t)).cwiseAbs().maxCoeff());
    }
  }
  row.uniform_error = std::max(row.uniform_error, row.mesh_error);
  return row;
}

void fill_slopes(ConvergenceTable& table) {
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    auto& prev = table.rows[i - 1];
    auto& cur = table.rows[i];
    const double ratio = std::log(prev.h / cur.h);
    if (prev.mesh_error > 0.0 && cur.mesh_error > 0.0) {
      cur.mesh_slope = std::log(prev.mesh_error / cur.mesh_error) / ratio;
    }
    if (prev.uniform_error > 0.0 && cur.uniform_error > 0.0) {
      cur.uniform_slope = std::log(prev.uniform_error / cur.uniform_error) / ratio;
    }
  }
}

template <class Runner>
std::vector<ConvergenceTable> run_study(const std::vector<Method>& methods,
                                        const std::vector<int>& ladder,
                                        const Reference& analytic, ReferenceKind reference,
                                        Runner&& runner) {
  check_ladder(ladder);
  if (reference == ReferenceKind::analytic && !analytic) {
    throw std::invalid_argument("run_convergence: problem has no analytic solution");
  }
  std::vector<ConvergenceTable> tables;
  for (const Method& method : methods) {
    Reference ref = analytic;
    std::shared_ptr<RunReport> fine;
    if (reference == ReferenceKind::fine_step) {
      try {
        fine = std::make_shared<RunReport>(runner(method, ladder.back() * 100));
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("reference generation failed: ") + e.what());
      }
      ref = [fine](double t) { return fine->dense(t); };
    }
    std::vector<std::future<ConvergenceRow>> rows;
    for (int count : ladder) {
      rows.push_back(std::async(std::launch::async, [&, count] {
        return measure(runner(method, count), ref);
      }));
    }
    ConvergenceTable table;
    table.method = method.label();
    table.k = method.stages();
    table.s = method.degree();
    for (auto& f : rows) table.rows.push_back(f.get());
    fill_slopes(table);
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace

std::vector<double> ConvergenceTable::mesh_slopes(double noise_floor) const {
  return slopes(rows, noise_floor, &ConvergenceRow::mesh_error);
}

std::vector<double> ConvergenceTable::uniform_slopes(double noise_floor) const {
  return slopes(rows, noise_floor, &ConvergenceRow::uniform_error);
}

bool ConvergenceTable::mesh_order_matches(double tolerance, double noise_floor) const {
  return within(mesh_slopes(noise_floor), 2.0 * s, tolerance);
}

bool ConvergenceTable::uniform_order_matches(double tolerance, double noise_floor) const {
  return within(uniform_slopes(noise_floor), s + 1.0, tolerance);
}

std::vector<ConvergenceTable> run_convergence(const OdeCase& problem,
                                              const std::vector<Method>& methods,
                                              const std::vector<int>& ladder,
                                              const SolverSettings& settings,
                                              ReferenceKind reference) {
  return run_study(methods, ladder, problem.exact, reference,
                   [&](const Method& method, int count) {
                     return integrate(problem.problem, method, problem.t0, problem.T, count,
                                      settings);
                   });
}

std::vector<ConvergenceTable> run_convergence(const DdeCase& problem,
                                              const std::vector<Method>& methods,
                                              const std::vector<int>& ladder,
                                              const SolverSettings& settings,
                                              ReferenceKind reference) {
  return run_study(methods, ladder, problem.exact, reference,
                   [&](const Method& method, int count) {
                     const CommensurableMesh mesh(problem.problem.delay, count,
                                                  problem.intervals, problem.problem.t0);
                     return integrate_dde(problem.problem, method, mesh, settings).run;
                   });
}

std::vector<int> geometric_ladder(int first, int last, int ratio) {
  if (first < 1 || last < first || ratio < 2) {
    throw std::invalid_argument("geometric_ladder: need 1 <= first <= last and ratio >= 2");
  }
  std::vector<int> out;
  for (long v = first; v <= last; v *= ratio) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace hbvm
