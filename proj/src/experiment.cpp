#include "hbvm/experiment.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "hbvm/convergence.hpp"
#include "hbvm/csv.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/reproduce.hpp"

namespace hbvm {

namespace {

// Writes through `body` to config.out when given, otherwise to `fallback`.
template <class Body>
void with_output(const ExperimentConfig& config, std::ostream& fallback, Body&& body) {
  if (config.out.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + config.out + "' for writing");
  body(file);
  file.flush();
  if (!file) throw std::runtime_error("write to '" + config.out + "' failed");
}

int steps_from_h(double span, double h, const char* what) {
  const double count = span / h;
  const double rounded = std::round(count);
  if (rounded < 1.0 || std::abs(count - rounded) > 1e-9 * rounded) {
    throw ConfigError(std::string("h does not divide the ") + what);
  }
  return static_cast<int>(rounded);
}

void run_tableau(const ExperimentConfig& config, std::ostream& out) {
  const ButcherTableau tab = config.method().tableau();
  with_output(config, out, [&](std::ostream& os) {
    os << "# HBVM(" << tab.k << "," << tab.s << ") q=" << tab.q
       << " float_format=scientific significant_digits=" << config.precision << '\n';
    os << "i,c,b";
    for (int l = 1; l <= tab.k; ++l) os << ",a" << l;
    os << '\n';
    for (int i = 0; i < tab.k; ++i) {
      os << i + 1 << ',' << format_real(tab.c(i), config.precision) << ','
         << format_real(tab.b(i), config.precision);
      for (int l = 0; l < tab.k; ++l) os << ',' << format_real(tab.A(i, l), config.precision);
      os << '\n';
    }
  });
}

void run_ode(const ExperimentConfig& config, std::ostream& out) {
  const OdeCase c = make_ode_case(config.problem.empty() ? "exp_decay" : config.problem);
  const double t0 = config.t0;
  const double T = config.T.value_or(c.T + (t0 - c.t0));
  if (!(T > t0)) throw ConfigError("need T > t0");
  int N = config.steps.value_or(0);
  if (config.h) {
    const int from_h = steps_from_h(T - t0, *config.h, "time span");
    if (config.steps && *config.steps != from_h) throw ConfigError("steps and h disagree");
    N = from_h;
  }
  if (N < 1) N = 100;
  const RunReport run =
      integrate(c.problem, config.method(), t0, T, N, config.solver_settings());
  CsvOptions options;
  options.precision = config.precision;
  options.component_names = c.component_names;
  with_output(config, out, [&](std::ostream& os) { write_run_csv(os, run, options); });
}

void run_dde(const ExperimentConfig& config, std::ostream& out) {
  const DdeCase c = make_dde_case(config.problem.empty() ? "dde_linear" : config.problem);
  int nu = config.nu.value_or(c.steps_per_delay);
  if (config.h) {
    const int from_h = steps_from_h(c.problem.delay, *config.h, "delay");
    if (config.nu && *config.nu != from_h) throw ConfigError("nu and h disagree");
    nu = from_h;
  }
  int K = config.K.value_or(c.intervals);
  if (config.T) {
    K = steps_from_h(*config.T - c.problem.t0, c.problem.delay, "span");
  }
  if (config.steps) {
    if (*config.steps % nu != 0) throw ConfigError("steps must be a multiple of nu");
    K = *config.steps / nu;
  }
  const CommensurableMesh mesh(c.problem.delay, nu, K, c.problem.t0);
  const DdeRunReport result =
      integrate_dde(c.problem, config.method(), mesh, config.solver_settings());
  CsvOptions options;
  options.precision = config.precision;
  options.component_names = c.component_names;
  options.energy = c.energy;
  with_output(config, out, [&](std::ostream& os) { write_run_csv(os, result.run, options); });
}

void print_tables(std::ostream& os, const std::vector<ConvergenceTable>& tables, int precision) {
  auto opt = [&](const std::optional<double>& v) {
    return v ? format_real(*v, 6) : std::string();
  };
  os << "# float_format=scientific significant_digits=" << precision << '\n';
  os << "k,s,h,mesh_error,uniform_error,mesh_slope,uniform_slope\n";
  for (const auto& table : tables) {
    for (const auto& row : table.rows) {
      os << table.k << ',' << table.s << ',' << format_real(row.h, precision) << ','
         << format_real(row.mesh_error, precision) << ','
         << format_real(row.uniform_error, precision) << ',' << opt(row.mesh_slope) << ','
         << opt(row.uniform_slope) << '\n';
    }
  }
}

void run_convergence_study(const ExperimentConfig& config, std::ostream& out,
                           std::ostream& err) {
  const std::string id = config.problem.empty() ? "exp_decay" : config.problem;
  const ReferenceKind reference =
      config.reference == "fine" ? ReferenceKind::fine_step : ReferenceKind::analytic;
  const std::vector<Method> methods{config.method()};
  std::vector<ConvergenceTable> tables;
  const bool is_dde = id == "dde_linear" || id.rfind("problem", 0) == 0;
  const int first = is_dde ? config.nu.value_or(4) : config.steps.value_or(8);
  std::vector<int> ladder;
  for (int i = 0, v = first; i < config.levels; ++i, v *= 2) ladder.push_back(v);

  if (is_dde) {
    DdeCase c = make_dde_case(id);
    if (config.K) c.intervals = *config.K;
    tables = run_convergence(c, methods, ladder, config.solver_settings(), reference);
  } else {
    OdeCase c = make_ode_case(id);
    c.t0 = config.t0;
    if (config.T) c.T = *config.T;
    tables = run_convergence(c, methods, ladder, config.solver_settings(), reference);
  }
  with_output(config, out, [&](std::ostream& os) { print_tables(os, tables, config.precision); });
  for (const auto& table : tables) {
    err << table.method << ": mesh order " << 2 * table.s << " "
        << (table.mesh_order_matches(0.25, kDefaultNoiseFloor) ? "confirmed" : "not confirmed")
        << ", uniform order " << table.s + 1 << " "
        << (table.uniform_order_matches(0.25, kDefaultNoiseFloor) ? "confirmed" : "not confirmed")
        << '\n';
  }
}

void run_reproduce(const ExperimentConfig& config, std::ostream& out) {
  const ProblemId id = parse_problem_id(config.problem.empty() ? "problem1" : config.problem);
  const Reproduction r = reproduce(published_setup(id), config.solver_settings());
  const auto paths = write_reproduction(r, config.out.empty() ? "." : config.out, config.precision);
  out << to_string(id) << '\n';
  for (const auto& run : r.runs) {
    out << "  " << run.label << ": max H " << format_real(run.max_energy, 10)
        << ", post-transient max |dH| " << format_real(run.energy_oscillation, 4)
        << ", final state";
    for (Eigen::Index i = 0; i < run.result.run.y.back().size(); ++i) {
      out << ' ' << format_real(run.result.run.y.back()(i), 16);
    }
    out << '\n';
  }
  for (const auto& p : paths) out << "  wrote " << p.string() << '\n';
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.kind == "tableau") run_tableau(config, out);
    else if (config.kind == "integrate-ode") run_ode(config, out);
    else if (config.kind == "integrate-dde") run_dde(config, out);
    else if (config.kind == "convergence") run_convergence_study(config, out, err);
    else if (config.kind == "reproduce") run_reproduce(config, out);
    else throw ConfigError("missing or unknown experiment kind '" + config.kind + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kSuccess;
}

}  // namespace hbvm
