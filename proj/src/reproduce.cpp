#include "hbvm/reproduce.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <future>
#include <stdexcept>

#include "hbvm/csv.hpp"
#include "hbvm/problems.hpp"

namespace hbvm {

ReproductionSetup published_setup(ProblemId id) {
  ReproductionSetup setup;
  setup.id = id;
  switch (id) {
    case ProblemId::problem1:
      setup.steps_per_delay = 5;
      setup.intervals = 2000;
      setup.methods = {{2, 2}, {4, 2}};
      setup.sample_stride = 10;  // period 2 = 2 delays
      setup.sample_phase = 2;
      break;
    case ProblemId::problem2:
      setup.steps_per_delay = 10;
      setup.intervals = 1000;
      setup.methods = {{2, 2}, {10, 2}};
      setup.sample_stride = 20;
      setup.sample_phase = 14;
      break;
    case ProblemId::problem3:
      setup.steps_per_delay = 2;
      setup.intervals = 500;
      setup.methods = {{2, 2}, {10, 2}};
      setup.sample_stride = 0;
      break;
  }
  return setup;
}

const MethodRun& Reproduction::run(int k, int s) const {
  for (const auto& r : runs) {
    if (r.k == k && r.s == s) return r;
  }
  throw std::out_of_range("Reproduction: no run for HBVM(" + std::to_string(k) + "," +
                          std::to_string(s) + ")");
}

namespace {

MethodRun run_method(const ReproductionSetup& setup, const DelayHamiltonianProblem& source,
                     int k, int s, const SolverSettings& settings) {
  const Method method = Method::gauss(k, s);
  const CommensurableMesh mesh(source.delay, setup.steps_per_delay, setup.intervals);
  MethodRun out{k, s, method.label(), integrate_dde(source.to_dde(), method, mesh, settings),
                {}, {}, {}, 0.0, 0.0, {}};
  const RunReport& run = out.result.run;
  out.energy = energy_series(run, [&](const Vector& y) { return source.energy(y); });

  const double t_start = setup.transient_fraction * mesh.end_time();
  out.max_energy = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < run.size(); ++n) {
    out.max_energy = std::max(out.max_energy, out.energy.values[n]);
  }
  out.mean_position = Vector::Zero(source.dof);
  int count = 0;
  for (std::size_t n = 1; n < run.size(); ++n) {
    if (run.t[n] < t_start) continue;
    out.energy_oscillation = std::max(out.energy_oscillation, out.energy.differences[n - 1]);
    out.mean_position += run.y[n].head(source.dof);
    ++count;
    if (setup.sample_stride > 0 &&
        static_cast<int>(n) % setup.sample_stride == setup.sample_phase) {
      out.sample_steps.push_back(static_cast<int>(n));
      out.samples.push_back(run.y[n]);
    }
  }
  if (count > 0) out.mean_position /= count;
  return out;
}

}  // namespace

Reproduction reproduce(const ReproductionSetup& setup, const SolverSettings& settings) {
  const DelayHamiltonianProblem source = make_problem(setup.id);
  std::vector<std::future<MethodRun>> jobs;
  for (const auto& [k, s] : setup.methods) {
    jobs.push_back(std::async(std::launch::async, [&, k = k, s = s] {
      return run_method(setup, source, k, s, settings);
    }));
  }
  Reproduction out{setup, {}};
  for (auto& job : jobs) out.runs.push_back(job.get());
  return out;
}

std::vector<std::filesystem::path> write_reproduction(const Reproduction& reproduction,
                                                      const std::filesystem::path& directory,
                                                      int precision) {
  std::filesystem::create_directories(directory);
  const DelayHamiltonianProblem source = make_problem(reproduction.setup.id);
  const std::string stem = to_string(reproduction.setup.id);
  std::vector<std::filesystem::path> written;
  auto open = [](const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
  };

  for (const MethodRun& r : reproduction.runs) {
    const std::string base = stem + "_hbvm" + std::to_string(r.k) + "_" + std::to_string(r.s);
    CsvOptions options;
    options.precision = precision;
    options.component_names = hamiltonian_component_names(source.dof);
    options.energy = [&](const Vector& y) { return source.energy(y); };
    const auto solution = directory / (base + ".csv");
    emit_csv(r.result.run, solution, options);
    written.push_back(solution);

    const auto energy_path = directory / (base + "_energy.csv");
    {
      auto os = open(energy_path);
      os << "# float_format=scientific significant_digits=" << precision << '\n';
      os << "n,t,H,abs_dH\n";
      const auto& run = r.result.run;
      for (std::size_t n = 0; n < run.size(); ++n) {
        os << n << ',' << format_real(run.t[n], precision) << ','
           << format_real(r.energy.values[n], precision) << ','
           << format_real(n == 0 ? 0.0 : r.energy.differences[n - 1], precision) << '\n';
      }
      if (!os) throw std::runtime_error("write to '" + energy_path.string() + "' failed");
    }
    written.push_back(energy_path);

    if (!r.samples.empty()) {
      const auto sample_path = directory / (base + "_samples.csv");
      auto os = open(sample_path);
      os << "# float_format=scientific significant_digits=" << precision << '\n';
      os << "n,t";
      for (const auto& name : options.component_names) os << ',' << name;
      os << '\n';
      for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const int n = r.sample_steps[i];
        os << n << ',' << format_real(r.result.run.t[n], precision);
        for (Eigen::Index j = 0; j < r.samples[i].size(); ++j) {
          os << ',' << format_real(r.samples[i](j), precision);
        }
        os << '\n';
      }
      if (!os) throw std::runtime_error("write to '" + sample_path.string() + "' failed");
      written.push_back(sample_path);
    }
  }
  return written;
}

}  // namespace hbvm
