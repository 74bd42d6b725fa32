#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "hbvm/config.hpp"
#include "hbvm/convergence.hpp"
#include "hbvm/csv.hpp"
#include "hbvm/experiment.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/reproduce.hpp"

namespace {

using hbvm::ExperimentConfig;
using hbvm::Method;
using hbvm::SolverSettings;

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hbvm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(Config, ParsesKeyValueLines) {
  const auto config = hbvm::parse_config(
      "# comment\n"
      "kind = integrate-dde\n"
      "problem = problem1   # trailing\n"
      "\n"
      "k = 4\ns=2\nnu = 5\nK = 3\nrtol = 1e-13\nmax_iter = 50\n");
  EXPECT_EQ(config.kind, "integrate-dde");
  EXPECT_EQ(config.problem, "problem1");
  EXPECT_EQ(config.k, 4);
  EXPECT_EQ(config.nu, 5);
  EXPECT_EQ(config.K, 3);
  EXPECT_EQ(config.rtol, 1e-13);
  EXPECT_EQ(config.max_iter, 50);
  EXPECT_NO_THROW(config.validate());
}

TEST(Config, SerializationIsIdempotent) {
  auto config = hbvm::parse_config("kind = convergence\nproblem = exp_decay\nk = 3\ns = 3\nh = 0.1\n");
  const std::string once = hbvm::serialize_config(config);
  const std::string twice = hbvm::serialize_config(hbvm::parse_config(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(hbvm::parse_config(once).h, 0.1);
}

TEST(Config, RejectsInvalidInput) {
  EXPECT_THROW(hbvm::parse_config("colour = red\n"), hbvm::ConfigError);
  EXPECT_THROW(hbvm::parse_config("k = two\n"), hbvm::ConfigError);
  EXPECT_THROW(hbvm::parse_config("just words\n"), hbvm::ConfigError);
  EXPECT_THROW(hbvm::parse_config("kind = tableau\nk = 1\ns = 2\n").validate(), hbvm::ConfigError);
  EXPECT_THROW(hbvm::parse_config("kind = integrate-dde\nnu = 0\n").validate(), hbvm::ConfigError);
  EXPECT_THROW(hbvm::parse_config("kind = fly\n").validate(), hbvm::ConfigError);
  EXPECT_THROW(hbvm::load_config("/nonexistent/hbvm.cfg"), hbvm::ConfigError);
}

TEST(Config, CustomNodes) {
  auto config = hbvm::parse_config("kind = tableau\nk = 2\ns = 2\nnodes = 0.25,0.75\n");
  EXPECT_EQ(config.method().quadrature_order(), 2);
  config.nodes = "0.5";
  EXPECT_THROW(config.validate(), hbvm::ConfigError);
}

TEST(Csv, HeaderOnlyForEmptyRun) {
  std::ostringstream os;
  hbvm::CsvOptions options;
  options.component_names = {"q", "p"};
  hbvm::write_run_csv(os, hbvm::RunReport{}, options);
  EXPECT_EQ(os.str(), "# float_format=scientific significant_digits=17\nn,t,q,p,iterations\n");
}

TEST(Csv, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(mantissa(rng), exponent(rng));
    EXPECT_EQ(std::strtod(hbvm::format_real(x, 17).c_str(), nullptr), x);
  }
}

TEST(Csv, DdeRunColumns) {
  ExperimentConfig config;
  config.kind = "integrate-dde";
  config.problem = "problem1";
  config.k = 4;
  config.nu = 5;
  config.K = 1;
  std::ostringstream out, err;
  ASSERT_EQ(hbvm::run_experiment(config, out, err), hbvm::kSuccess) << err.str();
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line[0], '#');
  std::getline(lines, line);
  EXPECT_EQ(line, "n,t,q,p,H,iterations");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(out.str().find('\r'), std::string::npos);
}

TEST(Experiment, Deterministic) {
  ExperimentConfig config;
  config.kind = "integrate-dde";
  config.problem = "problem2";
  config.k = 10;
  config.nu = 10;
  config.K = 3;
  std::ostringstream a, b, err;
  ASSERT_EQ(hbvm::run_experiment(config, a, err), hbvm::kSuccess);
  ASSERT_EQ(hbvm::run_experiment(config, b, err), hbvm::kSuccess);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, ExitCodes) {
  std::ostringstream out, err;
  ExperimentConfig bad;
  bad.kind = "tableau";
  bad.k = 1;
  bad.s = 2;
  EXPECT_EQ(hbvm::run_experiment(bad, out, err), hbvm::kInvalidConfig);

  ExperimentConfig failing;
  failing.kind = "integrate-ode";
  failing.problem = "exp_decay";
  failing.T = 50.0;
  failing.steps = 1;
  failing.max_iter = 10;
  EXPECT_EQ(hbvm::run_experiment(failing, out, err), hbvm::kSolverFailure);
  EXPECT_NE(err.str().find("step 1"), std::string::npos);
}

TEST(Experiment, WritesToConfiguredFile) {
  const auto dir = scratch_dir("out");
  ExperimentConfig config;
  config.kind = "tableau";
  config.k = 3;
  config.s = 2;
  config.out = (dir / "tab.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(hbvm::run_experiment(config, out, err), hbvm::kSuccess);
  EXPECT_TRUE(out.str().empty());
  EXPECT_NE(read_file(dir / "tab.csv").find("i,c,b,a1,a2,a3\n"), std::string::npos);
}

TEST(Convergence, OdeMeshAndUniformOrders) {
  const auto c = hbvm::make_ode_case("exp_decay");
  const auto tables = hbvm::run_convergence(c, {Method::gauss(1, 1), Method::gauss(2, 2)},
                                            hbvm::geometric_ladder(8, 64), SolverSettings{},
                                            hbvm::ReferenceKind::analytic);
  ASSERT_EQ(tables.size(), 2u);
  for (const auto& t : tables) {
    EXPECT_EQ(t.rows.size(), 4u);
    EXPECT_TRUE(t.mesh_order_matches(0.25, hbvm::kDefaultNoiseFloor)) << t.method;
    EXPECT_TRUE(t.uniform_order_matches(0.25, hbvm::kDefaultNoiseFloor)) << t.method;
  }
}

TEST(Convergence, FineReferenceAgreesWithAnalytic) {
  auto c = hbvm::make_ode_case("pendulum");
  c.T = 2.0;
  const auto fine = hbvm::run_convergence(c, {Method::gauss(2, 2)}, {4, 8, 16}, SolverSettings{},
                                          hbvm::ReferenceKind::fine_step);
  EXPECT_TRUE(fine.front().mesh_order_matches(0.3, hbvm::kDefaultNoiseFloor));
  EXPECT_THROW(hbvm::run_convergence(c, {Method::gauss(2, 2)}, {4, 8, 16}, SolverSettings{},
                                     hbvm::ReferenceKind::analytic),
               std::invalid_argument);
}

TEST(Convergence, DelayProblemAfterPolynomialPhase) {
  auto c = hbvm::make_dde_case("dde_linear");
  c.intervals = 5;
  const auto tables = hbvm::run_convergence(c, {Method::gauss(4, 2)}, {4, 8, 16, 32},
                                            SolverSettings{}, hbvm::ReferenceKind::analytic);
  EXPECT_TRUE(tables.front().mesh_order_matches(0.25, hbvm::kDefaultNoiseFloor));
}

TEST(Convergence, GeometricLadder) {
  EXPECT_EQ(hbvm::geometric_ladder(4, 32), (std::vector<int>{4, 8, 16, 32}));
  EXPECT_EQ(hbvm::geometric_ladder(3, 30, 3), (std::vector<int>{3, 9, 27}));
}

TEST(Reproduce, PublishedSetups) {
  const auto s1 = hbvm::published_setup(hbvm::ProblemId::problem1);
  EXPECT_EQ(s1.steps_per_delay, 5);
  EXPECT_EQ(s1.intervals, 2000);
  const auto s3 = hbvm::published_setup(hbvm::ProblemId::problem3);
  EXPECT_EQ(s3.steps_per_delay, 2);
  EXPECT_EQ(s3.intervals, 500);
  EXPECT_EQ(s3.methods.size(), 2u);
}

TEST(Reproduce, ShortRunWritesFiles) {
  auto setup = hbvm::published_setup(hbvm::ProblemId::problem1);
  setup.intervals = 40;
  SolverSettings settings;
  settings.scheme = hbvm::IterationScheme::simplified_newton;
  const auto r = hbvm::reproduce(setup, settings);
  ASSERT_EQ(r.runs.size(), 2u);
  const auto& run = r.run(4, 2);
  EXPECT_EQ(run.result.run.size(), 201u);
  EXPECT_FALSE(run.samples.empty());
  for (int n : run.sample_steps) EXPECT_EQ(n % setup.sample_stride, setup.sample_phase);
  const auto dir = scratch_dir("reproduce");
  const auto paths = hbvm::write_reproduction(r, dir, 17);
  EXPECT_EQ(paths.size(), 6u);
  for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p)) << p;
  EXPECT_TRUE(std::filesystem::exists(dir / "problem1_hbvm4_2.csv"));
}

TEST(Cli, ExitCodes) {
  const std::string cli = HBVM_CLI_PATH;
  EXPECT_EQ(std::system((cli + " tableau --k 2 --s 2 > /dev/null").c_str()), 0);
  const int bad = std::system((cli + " tableau --k 1 --s 2 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(bad), 2);
  const int unknown = std::system((cli + " tableau --bogus 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(unknown), 2);
}

}  // namespace
