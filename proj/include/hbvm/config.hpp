#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hbvm/method.hpp"
#include "hbvm/ode.hpp"

namespace hbvm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat experiment description. Keys in the text form:
///   kind problem k s nodes nu K h steps t0 T rtol atol max_iter scheme out precision
///   levels reference
struct ExperimentConfig {
  std::string kind;  // integrate-ode | integrate-dde | convergence | tableau | reproduce
  std::string problem;
  int k = 2;
  int s = 2;
  std::string nodes = "gauss";  // "gauss" or a comma-separated abscissa list
  std::optional<int> nu;
  std::optional<int> K;
  std::optional<double> h;
  std::optional<int> steps;
  double t0 = 0.0;
  std::optional<double> T;
  double rtol = 1e-14;
  double atol = 1e-16;
  int max_iter = 100;
  /// fixed-point | newton; unset means newton for reproduce, fixed-point otherwise.
  std::optional<std::string> scheme;
  std::string out;
  int precision = 17;
  int levels = 6;                     // convergence: ladder length
  std::string reference = "analytic";  // convergence: analytic | fine

  /// Sets one key from its text value; throws ConfigError on unknown keys
  /// or malformed values.
  void set(std::string_view key, std::string_view value);

  /// Throws ConfigError when k < s, s < 1, nu < 1 and similar.
  void validate() const;

  Method method() const;
  SolverSettings solver_settings() const;
};

/// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form: one "key = value" line per key, fixed key order,
/// reals with 17 significant digits.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace hbvm
