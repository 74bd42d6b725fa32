#include "hbvm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "hbvm/csv.hpp"

namespace hbvm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string text(value);
  try {
    std::size_t used = 0;
    const double out = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + text + "'");
  }
}

std::vector<double> parse_nodes(std::string_view text) {
  std::vector<double> nodes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
    nodes.push_back(parse_real("nodes", piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return nodes;
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "kind") kind = value;
  else if (key == "problem") problem = value;
  else if (key == "k") k = parse_int(key, value);
  else if (key == "s") s = parse_int(key, value);
  else if (key == "nodes") nodes = value;
  else if (key == "nu") nu = parse_int(key, value);
  else if (key == "K") K = parse_int(key, value);
  else if (key == "h") h = parse_real(key, value);
  else if (key == "steps") steps = parse_int(key, value);
  else if (key == "t0") t0 = parse_real(key, value);
  else if (key == "T") T = parse_real(key, value);
  else if (key == "rtol") rtol = parse_real(key, value);
  else if (key == "atol") atol = parse_real(key, value);
  else if (key == "max_iter" || key == "max-iter") max_iter = parse_int(key, value);
  else if (key == "scheme") scheme = std::string(value);
  else if (key == "out") out = value;
  else if (key == "precision") precision = parse_int(key, value);
  else if (key == "levels") levels = parse_int(key, value);
  else if (key == "reference") reference = value;
  else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> kinds = {"integrate-ode", "integrate-dde", "convergence",
                                                 "tableau", "reproduce"};
  if (!kind.empty() && std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw ConfigError("unknown experiment kind '" + kind + "'");
  }
  if (s < 1) throw ConfigError("s must be at least 1");
  if (k < s) throw ConfigError("k must not be smaller than s");
  if (nu && *nu < 1) throw ConfigError("nu must be at least 1");
  if (K && *K < 1) throw ConfigError("K must be at least 1");
  if (steps && *steps < 1) throw ConfigError("steps must be at least 1");
  if (h && !(*h > 0.0)) throw ConfigError("h must be positive");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("tolerances must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (scheme && *scheme != "fixed-point" && *scheme != "newton") {
    throw ConfigError("scheme must be 'fixed-point' or 'newton'");
  }
  if (precision < 1 || precision > 17) throw ConfigError("precision must be in [1, 17]");
  if (levels < 2) throw ConfigError("levels must be at least 2");
  if (reference != "analytic" && reference != "fine") {
    throw ConfigError("reference must be 'analytic' or 'fine'");
  }
  if (nodes != "gauss") {
    const auto list = parse_nodes(nodes);
    if (static_cast<int>(list.size()) != k) {
      throw ConfigError("nodes list must have k entries");
    }
  }
}

Method ExperimentConfig::method() const {
  validate();
  try {
    if (nodes == "gauss") return Method::gauss(k, s);
    const auto list = parse_nodes(nodes);
    return Method(interpolatory_rule(list), s);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid method: ") + e.what());
  }
}

SolverSettings ExperimentConfig::solver_settings() const {
  SolverSettings settings;
  settings.rtol = rtol;
  settings.atol = atol;
  settings.max_iterations = max_iter;
  const std::string chosen = scheme.value_or(kind == "reproduce" ? "newton" : "fixed-point");
  settings.scheme = chosen == "newton" ? IterationScheme::simplified_newton
                                       : IterationScheme::fixed_point;
  return settings;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto real = [](double v) { return format_real(v, 17); };
  if (!c.kind.empty()) os << "kind = " << c.kind << '\n';
  if (!c.problem.empty()) os << "problem = " << c.problem << '\n';
  os << "k = " << c.k << '\n';
  os << "s = " << c.s << '\n';
  os << "nodes = " << c.nodes << '\n';
  if (c.nu) os << "nu = " << *c.nu << '\n';
  if (c.K) os << "K = " << *c.K << '\n';
  if (c.h) os << "h = " << real(*c.h) << '\n';
  if (c.steps) os << "steps = " << *c.steps << '\n';
  os << "t0 = " << real(c.t0) << '\n';
  if (c.T) os << "T = " << real(*c.T) << '\n';
  os << "rtol = " << real(c.rtol) << '\n';
  os << "atol = " << real(c.atol) << '\n';
  os << "max_iter = " << c.max_iter << '\n';
  if (c.scheme) os << "scheme = " << *c.scheme << '\n';
  if (!c.out.empty()) os << "out = " << c.out << '\n';
  os << "precision = " << c.precision << '\n';
  os << "levels = " << c.levels << '\n';
  os << "reference = " << c.reference << '\n';
  return os.str();
}

}  // namespace hbvm
