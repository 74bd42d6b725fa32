#include "hbvm/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace hbvm {

std::string format_real(double value, int precision) {
  if (precision < 1 || precision > 17) {
    throw std::invalid_argument("format_real: precision must be in [1, 17]");
  }
  return fmt::format("{:.{}e}", value, precision - 1);
}

void write_run_csv(std::ostream& os, const RunReport& report, const CsvOptions& options) {
  std::vector<std::string> names = options.component_names;
  const Eigen::Index m = report.y.empty() ? static_cast<Eigen::Index>(names.size())
                                          : report.y.front().size();
  if (names.size() != static_cast<std::size_t>(m)) {
    names.clear();
    for (Eigen::Index i = 0; i < m; ++i) names.push_back("y" + std::to_string(i));
  }

  os << "# float_format=scientific significant_digits=" << options.precision << '\n';
  os << "n,t";
  for (const auto& name : names) os << ',' << name;
  if (options.energy) os << ",H";
  os << ",iterations\n";

  for (std::size_t n = 0; n < report.size(); ++n) {
    os << n << ',' << format_real(report.t[n], options.precision);
    for (Eigen::Index i = 0; i < m; ++i) {
      os << ',' << format_real(report.y[n](i), options.precision);
    }
    if (options.energy) os << ',' << format_real(options.energy(report.y[n]), options.precision);
    os << ',' << (n < report.iterations.size() ? report.iterations[n] : 0) << '\n';
  }
}

void emit_csv(const RunReport& report, const std::filesystem::path& path,
              const CsvOptions& options) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  write_run_csv(out, report, options);
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

}  // namespace hbvm
