#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hbvm/ode.hpp"

namespace hbvm {

struct CsvOptions {
  int precision = 17;  // significant digits, scientific notation
  std::vector<std::string> component_names;  // defaults to y0, y1, ...
  /// Adds an H column when set.
  std::function<double(const Vector&)> energy;
};

/// Formats a double with `precision` significant digits in scientific form.
std::string format_real(double value, int precision);

/// Columns: n, t, state components, [H], iterations. The first line is a
/// comment recording the float format; line endings are LF.
void write_run_csv(std::ostream& os, const RunReport& report, const CsvOptions& options);

/// Writes to `path`; throws std::runtime_error on I/O failure.
void emit_csv(const RunReport& report, const std::filesystem::path& path,
              const CsvOptions& options);

}  // namespace hbvm
