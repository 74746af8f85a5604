#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace stopgen::csv {

/// Shortest decimal text that parses back to exactly `value`.
std::string format(double value);

/// One comma-separated line. Fields are written verbatim; callers only pass
/// identifiers and numbers, so no quoting is performed.
void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header; throws std::runtime_error if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a headed CSV file. Blank lines and lines starting with '#' are skipped.
Table read(const std::string& path);
Table parse(std::istream& in);

std::vector<std::string> split(std::string_view line, char sep = ',');
double to_double(std::string_view text);

}  // namespace stopgen::csv
