#pragma once

#include <string>
#include <vector>

namespace creutz::io {

/// Shortest form that round-trips through strtod ("%.17g").
std::string format_double(double v);

// Comma-separated table with a mandatory header row and '\n' line endings.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

private:
  std::size_t width_;
  std::string text_;
};

/// Columns of equal length, one row per index.
std::string write_columns(const std::vector<std::string>& header,
                          const std::vector<const std::vector<double>*>& columns);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws ConfigError when absent
  std::vector<double> values(std::size_t column) const;
};

/// Numeric CSV with a header row. Malformed input raises ConfigError whose
/// path is "<source>:<line>".
CsvData parse_csv(const std::string& text, const std::string& source = "input");

}  // namespace creutz::io
