#include "creutz/io/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "creutz/error.hpp"

namespace creutz::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvalidParameter("CSV row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

std::string write_columns(const std::vector<std::string>& header,
                          const std::vector<const std::vector<double>*>& columns) {
  if (columns.size() != header.size()) throw InvalidParameter("column count differs from header");
  CsvWriter w(header);
  const std::size_t n = columns.empty() ? 0 : columns.front()->size();
  for (const auto* c : columns)
    if (c->size() != n) throw InvalidParameter("CSV columns have different lengths");
  std::vector<double> r(columns.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) r[c] = (*columns[c])[i];
    w.row(r);
  }
  return w.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

CsvData parse_csv(const std::string& text, const std::string& source) {
  CsvData data;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) -> ConfigError {
    return ConfigError(source + ":" + std::to_string(line_no), what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split(line);
    for (auto& c : cells) c = trim(c);
    if (data.header.empty()) {
      for (const auto& c : cells)
        if (c.empty()) throw fail("empty column name in header");
      data.header = cells;
      continue;
    }
    if (cells.size() != data.header.size())
      throw fail("expected " + std::to_string(data.header.size()) + " fields, found " +
                 std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size() || (errno == ERANGE && std::isinf(v)))
        throw fail("column '" + data.header[i] + "': '" + c + "' is not a number");
      row.push_back(v);
    }
    data.rows.push_back(std::move(row));
  }
  if (data.header.empty()) throw ConfigError(source + ":1", "missing header row");
  return data;
}

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("column " + name, "not present in CSV header");
}

std::vector<double> CsvData::values(std::size_t column) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(column));
  return out;
}

}  // namespace creutz::io
