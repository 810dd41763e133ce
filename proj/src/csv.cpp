#include "infoprice/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace infoprice {

std::string CsvWriter::format(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvWriter::header(std::span<const std::string> names) { row_cells(names); }

void CsvWriter::header(std::initializer_list<std::string> names) {
  row_cells(std::span<const std::string>(names.begin(), names.size()));
}

void CsvWriter::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) *out_ << ',';
    *out_ << format(values[i]);
  }
  *out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row_cells(std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) *out_ << ',';
    *out_ << cells[i];
  }
  *out_ << '\n';
}

void CsvWriter::comment(const std::string& text) { *out_ << "# " << text << '\n'; }

}  // namespace infoprice
