#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace infoprice {

/// Minimal CSV emitter. Doubles are written with 17 significant digits so
/// files round-trip exactly and reruns are byte-comparable.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void header(std::span<const std::string> names);
  void header(std::initializer_list<std::string> names);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values);
  void row_cells(std::span<const std::string> cells);
  /// Line starting with '#'.
  void comment(const std::string& text);

  static std::string format(double value);

 private:
  std::ostream* out_;
};

}  // namespace infoprice
