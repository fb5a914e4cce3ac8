#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "avi/seq_gcm.hpp"
#include "avi/sim_harness.hpp"

namespace avi {

/// Shortest text with 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// Malformed input row. The message carries source name and line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads rows of comma-separated numbers. Blank lines are skipped. A first
// non-blank line that does not parse as numbers is taken as a header.
class NumericCsvReader {
 public:
  /// columns == 0 accepts any width but requires every row to match the
  /// first one.
  NumericCsvReader(std::istream& in, std::string source, std::size_t columns = 0);

  /// Next row, or false at end of input. Throws ParseError.
  bool next(std::vector<double>& row);

  std::size_t line() const { return line_; }
  bool had_header() const { return had_header_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t columns_;
  std::size_t line_ = 0;
  bool first_ = true;
  bool had_header_ = false;
};

/// Splits on commas and parses each field as a finite double. Returns false
/// if any field is not a number; throws nothing.
bool parse_numeric_fields(std::string_view line, std::vector<double>& out);

/// Triplet row x,y,z_1..z_d. Throws ParseError for fewer than 3 columns.
Triplet row_to_triplet(std::span<const double> row, const std::string& source, std::size_t line);

/// "k,value,curve" rows for each named curve.
void write_curves_csv(std::ostream& out, std::span<const RejectionCurve> curves,
                      std::span<const std::string> names);

}  // namespace avi
