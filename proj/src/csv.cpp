#include "avi/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace avi {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

bool parse_numeric_fields(std::string_view line, std::vector<double>& out) {
  out.clear();
  while (true) {
    const auto comma = line.find(',');
    std::string_view field = line.substr(0, comma);
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    if (first == std::string_view::npos) return false;
    field = field.substr(first, last - first + 1);
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) return false;
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    line.remove_prefix(comma + 1);
  }
}

NumericCsvReader::NumericCsvReader(std::istream& in, std::string source, std::size_t columns)
    : in_(in), source_(std::move(source)), columns_(columns) {}

bool NumericCsvReader::next(std::vector<double>& row) {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    const bool ok = parse_numeric_fields(text, row);
    if (first_) {
      first_ = false;
      if (!ok) {
        had_header_ = true;
        continue;
      }
    }
    if (!ok) throw ParseError(source_, line_, "expected numeric fields, got '" + text + "'");
    if (columns_ == 0) columns_ = row.size();
    if (row.size() != columns_)
      throw ParseError(source_, line_,
                       "expected " + std::to_string(columns_) + " columns, got " +
                           std::to_string(row.size()));
    return true;
  }
  if (in_.bad()) throw ParseError(source_, line_, "read error");
  return false;
}

Triplet row_to_triplet(std::span<const double> row, const std::string& source, std::size_t line) {
  if (row.size() < 3) throw ParseError(source, line, "triplet rows need x,y,z_1[,...,z_d]");
  Triplet t;
  t.x = row[0];
  t.y = row[1];
  t.z.assign(row.begin() + 2, row.end());
  return t;
}

void write_curves_csv(std::ostream& out, std::span<const RejectionCurve> curves,
                      std::span<const std::string> names) {
  if (curves.size() != names.size())
    throw std::invalid_argument("write_curves_csv: one name per curve");
  out << "k,value,curve\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    for (std::uint64_t k = curve.m(); k <= curve.horizon(); ++k)
      out << k << ',' << format_double(curve.value(k)) << ',' << names[c] << '\n';
  }
}

}  // namespace avi
