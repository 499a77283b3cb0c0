#include "jacobi/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace jacobi::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

CsvWriter::CsvWriter(std::ostream& os, std::string_view schema, int version,
                     std::initializer_list<std::string_view> columns)
    : os_(os) {
  os_ << "# schema: " << schema << " v" << version << '\n';
  for (auto c : columns) cell(c);
  end_row();
}

void CsvWriter::sep() {
  if (!first_) os_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  os_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
  sep();
  os_ << v;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  first_ = true;
}

}  // namespace jacobi::io
