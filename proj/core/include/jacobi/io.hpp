#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace jacobi::io {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// CSV writer: a "# schema: <name> v<version>" line, then the column header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::string_view schema, int version,
            std::initializer_list<std::string_view> columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::string_view v);
  void end_row();

 private:
  std::ostream& os_;
  bool first_ = true;
  void sep();
};

}  // namespace jacobi::io
