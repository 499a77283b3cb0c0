#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace jacobi::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value configuration. Values resolve as command line > file > defaults.
class RunConfig {
 public:
  RunConfig() = default;
  explicit RunConfig(std::map<std::string, std::string> defaults) : values_(std::move(defaults)) {}

  // Lines "key = value"; '#' starts a comment. Unknown keys are a usage error.
  void merge_file(const std::string& path);
  void merge_text(const std::string& text, const std::string& origin);
  void set(const std::string& key, const std::string& value);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] std::string str(const std::string& key) const;
  [[nodiscard]] double real(const std::string& key) const;
  [[nodiscard]] long long integer(const std::string& key) const;

  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }
  void write(std::ostream& os) const;
  [[nodiscard]] nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace jacobi::cli
