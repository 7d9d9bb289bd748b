#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace art {

// Flat "key = value" configuration. '#' starts a comment; keys use dots for
// grouping (generation.negative_mode, mock.accuracy.on). All parse errors
// name the key.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "config");
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  // All entries under "prefix." with the prefix stripped.
  std::map<std::string, std::string> group(const std::string& prefix) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;

  [[noreturn]] void fail(const std::string& key, const std::string& why) const;
};

}  // namespace art
