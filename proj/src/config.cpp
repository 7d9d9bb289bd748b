#include "art/config.hpp"

#include <sstream>
#include <stdexcept>

#include "art/io.hpp"

namespace art {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": empty key");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  return parse(read_file(path), path);
}

void Config::fail(const std::string& key, const std::string& why) const {
  throw std::runtime_error(origin_ + ": key '" + key + "' " + why);
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(key, "is required");
  return it->second;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) fail(key, "is not an integer");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "is not an integer");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) fail(key, "is not a number");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "is not a number");
  }
}

std::uint64_t Config::get_seed(const std::string& key,
                               std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size()) fail(key, "is not a seed");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "is not a seed");
  }
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  std::string token;
  std::istringstream in(it->second);
  while (std::getline(in, token, ',')) {
    try {
      out.push_back(std::stoi(token));
    } catch (const std::logic_error&) {
      fail(key, "is not a comma-separated integer list");
    }
  }
  if (out.empty()) fail(key, "is not a comma-separated integer list");
  return out;
}

std::map<std::string, std::string> Config::group(const std::string& prefix) const {
  const std::string full = prefix + ".";
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : values_) {
    if (key.size() > full.size() && key.compare(0, full.size(), full) == 0) {
      out[key.substr(full.size())] = value;
    }
  }
  return out;
}

}  // namespace art
