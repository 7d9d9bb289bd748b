#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace art {

// Lowercase, map '_' to ' ', collapse whitespace runs, trim ends.
// Annotation sources disagree on casing and underscores; every phrase and
// predicate passes through here before comparison or vocabulary lookup.
inline std::string normalize_phrase(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (c == '_' || std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

inline std::vector<std::string> tokenize(std::string_view phrase) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : phrase) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace art
