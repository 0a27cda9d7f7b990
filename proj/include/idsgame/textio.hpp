#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include "idsgame/errors.hpp"

namespace idsgame {

/// Canonical decimal rendering used in every emitted file: 12 significant
/// digits, shortest form. Fixed here so re-runs are byte comparable.
inline std::string render_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

inline std::string render_bool(bool v) { return v ? "true" : "false"; }

/// Strict full-string number parse.
inline double parse_number(const std::string& text) {
  if (text.empty()) throw config_error("expected a number, got an empty string");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw config_error("malformed number: '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw config_error("malformed boolean: '" + text + "'");
}

}  // namespace idsgame
