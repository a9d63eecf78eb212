#pragma once

#include <cstdio>
#include <string>

namespace kitaev {

/// Shortest-form decimal with 12 significant digits.
inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace kitaev
