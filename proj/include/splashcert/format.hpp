#pragma once

#include <cstdio>
#include <string>

namespace splashcert {

/// Numeric formatting for all file output: 17 significant digits, enough to
/// round-trip any double exactly.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace splashcert
