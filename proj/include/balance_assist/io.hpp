#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace balance_assist {

/// All emitted floats carry 6 significant digits.
inline std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Snap a value onto the 6-significant-digit grid used when printing, so
/// persisted logs parse back to bit-identical doubles.
inline double quantize_g6(double v) {
  return std::strtod(format_g6(v).c_str(), nullptr);
}

}  // namespace balance_assist
