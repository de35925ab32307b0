#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace wtc {

/// CSV cells carry 10 significant digits; infinities are spelled "inf".
inline std::string csv_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// 17 significant digits: round-trips any double.
inline std::string full_precision(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// JSON has no infinity; emit the marker string instead of null.
inline nlohmann::json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace wtc
