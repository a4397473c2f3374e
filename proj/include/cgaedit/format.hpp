#pragma once

#include <string>

namespace cgaedit {

// Shortest text that parses back to the same double.
std::string format_number(double value);

// Like format_number, but integral values keep a ".0" suffix ("2.0", "-3.0")
// and negative zero prints as "0.0".
std::string format_decimal(double value);

// Fixed-point with `digits` decimals.
std::string format_fixed(double value, int digits);

}  // namespace cgaedit
