#include "cgaedit/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace cgaedit {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string format_decimal(double value) {
  std::string text = format_number(value);
  if (text.find_first_of(".einf") == std::string::npos) text += ".0";
  return text;
}

std::string format_fixed(double value, int digits) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, value);
  return buf.data();
}

}  // namespace cgaedit
