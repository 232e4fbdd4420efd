#include "wordgroup/format.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <system_error>

namespace wordgroup {

std::string format_real(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_shortest(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::runtime_error("not a real number: '" + text + "'");
  }
  return value;
}

}  // namespace wordgroup
