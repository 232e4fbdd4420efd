#pragma once

#include <string>

namespace wordgroup {

/// 17 significant digits; parses back to the same double.
std::string format_real(double value);

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double value);

/// Parses a full string as a double; throws std::runtime_error on junk.
double parse_real(const std::string& text);

}  // namespace wordgroup
