#pragma once

#include <string>

namespace aoi {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
/// Non-finite values print as "inf", "-inf" or "nan".
std::string format_double(double value);

/// Parses a full string as a double without consulting the locale.
/// Throws std::invalid_argument on trailing garbage or empty input.
double parse_double(const std::string& text);

}  // namespace aoi
