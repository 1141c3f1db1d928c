#pragma once

#include <string>

namespace semharq {

/// Shortest decimal string that parses back to exactly `value`.
/// Non-finite values render as "inf", "-inf" or "nan".
std::string format_double(double value);

/// Inverse of format_double; throws FormatError on malformed input.
double parse_double(const std::string& text);

}  // namespace semharq
