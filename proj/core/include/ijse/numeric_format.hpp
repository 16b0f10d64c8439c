#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ijse {

/// Shortest string that round-trips to `value`, always carrying a decimal
/// point or exponent ("1.0", "0.25", "1e-07"). NaN prints as "NA".
std::string format_real(double value);

/// Fixed-point with `decimals` digits; negative zero prints unsigned. NaN prints as "NA".
std::string format_fixed(double value, int decimals);

/// Ratio as a signed whole percent: -0.414 -> "-41%", 0.001 -> "+0%". NaN prints as "NA".
std::string format_signed_percent(double ratio);

/// Parses a full-string double; "NA" and anything malformed yield nullopt.
std::optional<double> parse_real(std::string_view text);

}  // namespace ijse
