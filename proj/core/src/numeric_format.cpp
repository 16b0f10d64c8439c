#include "ijse/numeric_format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ijse {

std::string format_real(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), res.ptr);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "NA";
  if (decimals < 0) throw std::invalid_argument("format_fixed: negative decimals");
  std::array<char, 128> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, decimals);
  if (res.ec != std::errc()) throw std::out_of_range("format_fixed: value too large");
  std::string out(buf.data(), res.ptr);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string format_signed_percent(double ratio) {
  if (std::isnan(ratio)) return "NA";
  const double pct = std::round(ratio * 100.0);
  std::string digits = format_fixed(std::abs(pct), 0);
  return (pct < 0.0 ? "-" : "+") + digits + "%";
}

std::optional<double> parse_real(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty() || text == "NA") return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace ijse
