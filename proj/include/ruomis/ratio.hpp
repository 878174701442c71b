#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace ruomis {

/// Non-negative rational num/den with exact decimal rounding. All reported
/// precision, recall, percentage and deviation figures are ratios of counts,
/// so rounding them here avoids binary floating-point ties going the wrong way.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// round_half_up(num/den * 10^decimals) as an integer.
  std::uint64_t scaled(int decimals) const {
    std::uint64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    return (2 * num * scale + den) / (2 * den);
  }

  /// Fixed-point text with half-up rounding, e.g. "0.271".
  std::string format(int decimals) const {
    std::uint64_t v = scaled(decimals);
    std::uint64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    std::string frac = std::to_string(v % scale);
    if (decimals > 0) frac.insert(0, std::size_t(decimals) - frac.size(), '0');
    return std::to_string(v / scale) + (decimals > 0 ? "." + frac : "");
  }

  /// The rounded value as a double, for structured output.
  double rounded(int decimals) const {
    std::uint64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    return static_cast<double>(scaled(decimals)) / static_cast<double>(scale);
  }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend bool operator<(const Ratio& a, const Ratio& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
};

/// Signed num/den rounded half away from zero to `decimals` places.
inline std::string format_signed_ratio(std::int64_t num, std::uint64_t den, int decimals) {
  Ratio magnitude{static_cast<std::uint64_t>(std::llabs(num)), den};
  std::string s = magnitude.format(decimals);
  return (num < 0 && magnitude.scaled(decimals) != 0 ? "-" : "") + s;
}

}  // namespace ruomis
