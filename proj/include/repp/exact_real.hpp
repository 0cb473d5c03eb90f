// Exactly representable target coordinates: rationals and rational
// multiples of pi, with base-b digit expansions to arbitrary length.
#pragma once

#include "repp/scalar.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace repp {

/// Largest digit count any expansion may request.
inline constexpr int kMaxDigits = 4096;

/// value = coef (times pi when `times_pi`).
struct ExactReal {
  Rational coef{0};
  bool times_pi = false;

  static ExactReal rational(Rational r) { return {std::move(r), false}; }
  static ExactReal pi_multiple(Rational r) { return {std::move(r), true}; }

  bool is_rational() const { return !times_pi || coef == 0; }
  double to_double() const;

  /// Rational r with |r - value| < b^-digits (exact when is_rational()).
  Rational approx(int digits = 48) const;

  /// First `count` base-`base` digits of frac(value), most significant first.
  /// Throws ResolutionError when count exceeds kMaxDigits.
  std::vector<std::uint8_t> digits(int base, int count) const;

  std::string to_string() const;

  bool operator==(const ExactReal&) const = default;
};

/// Accepts "p", "p/q", decimals ("0.3", "1e-3"), and pi multiples such as
/// "pi", "pi/16", "3*pi/16", "3pi/16". Non-finite text ("inf", "nan")
/// raises DomainError; anything else unparseable raises ConfigError.
ExactReal parse_exact_real(std::string_view text);

/// Comma-separated coordinates, e.g. "0,0" or "pi/16".
std::vector<ExactReal> parse_point(std::string_view text);
std::string point_to_string(const std::vector<ExactReal>& p);

/// floor(pi * scale) up to an additive error of a few units.
BigInt pi_scaled(const BigInt& scale);

}  // namespace repp
