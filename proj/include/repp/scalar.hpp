// Scalar helpers so interval arithmetic can run on doubles or exact rationals.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>
#include <string_view>

namespace repp {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                  boost::multiprecision::et_off>;

/// Parses "p", "p/q", or a finite decimal such as "0.375" or "-1.5e-3"
/// into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& r) {
  return boost::multiprecision::numerator(r).convert_to<double>() /
         boost::multiprecision::denominator(r).convert_to<double>();
}

inline double floor_scalar(double x) { return std::floor(x); }
inline Rational floor_scalar(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return Rational(q);
}

template <typename T>
T from_rational(const Rational& r);

template <>
inline double from_rational<double>(const Rational& r) {
  return to_double(r);
}
template <>
inline Rational from_rational<Rational>(const Rational& r) {
  return r;
}

template <typename T>
T from_int(long long v) {
  return T(v);
}

}  // namespace repp
