#include "repp/exact_real.hpp"

#include "repp/errors.hpp"
#include "repp/kv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace repp {

namespace {

BigInt ipow(long long base, int exp) {
  BigInt r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// arctan(1/x) * scale by the alternating series, truncating each term.
BigInt arctan_inv(long long x, const BigInt& scale) {
  const BigInt x2 = BigInt(x) * x;
  BigInt power = scale / x;
  BigInt sum = power;
  for (long long k = 1; power != 0; ++k) {
    power /= x2;
    const BigInt term = power / (2 * k + 1);
    if (k % 2 == 1)
      sum -= term;
    else
      sum += term;
  }
  return sum;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

constexpr int kGuardDigits = 12;

}  // namespace

BigInt pi_scaled(const BigInt& scale) {
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
  return 16 * arctan_inv(5, scale) - 4 * arctan_inv(239, scale);
}

double ExactReal::to_double() const {
  const double c = repp::to_double(coef);
  return times_pi ? c * std::numbers::pi : c;
}

Rational ExactReal::approx(int digits) const {
  if (is_rational()) return coef;
  const BigInt scale = ipow(10, digits + kGuardDigits);
  const BigInt num = boost::multiprecision::numerator(coef);
  const BigInt den = boost::multiprecision::denominator(coef);
  const BigInt v = floor_div(num * pi_scaled(scale), den);
  return Rational(v) / Rational(scale);
}

std::vector<std::uint8_t> ExactReal::digits(int base, int count) const {
  if (base < 2) throw DomainError("digit base must be at least 2");
  if (count < 0 || count > kMaxDigits)
    throw ResolutionError("requested " + std::to_string(count) +
                          " digits; the hard cap is " + std::to_string(kMaxDigits));
  const int total = count + (times_pi ? kGuardDigits : 0);
  const BigInt scale = ipow(base, total);
  const BigInt num = boost::multiprecision::numerator(coef);
  const BigInt den = boost::multiprecision::denominator(coef);
  BigInt v = times_pi ? floor_div(num * pi_scaled(scale), den) : floor_div(num * scale, den);
  v %= scale;
  if (v < 0) v += scale;
  if (times_pi) v /= ipow(base, kGuardDigits);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(count));
  for (int i = count - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((v % base).convert_to<int>());
    v /= base;
  }
  return out;
}

std::string ExactReal::to_string() const {
  if (!times_pi) return repp::to_string(coef);
  const BigInt num = boost::multiprecision::numerator(coef);
  const BigInt den = boost::multiprecision::denominator(coef);
  std::string s = num == 1 ? "pi" : (num == -1 ? "-pi" : num.str() + "*pi");
  if (den != 1) s += "/" + den.str();
  return s;
}

ExactReal parse_exact_real(std::string_view raw) {
  std::string text = trim(raw);
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.find("inf") != std::string::npos || lower.find("nan") != std::string::npos)
    throw DomainError("coordinate '" + text + "' is not finite");
  const auto pi = lower.find("pi");
  if (pi == std::string::npos) return ExactReal::rational(parse_rational(text));

  std::string head = trim(std::string_view(lower).substr(0, pi));
  std::string tail = trim(std::string_view(lower).substr(pi + 2));
  if (!head.empty() && head.back() == '*') head = trim(std::string_view(head).substr(0, head.size() - 1));
  Rational coef(1);
  if (head == "-")
    coef = -1;
  else if (!head.empty() && head != "+")
    coef = parse_rational(head);
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError("malformed coordinate '" + text + "'");
    const Rational den = parse_rational(tail.substr(1));
    if (den == 0) throw DomainError("zero denominator in '" + text + "'");
    coef /= den;
  }
  return ExactReal::pi_multiple(coef);
}

std::vector<ExactReal> parse_point(std::string_view text) {
  std::vector<ExactReal> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_exact_real(part));
  return out;
}

std::string point_to_string(const std::vector<ExactReal>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += p[i].to_string();
  }
  return s;
}

}  // namespace repp
