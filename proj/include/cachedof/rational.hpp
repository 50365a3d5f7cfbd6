// Exact rational numbers and their text forms.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "cachedof/errors.hpp"

namespace cachedof {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

inline BigInt floor_of(const Rational& q) {
  BigInt n = numerator_of(q);
  BigInt d = denominator_of(q);
  BigInt f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

inline BigInt ceil_of(const Rational& q) {
  BigInt f = floor_of(q);
  return (Rational(f) == q) ? f : f + 1;
}

/// Converts an integral rational to int64, throwing if it is not integral or does not fit.
inline std::int64_t to_int64(const Rational& q, std::string_view what) {
  if (!is_integer(q)) throw non_integer_t(std::string(what) + " must be an integer");
  BigInt n = numerator_of(q);
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
    throw out_of_range(std::string(what) + " does not fit in 64 bits");
  return static_cast<std::int64_t>(n);
}

/// "num/den", always with the denominator.
inline std::string to_fraction_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

/// Parses "3", "-2", "0.25", "1e-3", "3/4" or "1.5/2" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { return out_of_range("cannot parse number '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw bad();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  std::int64_t scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --scale;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw bad();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw bad();
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) throw bad();
    std::int64_t exponent = 0;
    for (; pos < text.size(); ++pos) {
      char c = text[pos];
      if (c < '0' || c > '9' || exponent > 100000) throw bad();
      exponent = exponent * 10 + (c - '0');
    }
    scale += exp_negative ? -exponent : exponent;
  }
  Rational value(mantissa);
  BigInt ten_power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  value = scale < 0 ? value / Rational(ten_power) : value * Rational(ten_power);
  return negative ? Rational(-value) : value;
}

/// Fixed-point decimal with `significant` significant digits, half away from zero,
/// trailing zeros trimmed ("2.7", "100", "72.6607").
inline std::string to_decimal_string(const Rational& q, int significant = 6) {
  if (significant < 1) significant = 1;
  if (q == 0) return "0";
  bool negative = q < 0;
  Rational x = negative ? Rational(-q) : q;

  // exponent e with 10^e <= x < 10^(e+1)
  int e = 0;
  Rational probe(1);
  while (probe * 10 <= x) {
    probe *= 10;
    ++e;
  }
  while (probe > x) {
    probe /= 10;
    --e;
  }

  int shift = significant - 1 - e;  // digits after the decimal point
  Rational scaled = x;
  BigInt p10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
  scaled = shift >= 0 ? scaled * Rational(p10) : scaled / Rational(p10);
  BigInt digits = floor_of(scaled + Rational(1, 2));

  std::string s;
  if (shift <= 0) {
    s = digits.str();
    if (shift < 0) s += std::string(static_cast<std::size_t>(-shift), '0');
  } else {
    std::string raw = digits.str();
    if (raw.size() <= static_cast<std::size_t>(shift))
      raw = std::string(static_cast<std::size_t>(shift) - raw.size() + 1, '0') + raw;
    s = raw.substr(0, raw.size() - shift) + "." + raw.substr(raw.size() - shift);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return negative ? "-" + s : s;
}

}  // namespace cachedof
