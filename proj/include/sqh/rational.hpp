#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "sqh/errors.hpp"

namespace sqh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline int sgn(const Rational& q) { return q.sign(); }

// base^e for integer e (negative allowed when base != 0).
inline Rational rational_pow(const Rational& base, int e) {
  if (e == 0) return Rational(1);
  if (base.is_zero()) {
    if (e < 0) throw Error("rational_pow: zero base with negative exponent");
    return Rational(0);
  }
  Rational b = base;
  int k = e;
  if (k < 0) {
    b = Rational(denominator(base), numerator(base));
    k = -k;
  }
  Rational out(1);
  while (k > 0) {
    if (k & 1) out *= b;
    b *= b;
    k >>= 1;
  }
  return out;
}

inline std::string to_string(const Rational& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Accepts "n", "-n", "n/d" (d > 0 after sign normalization) and exact
// decimals like "0.25". Anything else throws ParseError.
inline Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  const auto fail = [&](const std::string& msg) -> Rational {
    throw ParseError(pos, msg);
  };
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };

  skip_ws();
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  const auto read_digits = [&]() -> std::string {
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos]);
      ++pos;
    }
    return digits;
  };

  const std::string whole = read_digits();
  if (whole.empty()) return fail("expected a number");

  Rational value;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    const std::string den = read_digits();
    if (den.empty()) return fail("expected a denominator");
    const BigInt d(den);
    if (d == 0) return fail("zero denominator");
    value = Rational(BigInt(whole), d);
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::string frac = read_digits();
    if (frac.empty()) return fail("expected digits after decimal point");
    BigInt scale(1);
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    value = Rational(BigInt(whole) * scale + BigInt(frac), scale);
  } else {
    value = Rational(BigInt(whole));
  }
  skip_ws();
  if (pos != text.size()) return fail("trailing characters after number");
  return negative ? Rational(-value) : value;
}

}  // namespace sqh
