#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqh/rational.hpp"
#include "sqh/weights.hpp"

namespace sqh {

// Exponent pair of a monomial x^i y^j.
struct Monomial {
  int i = 0;
  int j = 0;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

// Sparse bivariate polynomial over the rationals. No stored coefficient is
// zero and the key order makes serialization deterministic.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;

  static Polynomial constant(Rational c) {
    Polynomial f;
    f.add_term(c, 0, 0);
    return f;
  }

  static Polynomial monomial(Rational c, int i, int j) {
    Polynomial f;
    f.add_term(c, i, j);
    return f;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Rational& c, int i, int j) {
    if (i < 0 || j < 0) throw Error("negative exponent in monomial");
    if (c.is_zero()) return;
    const Monomial key{i, j};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Rational coefficient(int i, int j) const {
    auto it = terms_.find(Monomial{i, j});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Polynomial& operator+=(const Polynomial& g) {
    for (const auto& [mono, c] : g.terms_) add_term(c, mono.i, mono.j);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& g) {
    for (const auto& [mono, c] : g.terms_) add_term(-c, mono.i, mono.j);
    return *this;
  }

  friend Polynomial operator+(Polynomial f, const Polynomial& g) { return f += g; }
  friend Polynomial operator-(Polynomial f, const Polynomial& g) { return f -= g; }

  Polynomial operator-() const {
    Polynomial out;
    for (const auto& [mono, c] : terms_) out.terms_.emplace(mono, -c);
    return out;
  }

  friend Polynomial operator*(const Polynomial& f, const Polynomial& g) {
    Polynomial out;
    for (const auto& [ma, ca] : f.terms_)
      for (const auto& [mb, cb] : g.terms_) out.add_term(ca * cb, ma.i + mb.i, ma.j + mb.j);
    return out;
  }

  friend Polynomial operator*(const Rational& c, const Polynomial& f) {
    Polynomial out;
    if (c.is_zero()) return out;
    for (const auto& [mono, coef] : f.terms_) out.terms_.emplace(mono, c * coef);
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Rational eval_exact(const Rational& x, const Rational& y) const {
    Rational out(0);
    for (const auto& [mono, c] : terms_)
      out += c * rational_pow(x, mono.i) * rational_pow(y, mono.j);
    return out;
  }

  double eval(double x, double y) const {
    double out = 0;
    for (const auto& [mono, c] : terms_) {
      double t = to_double(c);
      for (int k = 0; k < mono.i; ++k) t *= x;
      for (int k = 0; k < mono.j; ++k) t *= y;
      out += t;
    }
    return out;
  }

  int degree_x() const {
    int d = -1;
    for (const auto& [mono, c] : terms_) d = std::max(d, mono.i);
    return d;
  }

  int degree_y() const {
    int d = -1;
    for (const auto& [mono, c] : terms_) d = std::max(d, mono.j);
    return d;
  }

  Polynomial reflect_x() const {  // x -> -x
    Polynomial out;
    for (const auto& [mono, c] : terms_)
      out.terms_.emplace(mono, mono.i % 2 == 0 ? c : -c);
    return out;
  }

  Polynomial reflect_y() const {  // y -> -y
    Polynomial out;
    for (const auto& [mono, c] : terms_)
      out.terms_.emplace(mono, mono.j % 2 == 0 ? c : -c);
    return out;
  }

  Polynomial swap_xy() const {
    Polynomial out;
    for (const auto& [mono, c] : terms_) out.terms_.emplace(Monomial{mono.j, mono.i}, c);
    return out;
  }

  // Scale so that the leading monomial (largest in key order) has
  // coefficient one; the zero polynomial stays zero.
  Polynomial normalized() const {
    if (terms_.empty()) return {};
    const Rational lead = terms_.rbegin()->second;
    Polynomial out;
    for (const auto& [mono, c] : terms_) out.terms_.emplace(mono, c / lead);
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [mono, c] = *it;
      const bool neg = c.sign() < 0;
      if (first) {
        if (neg) os << "-";
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      const Rational mag = neg ? Rational(-c) : c;
      const bool has_vars = mono.i > 0 || mono.j > 0;
      if (!has_vars || mag != 1) {
        os << to_string(mag);
        if (has_vars) os << "*";
      }
      if (mono.i > 0) {
        os << "x";
        if (mono.i > 1) os << "^" << mono.i;
        if (mono.j > 0) os << "*";
      }
      if (mono.j > 0) {
        os << "y";
        if (mono.j > 1) os << "^" << mono.j;
      }
    }
    return os.str();
  }

 private:
  TermMap terms_;
};

namespace detail {

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : s_(text) {}

  Polynomial parse() {
    Polynomial out;
    skip_ws();
    if (at_end()) throw ParseError(pos_, "empty polynomial");
    int sign = 1;
    if (match_sign(sign)) skip_ws();
    out += parse_term(sign);
    skip_ws();
    while (!at_end()) {
      int s = 1;
      if (!match_sign(s)) throw ParseError(pos_, "expected '+' or '-' between terms");
      skip_ws();
      out += parse_term(s);
      skip_ws();
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }

  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  // ASCII '-' or the UTF-8 minus sign U+2212.
  bool match_sign(int& sign) {
    if (peek() == '+') {
      sign = 1;
      ++pos_;
      return true;
    }
    if (peek() == '-') {
      sign = -1;
      ++pos_;
      return true;
    }
    if (pos_ + 2 < s_.size() && static_cast<unsigned char>(s_[pos_]) == 0xE2 &&
        static_cast<unsigned char>(s_[pos_ + 1]) == 0x88 &&
        static_cast<unsigned char>(s_[pos_ + 2]) == 0x92) {
      sign = -1;
      pos_ += 3;
      return true;
    }
    return false;
  }

  std::string read_digits() {
    std::string digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      digits.push_back(s_[pos_]);
      ++pos_;
    }
    return digits;
  }

  Rational parse_coefficient() {
    const std::string whole = read_digits();
    if (!at_end() && peek() == '/') {
      ++pos_;
      skip_ws();
      const std::size_t den_pos = pos_;
      const std::string den = read_digits();
      if (den.empty()) throw ParseError(den_pos, "expected a denominator");
      const BigInt d(den);
      if (d == 0) throw ParseError(den_pos, "non-rational coefficient: zero denominator");
      return Rational(BigInt(whole), d);
    }
    if (!at_end() && peek() == '.') {
      ++pos_;
      const std::size_t frac_pos = pos_;
      const std::string frac = read_digits();
      if (frac.empty()) throw ParseError(frac_pos, "expected digits after decimal point");
      BigInt scale(1);
      for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
      return Rational(BigInt(whole) * scale + BigInt(frac), scale);
    }
    return Rational(BigInt(whole));
  }

  int parse_exponent() {
    skip_ws();
    int dummy = 1;
    const std::size_t at = pos_;
    if (match_sign(dummy)) {
      if (dummy < 0) throw ParseError(at, "negative exponent");
      throw ParseError(at, "expected an unsigned exponent");
    }
    const std::string digits = read_digits();
    if (digits.empty()) throw ParseError(pos_, "expected an exponent");
    if (digits.size() > 6) throw ParseError(at, "exponent too large");
    return std::stoi(digits);
  }

  Polynomial parse_term(int sign) {
    Rational coeff(sign);
    bool saw_anything = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff *= parse_coefficient();
      saw_anything = true;
    }
    int ex = 0, ey = 0;
    for (;;) {
      skip_ws();
      std::size_t mark = pos_;
      bool star = false;
      if (peek() == '*') {
        star = true;
        ++pos_;
        skip_ws();
      }
      if (peek() == 'x' || peek() == 'y') {
        const char var = peek();
        ++pos_;
        int e = 1;
        skip_ws();
        if (peek() == '^') {
          ++pos_;
          e = parse_exponent();
        }
        (var == 'x' ? ex : ey) += e;
        saw_anything = true;
      } else {
        if (star) throw ParseError(pos_, "expected a variable after '*'");
        pos_ = mark;
        break;
      }
    }
    if (!saw_anything) throw ParseError(pos_, "expected a coefficient or variable");
    Polynomial t;
    t.add_term(coeff, ex, ey);
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Term grammar: [sign] coeff? ('*'? var ('^' uint)?)*, terms joined by
// '+'/'-'; coeff is an integer, integer/positive-integer, or decimal;
// whitespace is ignored. Both ASCII '-' and U+2212 are accepted.
inline Polynomial parse_polynomial(std::string_view text) {
  return detail::PolynomialParser(text).parse();
}

// Weighted degree d with p*i + q*j = d for every stored term, i.e.
// f(s^p x, s^q y) = s^d f(x, y). Throws when terms disagree.
inline int weighted_degree(const Polynomial& f, const WeightVector& w) {
  if (f.is_zero()) throw Error("weighted_degree: zero polynomial");
  int d = -1;
  for (const auto& [mono, c] : f.terms()) {
    const int t = w.p * mono.i + w.q * mono.j;
    if (d < 0) {
      d = t;
    } else if (t != d) {
      throw NotQuasiHomogeneous("terms of weighted degrees " + std::to_string(d) + " and " +
                                std::to_string(t) + " mixed");
    }
  }
  return d;
}

namespace detail {

using YPoly = std::vector<Rational>;   // dense in y
using XYPoly = std::vector<YPoly>;     // [k] = coefficient of x^k

inline void ytrim(YPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline bool yzero(const YPoly& a) { return a.empty(); }

inline int ydeg(const YPoly& a) { return static_cast<int>(a.size()) - 1; }

inline YPoly ymul(const YPoly& a, const YPoly& b) {
  if (yzero(a) || yzero(b)) return {};
  YPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  ytrim(out);
  return out;
}

inline YPoly yscale(const YPoly& a, const Rational& c) {
  if (c.is_zero()) return {};
  YPoly out = a;
  for (auto& v : out) v *= c;
  return out;
}

inline YPoly ysub(const YPoly& a, const YPoly& b) {
  YPoly out = a;
  if (out.size() < b.size()) out.resize(b.size(), Rational(0));
  for (std::size_t k = 0; k < b.size(); ++k) out[k] -= b[k];
  ytrim(out);
  return out;
}

// Quotient of a by b; throws unless the division is exact.
inline YPoly ydivexact(const YPoly& a, const YPoly& b) {
  if (yzero(b)) throw Error("polynomial division by zero");
  YPoly rem = a;
  YPoly quot(a.size(), Rational(0));
  while (!yzero(rem) && ydeg(rem) >= ydeg(b)) {
    const int shift = ydeg(rem) - ydeg(b);
    const Rational c = rem.back() / b.back();
    quot[shift] += c;
    YPoly scaled(shift, Rational(0));
    for (const auto& v : b) scaled.push_back(c * v);
    rem = ysub(rem, scaled);
  }
  if (!yzero(rem)) throw Error("polynomial division was not exact");
  ytrim(quot);
  return quot;
}

inline YPoly ymod(YPoly a, const YPoly& b) {
  while (!yzero(a) && ydeg(a) >= ydeg(b)) {
    const int shift = ydeg(a) - ydeg(b);
    const Rational c = a.back() / b.back();
    YPoly scaled(shift, Rational(0));
    for (const auto& v : b) scaled.push_back(c * v);
    a = ysub(a, scaled);
  }
  return a;
}

inline YPoly ymonic(YPoly a) {
  ytrim(a);
  if (yzero(a)) return a;
  const Rational lead = a.back();
  for (auto& v : a) v /= lead;
  return a;
}

inline YPoly ygcd(YPoly a, YPoly b) {
  ytrim(a);
  ytrim(b);
  while (!yzero(b)) {
    YPoly r = ymod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return ymonic(a);
}

inline void xtrim(XYPoly& a) {
  while (!a.empty() && yzero(a.back())) a.pop_back();
}

inline bool xzero(const XYPoly& a) { return a.empty(); }

inline int xdeg(const XYPoly& a) { return static_cast<int>(a.size()) - 1; }

inline XYPoly to_xy(const Polynomial& f) {
  XYPoly out;
  for (const auto& [mono, c] : f.terms()) {
    if (static_cast<int>(out.size()) <= mono.i) out.resize(mono.i + 1);
    YPoly& coeff = out[mono.i];
    if (static_cast<int>(coeff.size()) <= mono.j) coeff.resize(mono.j + 1, Rational(0));
    coeff[mono.j] = c;
  }
  for (auto& coeff : out) ytrim(coeff);
  xtrim(out);
  return out;
}

inline Polynomial from_xy(const XYPoly& a) {
  Polynomial out;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      out.add_term(a[i][j], static_cast<int>(i), static_cast<int>(j));
  return out;
}

inline YPoly xcontent(const XYPoly& a) {
  YPoly c;
  for (const auto& coeff : a)
    if (!yzero(coeff)) c = ygcd(c, coeff);
  return c;
}

inline XYPoly xprimitive(const XYPoly& a, const YPoly& content) {
  XYPoly out = a;
  for (auto& coeff : out)
    if (!yzero(coeff)) coeff = ydivexact(coeff, content);
  return out;
}

inline XYPoly xmul_ypoly(const XYPoly& a, const YPoly& c) {
  XYPoly out = a;
  for (auto& coeff : out) coeff = ymul(coeff, c);
  xtrim(out);
  return out;
}

inline XYPoly xsub(const XYPoly& a, const XYPoly& b) {
  XYPoly out = a;
  if (out.size() < b.size()) out.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) out[k] = ysub(out[k], b[k]);
  xtrim(out);
  return out;
}

// Pseudo-remainder of a by b in (Q[y])[x].
inline XYPoly xprem(XYPoly r, const XYPoly& b) {
  if (xzero(b)) throw Error("pseudo-division by zero");
  if (xdeg(b) == 0) return {};
  const YPoly& lead_b = b.back();
  while (!xzero(r) && xdeg(r) >= xdeg(b)) {
    const int shift = xdeg(r) - xdeg(b);
    const YPoly lead_r = r.back();
    XYPoly shifted(shift);
    for (const auto& coeff : b) shifted.push_back(coeff);
    r = xsub(xmul_ypoly(r, lead_b), xmul_ypoly(shifted, lead_r));
  }
  return r;
}

}  // namespace detail

// Exact gcd over Q[x,y] via a primitive pseudo-remainder sequence in
// (Q[y])[x], with contents split off first. The result is normalized so the
// leading monomial has coefficient one.
inline Polynomial gcd(const Polynomial& A, const Polynomial& B) {
  using namespace detail;
  if (A.is_zero()) return B.normalized();
  if (B.is_zero()) return A.normalized();
  XYPoly a = to_xy(A);
  XYPoly b = to_xy(B);
  const YPoly ca = xcontent(a);
  const YPoly cb = xcontent(b);
  a = xprimitive(a, ca);
  b = xprimitive(b, cb);
  if (xdeg(a) < xdeg(b)) std::swap(a, b);
  while (!xzero(b)) {
    XYPoly r = xprem(a, b);
    a = std::move(b);
    if (xzero(r)) {
      b = {};
    } else {
      b = xprimitive(r, xcontent(r));
    }
  }
  const YPoly content_gcd = ygcd(ca, cb);
  Polynomial content_part;
  for (std::size_t j = 0; j < content_gcd.size(); ++j)
    content_part.add_term(content_gcd[j], 0, static_cast<int>(j));
  return (from_xy(a) * content_part).normalized();
}

// True iff gcd(A, B) is a nonzero constant.
inline bool coprime(const Polynomial& A, const Polynomial& B) {
  if (A.is_zero() || B.is_zero()) throw Error("coprime: zero polynomial");
  const Polynomial g = gcd(A, B);
  return g.degree_x() == 0 && g.degree_y() == 0;
}

}  // namespace sqh
