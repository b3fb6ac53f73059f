#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sqh/melnikov.hpp"
#include "sqh/normal_form.hpp"

namespace sqh {

// kappa = [r1/p] when that is odd, [r1/p] - 1 otherwise.
inline int kappa_threshold(int r1, int p) {
  if (p < 1 || p % 2 == 0) throw Error("kappa_threshold: p must be a positive odd integer");
  if (r1 < 1 || r1 % 2 == 0) throw Error("kappa_threshold: r1 must be a positive odd integer");
  const int cap = r1 / p;
  return cap % 2 == 1 ? cap : cap - 1;
}

// The one-coefficient-column family
//   x' = sum_{i=0}^{[r1/p]} a_i x^{iq} y^{r1-ip},   y' = b0 x^{r2}
// with r1 > r2, m > n and a0 b0 < 0.
struct CenterFamily {
  WeightVector w;
  int r1 = 0, r2 = 0;
  std::vector<Rational> a;  // a[i] multiplies x^{iq} y^{r1-ip}
  Rational b0;

  int m() const { return w.q * r1 - w.p + 1; }
  int n() const { return w.p * r2 - w.q + 1; }
  int l1() const { return (r1 + 1) / 2; }
  int l2() const { return (r2 + 1) / 2; }
  int cap() const { return r1 / w.p; }
};

namespace detail {

inline void check_center_family(const CenterFamily& f) {
  if (!satisfies_convention(f.w)) throw Error("weights violate the convention (p odd, coprime)");
  if (f.w.q % 2 == 0) throw Error("center family requires the both-odd parity case");
  if (f.r1 % 2 == 0 || f.r2 % 2 == 0) throw Error("center family requires r1, r2 odd");
  if (!(f.r1 > f.r2)) throw Error("center family requires r1 > r2");
  if (!(f.m() > f.n())) throw Error("center family requires m > n");
  if (static_cast<int>(f.a.size()) != f.cap() + 1)
    throw Error("coefficient vector must have [r1/p]+1 entries");
  if (Rational(f.a[0] * f.b0).sign() >= 0) throw Error("center family requires a0 b0 < 0");
  // (p+m-1)/q integral by construction: q r1 = p+m-1.
}

}  // namespace detail

// Normalizing rescaling of the proof: with a0 < 0, b0 > 0 the substitution
// xb = b0^{1/(r2+1)} x, yb = (-a0)^{1/(r1+1)} y, tau = (-a0)^{1/(r1+1)} b0^{1/(r2+1)} t
// sends the family to xb' = -yb^{r1} + sum_{i>=1} abar_i xb^{iq} yb^{r1-ip},
// yb' = xb^{r2} with abar_i = a_i (-a0)^{ip/(r1+1)-1} b0^{-iq/(r2+1)}.
inline double rescaled_coefficient(const CenterFamily& f, int i) {
  detail::check_center_family(f);
  if (f.a[0].sign() >= 0) throw Error("rescaled_coefficient expects the a0 < 0 orientation");
  if (i < 1 || i > f.cap()) throw Error("rescaled_coefficient: index out of range");
  const double neg_a0 = to_double(-f.a[0]);
  const double b0 = to_double(f.b0);
  return to_double(f.a[i]) *
         std::pow(neg_a0, static_cast<double>(i) * f.w.p / (f.r1 + 1) - 1.0) *
         std::pow(b0, -static_cast<double>(i) * f.w.q / (f.r2 + 1));
}

struct CenterVerdict {
  enum class Kind { Center, WeakFocus, Undetermined };
  enum class CenterReason { Symmetry, OddCoeffsVanish };

  Kind kind = Kind::Undetermined;
  std::optional<CenterReason> reason;
  int order_index = 0;          // i with abar_{2i-1} the first nonzero odd coefficient
  int stability_sign = 0;       // +1 repelling, -1 attracting
  int producible_cycles = 0;    // order_index - 1
  int kappa = 0;
  int cyclicity = 0;
  double leading_coefficient = 0;  // abar_{2i-1} for a weak focus
  double divergence_value = 0;     // I_{2i-1}
  std::string code;
};

// Center/weak-focus decision for the family above. The origin is a center
// exactly when every odd coefficient a_1, a_3, ..., a_kappa vanishes;
// otherwise the first surviving odd slot 2i-1 makes a weak focus of order i
// whose stability is the sign of the radial displacement near the origin,
// sign(abar_{2i-1}) in the a0 < 0, b0 > 0 orientation (time reversal flips
// it for the mirrored orientation). Cyclicity of the center is (kappa-1)/2.
inline CenterVerdict center_at_origin(const CenterFamily& fam, const MomentTable& mt) {
  detail::check_center_family(fam);
  if (mt.params() != TrigParams(fam.l1(), fam.l2()))
    throw Error("moment table parameters do not match the family");

  CenterVerdict v;
  v.kappa = kappa_threshold(fam.r1, fam.w.p);
  v.cyclicity = (v.kappa - 1) / 2;

  const bool reversed = fam.a[0].sign() > 0;  // a0 > 0, b0 < 0: run time backwards
  CenterFamily canon = fam;
  if (reversed) {
    for (auto& c : canon.a) c = -c;
    canon.b0 = -canon.b0;
  }

  int first_odd = 0;
  for (int i = 1; i <= canon.cap(); i += 2) {
    if (!canon.a[i].is_zero()) {
      first_odd = i;
      break;
    }
  }
  if (first_odd == 0) {
    v.kind = CenterVerdict::Kind::Center;
    v.reason = CenterVerdict::CenterReason::OddCoeffsVanish;
    v.code = "thm1.3.i";
    return v;
  }
  v.kind = CenterVerdict::Kind::WeakFocus;
  v.order_index = (first_odd + 1) / 2;
  v.producible_cycles = v.order_index - 1;
  v.code = "thm1.3.ii";
  v.leading_coefficient = rescaled_coefficient(canon, first_odd);
  v.divergence_value =
      -mt(fam.r1 - first_odd * fam.w.p, first_odd * fam.w.q + 2 * fam.l2() - 1);
  // sign(b_i I_i) with Z_i = -x^{iq} y^{r1-ip} d/dx, hence b_i = -abar_i:
  // positive means repelling. Time reversal flips the observed stability.
  int s = v.leading_coefficient > 0 ? 1 : -1;
  if (reversed) s = -s;
  v.stability_sign = s;
  return v;
}

// Exact reflection test used by the symmetry-forced center arguments:
// P(-x, y) = P(x, y) and Q(-x, y) = -Q(x, y).
inline bool symmetry_center_check(const NormalForm& nf) {
  const Polynomial P = expand_normal_form_p(nf);
  const Polynomial Q = expand_normal_form_q(nf);
  return P.reflect_x() == P && Q.reflect_x() == -Q;
}

struct LocalType {
  enum class Kind {
    TopologicalSaddle,
    UnstableNode,
    StableNode,
    SaddleNode,
    Center,
    Focus,
    Undetermined
  };
  Kind kind = Kind::Undetermined;
  std::string witness;
  std::string code;
};

inline const char* to_string(LocalType::Kind k) {
  switch (k) {
    case LocalType::Kind::TopologicalSaddle: return "topological saddle";
    case LocalType::Kind::UnstableNode: return "unstable node";
    case LocalType::Kind::StableNode: return "stable node";
    case LocalType::Kind::SaddleNode: return "saddle-node";
    case LocalType::Kind::Center: return "center";
    case LocalType::Kind::Focus: return "focus";
    case LocalType::Kind::Undetermined: return "undetermined";
  }
  return "?";
}

namespace detail {

using Series = std::vector<Rational>;  // truncated power series in x

inline Series series_mul(const Series& a, const Series& b, int order) {
  Series out(order + 1, Rational(0));
  for (int i = 0; i <= order; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= order; ++j) {
      if (b[j].is_zero()) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

// f(x, g(x)) truncated at the given order, for polynomial f and series g.
inline Series compose_series(const Polynomial& f, const Series& g, int order) {
  Series out(order + 1, Rational(0));
  const int max_j = f.degree_y();
  std::vector<Series> g_pow;
  g_pow.reserve(max_j + 1);
  Series one(order + 1, Rational(0));
  one[0] = 1;
  g_pow.push_back(one);
  for (int j = 1; j <= max_j; ++j) g_pow.push_back(series_mul(g_pow.back(), g, order));
  for (const auto& [mono, c] : f.terms()) {
    if (mono.i > order) continue;
    const Series& gp = g_pow[mono.j];
    for (int k = 0; mono.i + k <= order; ++k) {
      if (gp[k].is_zero()) continue;
      out[mono.i + k] += c * gp[k];
    }
  }
  return out;
}

}  // namespace detail

// Semi-hyperbolic classification for x' = A(x,y), y' = lambda y + B(x,y)
// with lambda > 0 and A, B vanishing to second order: solve
// lambda y + B(x, y) = 0 for y = f(x) as a truncated series, expand
// A(x, f(x)) = c x^e + o(x^e), and decide saddle / node / saddle-node from
// the parity of e and the sign of c. Throws SeriesOrderExhausted when the
// expansion vanishes through max_order.
inline LocalType classify_degenerate(const Rational& lambda, const Polynomial& A,
                                     const Polynomial& B, int max_order = 40) {
  if (lambda.sign() <= 0) throw Error("classify_degenerate: lambda must be positive");
  for (const auto& [mono, c] : A.terms())
    if (mono.i + mono.j < 2) throw Error("A must vanish to second order at the origin");
  for (const auto& [mono, c] : B.terms())
    if (mono.i + mono.j < 2) throw Error("B must vanish to second order at the origin");

  detail::Series f(max_order + 1, Rational(0));
  for (int round = 0; round <= max_order; ++round) {
    detail::Series g = detail::compose_series(B, f, max_order);
    detail::Series next(max_order + 1, Rational(0));
    for (int k = 0; k <= max_order; ++k) next[k] = -g[k] / lambda;
    if (next == f) break;
    f = std::move(next);
  }

  const detail::Series expansion = detail::compose_series(A, f, max_order);
  int e = -1;
  for (int k = 0; k <= max_order; ++k) {
    if (!expansion[k].is_zero()) {
      e = k;
      break;
    }
  }
  if (e < 0)
    throw SeriesOrderExhausted("A(x, f(x)) vanishes through order " + std::to_string(max_order));

  const Rational c = expansion[e];
  LocalType out;
  out.witness = "A(x,f(x)) = " + to_string(c) + "*x^" + std::to_string(e) + " + ...";
  if (e % 2 == 1 && c.sign() < 0) {
    out.kind = LocalType::Kind::TopologicalSaddle;
    out.code = "thm2.4.i";
  } else if (e % 2 == 1) {
    out.kind = LocalType::Kind::UnstableNode;
    out.code = "thm2.4.ii";
  } else {
    out.kind = LocalType::Kind::SaddleNode;
    out.code = "thm2.4.iii";
  }
  return out;
}

// Local type at the origin for the m = 1 family
//   x' = a1 x + a0 y^p,   y' = sum_{j=0}^{n/p} b_j x^{n/p - j} y^{jp}
// with q = 1, n/p odd, and (P, Q) coprime.
inline LocalType local_type_m1(const Rational& a0, const Rational& a1,
                               const std::vector<Rational>& b, int p, int n) {
  if (p < 1 || p % 2 == 0) throw Error("local_type_m1: p must be a positive odd integer");
  if (n < 1 || n % p != 0) throw Error("local_type_m1: p must divide n");
  const int np = n / p;
  if (np % 2 == 0) throw Error("local_type_m1: n/p must be odd");
  if (static_cast<int>(b.size()) != np + 1)
    throw Error("local_type_m1: b must have n/p + 1 entries");
  if (a0.is_zero() && a1.is_zero()) throw Error("local_type_m1: P vanishes");

  Polynomial P;
  P.add_term(a1, 1, 0);
  P.add_term(a0, 0, p);
  Polynomial Q;
  for (int j = 0; j <= np; ++j) Q.add_term(b[j], np - j, j * p);
  if (Q.is_zero()) throw Error("local_type_m1: Q vanishes");
  if (!coprime(P, Q)) throw NotCoprime("local_type_m1: P and Q share a factor");

  LocalType out;
  if (a0.is_zero()) {
    // Coprimality forces b_{n/p} != 0.
    const int sa = a1.sign(), sb = b[np].sign();
    if (sa * sb < 0) {
      out.kind = LocalType::Kind::TopologicalSaddle;
      out.code = "thm1.4.i";
      out.witness = "a0 = 0, a1*b_{n/p} < 0";
    } else {
      out.kind = sa > 0 ? LocalType::Kind::UnstableNode : LocalType::Kind::StableNode;
      out.code = "thm1.4.i";
      out.witness = "a0 = 0, sign(a1) = sign(b_{n/p})";
    }
    return out;
  }

  if (!a1.is_zero()) {
    Rational s(0);
    if (p == 1) {
      for (int j = 0; j <= n; ++j) {
        const Rational term = b[j] / (rational_pow(a0, j - 1) * rational_pow(a1, n - j + 1));
        s += (n - j) % 2 == 0 ? term : Rational(-term);
      }
    } else {
      const Rational ratio = -a0 / a1;
      Rational sum(0);
      for (int j = 0; j <= np; ++j) sum += b[j] * rational_pow(ratio, np - j);
      s = a1 * sum;
    }
    const char* branch = p == 1 ? "thm1.4.ii.a" : "thm1.4.ii.b";
    if (s.sign() > 0) {
      out.kind = a1.sign() > 0 ? LocalType::Kind::UnstableNode : LocalType::Kind::StableNode;
      out.code = std::string(branch) + ".1";
      out.witness = "S = " + to_string(s) + " > 0";
    } else if (s.sign() < 0) {
      out.kind = LocalType::Kind::TopologicalSaddle;
      out.code = std::string(branch) + ".2";
      out.witness = "S = " + to_string(s) + " < 0";
    } else {
      out.kind = LocalType::Kind::Undetermined;
      out.code = std::string(branch) + ".boundary";
      out.witness = "S = 0 sits outside the strict-inequality criteria";
    }
    return out;
  }

  // a1 = 0, a0 != 0
  if (Rational(a0 * b[0]).sign() < 0 && n > p * p) {
    bool odd_vanish = true;
    for (int j = 1; j <= np; j += 2)
      if (!b[j].is_zero()) odd_vanish = false;
    out.kind = odd_vanish ? LocalType::Kind::Center : LocalType::Kind::Focus;
    out.code = "thm1.4.iii";
    out.witness = odd_vanish ? "b_1 = b_3 = ... = b_{n/p} = 0" : "some odd b_j is nonzero";
    return out;
  }
  out.kind = LocalType::Kind::Undetermined;
  out.code = "thm1.4.out-of-scope";
  out.witness = "a1 = 0 with a0*b0 >= 0 or n <= p^2 is not covered";
  return out;
}

// The dual family at infinity:
//   x' = -y^{r1},   y' = x^{r2} + sum_{j=1}^{[r2/q]} b_j x^{r2-jq} y^{jp}.
struct InfinityFamily {
  WeightVector w;
  int r1 = 0, r2 = 0;
  std::vector<Rational> b;  // b[k] holds the coefficient of index k+1

  int m() const { return w.q * r1 - w.p + 1; }
  int n() const { return w.p * r2 - w.q + 1; }
  int cap() const { return r2 / w.q; }
  Rational b_coeff(int j) const {
    return j >= 1 && j <= static_cast<int>(b.size()) ? b[j - 1] : Rational(0);
  }
};

struct InfinityVerdict {
  enum class Kind { CenterAtInfinity, FocusAtInfinity };
  Kind kind = Kind::CenterAtInfinity;
  int mu = 0;
  int cyclicity = 0;
  int order_index = 0;     // i with b_{2i-1} the first nonzero odd coefficient
  int stability_sign = 0;  // sign(b_{2i-1}); orientation is reported empirically
  int bifurcating_orbits = 0;  // order_index - 1
  std::string code;
};

// A neighborhood of infinity is filled with periodic orbits exactly when
// b_1 = b_3 = ... = b_mu = 0 with mu = [r2/q] (or [r2/q]-1 when even);
// otherwise the first surviving odd slot gives the order, the sign of
// b_{2i-1} the stability (orientation convention left to the numerical
// oracle), and at most i-1 periodic orbits bifurcate from infinity.
// Cyclicity of infinity is (mu-1)/2.
inline InfinityVerdict infinity_analysis(const InfinityFamily& fam) {
  if (!satisfies_convention(fam.w)) throw Error("weights violate the convention");
  if (fam.w.q % 2 == 0 || fam.r1 % 2 == 0 || fam.r2 % 2 == 0)
    throw Error("infinity analysis requires the both-odd parity case");
  if (!(fam.r1 > fam.r2)) throw Error("infinity family requires r1 > r2");
  if (!(fam.m() > fam.n())) throw Error("infinity family requires m > n");
  if (static_cast<int>(fam.b.size()) > fam.cap())
    throw Error("more coefficients than the family admits");

  InfinityVerdict v;
  const int cap = fam.cap();
  v.mu = cap % 2 == 1 ? cap : cap - 1;
  v.cyclicity = (v.mu - 1) / 2;
  int first_odd = 0;
  for (int j = 1; j <= v.mu; j += 2) {
    if (!fam.b_coeff(j).is_zero()) {
      first_odd = j;
      break;
    }
  }
  if (first_odd == 0) {
    v.kind = InfinityVerdict::Kind::CenterAtInfinity;
    v.code = "thm1.5.i";
    return v;
  }
  v.kind = InfinityVerdict::Kind::FocusAtInfinity;
  v.order_index = (first_odd + 1) / 2;
  v.stability_sign = fam.b_coeff(first_odd).sign();
  v.bifurcating_orbits = v.order_index - 1;
  v.code = "thm1.5.ii";
  return v;
}

}  // namespace sqh
