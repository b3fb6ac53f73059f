#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqh/system.hpp"

namespace sqh {

enum class ParityCase { BothOdd, QEven };

inline const char* to_string(ParityCase c) {
  return c == ParityCase::BothOdd ? "both-odd" : "q-even";
}

// Coefficient form of the divisibility-reduced system
//   x' = sum_{i=0}^{[r1/p]} a_i x^{i q} y^{r1 - i p},
//   y' = sum_{j=0}^{[r2/q]} b_j x^{r2 - j q} y^{j p},
// with r1 = (p+m-1)/q, r2 = (q+n-1)/p, l1 = (r1+1)/2, l2 = (r2+1)/2.
struct NormalForm {
  WeightVector w;
  int r1 = 0, r2 = 0;
  int l1 = 0, l2 = 0;
  int m = 0, n = 0;
  std::vector<Rational> a;  // a[i] multiplies x^{i q} y^{r1 - i p}
  std::vector<Rational> b;  // b[j] multiplies x^{r2 - j q} y^{j p}
  ParityCase parity_case = ParityCase::BothOdd;

  int cap_a() const { return r1 / w.p; }
  int cap_b() const { return r2 / w.q; }
};

struct NoPeriodicOrbit {
  std::string code;     // decision-rule label, e.g. "thm1.2.i"
  std::string detail;   // violated condition
  std::string witness;  // exact invariant-line witness when applicable
};

using ScreenVerdict = std::variant<NoPeriodicOrbit, NormalForm>;

// The arithmetic part of the screen, usable without polynomials. Returns
// either the rejection or the (r1, r2, parity) frame.
struct ParamScreen {
  std::optional<NoPeriodicOrbit> rejection;
  int r1 = 0, r2 = 0;
  ParityCase parity_case = ParityCase::BothOdd;
};

inline ParamScreen screen_parameters(int p, int q, int m, int n) {
  ParamScreen out;
  if (p < 1 || q < 1 || m < 1 || n < 1) throw Error("screen_parameters: arguments must be positive");
  if (p % 2 == 0) throw Error("screen_parameters: convention requires p odd");
  if (m == n) throw EqualDegrees("m = n: quasi-homogeneous, out of class");
  if ((p + m - 1) % q != 0) {
    out.rejection = NoPeriodicOrbit{"thm1.2.i", "q does not divide p+m-1", "P(0,y) = 0, x = 0 invariant line"};
    return out;
  }
  if ((q + n - 1) % p != 0) {
    out.rejection = NoPeriodicOrbit{"thm1.2.i", "p does not divide q+n-1", "Q(x,0) = 0, y = 0 invariant line"};
    return out;
  }
  out.r1 = (p + m - 1) / q;
  out.r2 = (q + n - 1) / p;
  if (q % 2 == 1) {
    out.parity_case = ParityCase::BothOdd;
    if (m % 2 == 0) out.rejection = NoPeriodicOrbit{"thm1.2.ii.1", "m is even", ""};
    else if (n % 2 == 0) out.rejection = NoPeriodicOrbit{"thm1.2.ii.1", "n is even", ""};
    else if (out.r1 % 2 == 0) out.rejection = NoPeriodicOrbit{"thm1.2.ii.1", "r1 is even", ""};
    else if (out.r2 % 2 == 0) out.rejection = NoPeriodicOrbit{"thm1.2.ii.1", "r2 is even", ""};
  } else {
    out.parity_case = ParityCase::QEven;
    if (n % 2 == 1) out.rejection = NoPeriodicOrbit{"lemma3.2", "q is even and n is odd: the flow on y = 0 has constant direction", ""};
    else if (m % 2 == 1) out.rejection = NoPeriodicOrbit{"thm1.2.ii.2", "m is odd", ""};
    else if (out.r1 % 2 == 0) out.rejection = NoPeriodicOrbit{"thm1.2.ii.2", "r1 is even: the flow on x = 0 has constant direction", ""};
    else if (out.r2 % 2 == 0) out.rejection = NoPeriodicOrbit{"thm1.2.ii.2", "r2 is even", ""};
  }
  return out;
}

// Full nonexistence/normal-form screen. Divisibility failures, parity
// violations and a vanishing a_0 or b_0 (invariant axis) each reject with
// the specific violated condition; otherwise the coefficient form of the
// system is returned.
inline ScreenVerdict existence_screen(const SemiQHSystem& s) {
  const int p = s.w.p, q = s.w.q;
  const ParamScreen ps = screen_parameters(p, q, s.m, s.n);
  if (ps.rejection) return *ps.rejection;

  NormalForm nf;
  nf.w = s.w;
  nf.r1 = ps.r1;
  nf.r2 = ps.r2;
  nf.m = s.m;
  nf.n = s.n;
  nf.parity_case = ps.parity_case;
  nf.l1 = (nf.r1 + 1) / 2;
  nf.l2 = (nf.r2 + 1) / 2;
  nf.a.assign(nf.cap_a() + 1, Rational(0));
  nf.b.assign(nf.cap_b() + 1, Rational(0));
  for (const auto& [mono, c] : s.P.terms()) {
    if (mono.i % q != 0) throw NotQuasiHomogeneous("P has a term off the (iq, r1-ip) lattice");
    const int i = mono.i / q;
    if (i > nf.cap_a() || mono.j != nf.r1 - i * p)
      throw NotQuasiHomogeneous("P has a term off the (iq, r1-ip) lattice");
    nf.a[i] = c;
  }
  for (const auto& [mono, c] : s.Q.terms()) {
    if (mono.j % p != 0) throw NotQuasiHomogeneous("Q has a term off the (r2-jq, jp) lattice");
    const int j = mono.j / p;
    if (j > nf.cap_b() || mono.i != nf.r2 - j * q)
      throw NotQuasiHomogeneous("Q has a term off the (r2-jq, jp) lattice");
    nf.b[j] = c;
  }
  if (nf.b[0].is_zero())
    return NoPeriodicOrbit{"thm1.2.iii.b", "b0 = 0", "Q(x,0) = 0, y = 0 invariant line"};
  if (nf.a[0].is_zero())
    return NoPeriodicOrbit{"thm1.2.iii.b.sym", "a0 = 0", "P(0,y) = 0, x = 0 invariant line"};
  return nf;
}

inline Polynomial expand_normal_form_p(const NormalForm& nf) {
  Polynomial out;
  for (int i = 0; i <= nf.cap_a(); ++i)
    out.add_term(nf.a[i], i * nf.w.q, nf.r1 - i * nf.w.p);
  return out;
}

inline Polynomial expand_normal_form_q(const NormalForm& nf) {
  Polynomial out;
  for (int j = 0; j <= nf.cap_b(); ++j)
    out.add_term(nf.b[j], nf.r2 - j * nf.w.q, j * nf.w.p);
  return out;
}

}  // namespace sqh
