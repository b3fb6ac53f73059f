#pragma once

#include "sqh/polynomial.hpp"

namespace sqh {

// A validated pair of (p,q)-quasi-homogeneous polynomials of weighted
// degrees p-1+m and q-1+n with m != n, reduced so that p is odd and
// gcd(p,q) = 1. When the reduction had to exchange the roles of x and y to
// restore the convention, swapped_xy records it so reports can refer to the
// original coordinates.
struct SemiQHSystem {
  Polynomial P, Q;
  WeightVector w;
  int m = 0;
  int n = 0;
  bool swapped_xy = false;
};

inline SemiQHSystem classify_system(const Polynomial& P, const Polynomial& Q,
                                    const WeightVector& w) {
  if (P.is_zero() || Q.is_zero()) throw Error("classify_system: zero polynomial");
  const int dp = weighted_degree(P, w);
  const int dq = weighted_degree(Q, w);
  const int m = dp - w.p + 1;
  const int n = dq - w.q + 1;
  if (m < 1)
    throw NotQuasiHomogeneous("weighted degree of P is below p; no valid m");
  if (n < 1)
    throw NotQuasiHomogeneous("weighted degree of Q is below q; no valid n");
  if (m == n)
    throw EqualDegrees("m = n = " + std::to_string(m) +
                       ": quasi-homogeneous, out of class");
  if (!coprime(P, Q)) throw NotCoprime("P and Q share a nonconstant factor");

  const ReducedWeights r = reduce_weights(w.p, w.q, m, n);
  SemiQHSystem s;
  if (r.p % 2 == 0) {
    // q' is odd since gcd(p', q') = 1; exchange x and y to make p odd.
    s.P = Q.swap_xy();
    s.Q = P.swap_xy();
    s.w = WeightVector(r.q, r.p);
    s.m = r.n;
    s.n = r.m;
    s.swapped_xy = true;
  } else {
    s.P = P;
    s.Q = Q;
    s.w = WeightVector(r.p, r.q);
    s.m = r.m;
    s.n = r.n;
  }
  return s;
}

}  // namespace sqh
