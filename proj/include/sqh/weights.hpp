#pragma once

#include <numeric>

#include "sqh/errors.hpp"

namespace sqh {

struct WeightVector {
  int p = 1;
  int q = 1;

  WeightVector() = default;
  WeightVector(int p_, int q_) : p(p_), q(q_) {
    if (p < 1 || q < 1) throw Error("weights must be positive");
  }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

// The convention used throughout: p odd and gcd(p, q) = 1.
inline bool satisfies_convention(const WeightVector& w) {
  return w.p % 2 == 1 && std::gcd(w.p, w.q) == 1;
}

struct ReducedWeights {
  int p = 1, q = 1, m = 1, n = 1;
  friend bool operator==(const ReducedWeights&, const ReducedWeights&) = default;
};

// Collapses the common weight factor k = gcd(p, q): weights divide by k and
// the degree offsets shrink to m' = 1 + (m-1)/k, n' = 1 + (n-1)/k. For a
// genuine system k always divides m-1 and n-1; anything else is rejected.
inline ReducedWeights reduce_weights(int p, int q, int m, int n) {
  if (p < 1 || q < 1 || m < 1 || n < 1) throw Error("reduce_weights: arguments must be positive");
  const int k = std::gcd(p, q);
  if ((m - 1) % k != 0 || (n - 1) % k != 0)
    throw Error("reduce_weights: gcd(p,q) does not divide m-1 and n-1; not a valid system");
  return ReducedWeights{p / k, q / k, 1 + (m - 1) / k, 1 + (n - 1) / k};
}

}  // namespace sqh
