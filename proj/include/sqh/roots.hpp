#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sqh/errors.hpp"

namespace sqh {

struct PolyRoot {
  double x = 0;
  bool simple = true;
};

inline double poly_eval(const std::vector<double>& c, double x) {
  double out = 0;
  for (std::size_t k = c.size(); k-- > 0;) out = out * x + c[k];
  return out;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> out;
  for (std::size_t k = 1; k < c.size(); ++k) out.push_back(static_cast<double>(k) * c[k]);
  return out;
}

namespace detail {

inline double poly_scale(const std::vector<double>& c, double x) {
  double out = 0, xk = 1;
  for (double ck : c) {
    out += std::abs(ck) * xk;
    xk *= x;
  }
  return std::max(out, 1e-300);
}

// Safeguarded bisection/secant on a sign-change bracket: bisection on even
// iterations guarantees halving, the secant candidate accelerates the rest.
inline double refine_bracket(const std::vector<double>& c, double lo, double hi, double flo,
                             double fhi) {
  for (int iter = 0; iter < 160; ++iter) {
    const double width = hi - lo;
    double mid = 0.5 * (lo + hi);
    if (iter % 2 == 1 && fhi != flo) {
      const double secant = lo - flo * width / (fhi - flo);
      if (secant > lo && secant < hi) mid = secant;
    }
    const double fmid = poly_eval(c, mid);
    if (std::abs(fmid) <= 1e-13 * poly_scale(c, mid) ||
        width <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, mid))
      return mid;
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// All distinct real roots of the dense polynomial c[0] + c[1] x + ... in
// (0, inf), ascending. Roots found as sign changes between consecutive
// critical points are marked simple when the derivative stays away from
// zero at the root; roots sitting on critical points are flagged
// non-simple. Isolation recurses on the derivative, so every real root in
// the interval is bracketed.
inline std::vector<PolyRoot> positive_roots(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  while (!c.empty() && c.front() == 0.0) c.erase(c.begin());  // root at 0 is not positive
  std::vector<PolyRoot> out;
  if (c.size() <= 1) return out;
  if (c.size() == 2) {
    const double r = -c[0] / c[1];
    if (r > 0 && std::isfinite(r)) out.push_back({r, true});
    return out;
  }

  const auto deriv = poly_derivative(c);
  const auto crits = positive_roots(deriv);

  double bound = 0;
  const double lead = std::abs(c.back());
  for (std::size_t k = 0; k + 1 < c.size(); ++k) bound = std::max(bound, std::abs(c[k]) / lead);
  bound += 1.0;
  if (!crits.empty()) bound = std::max(bound, 2.0 * crits.back().x + 1.0);

  std::vector<double> pts{0.0};
  for (const auto& cr : crits)
    if (cr.x > 0 && cr.x < bound) pts.push_back(cr.x);
  pts.push_back(bound);

  std::vector<double> vals(pts.size());
  std::vector<bool> is_root(pts.size(), false);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    vals[k] = poly_eval(c, pts[k]);
    if (k > 0 && k + 1 < pts.size() &&
        std::abs(vals[k]) <= 1e-12 * detail::poly_scale(c, pts[k])) {
      is_root[k] = true;  // root at a critical point: multiplicity >= 2 (or odd >= 3)
      out.push_back({pts[k], false});
    }
  }

  const auto dscale = [&](double x) {
    double s = 0, xk = 1;
    for (std::size_t k = 1; k < c.size(); ++k) {
      s += static_cast<double>(k) * std::abs(c[k]) * xk;
      xk *= x;
    }
    return std::max(s, 1e-300);
  };

  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (is_root[k] || is_root[k + 1]) continue;
    if (vals[k] == 0.0 && k == 0) continue;  // c[0] != 0 by construction
    if ((vals[k] < 0) == (vals[k + 1] < 0)) continue;
    const double r = detail::refine_bracket(c, pts[k], pts[k + 1], vals[k], vals[k + 1]);
    const double dv = poly_eval(deriv, r);
    out.push_back({r, std::abs(dv) > 1e-8 * dscale(r)});
  }

  std::sort(out.begin(), out.end(), [](const PolyRoot& a, const PolyRoot& b) { return a.x < b.x; });
  return out;
}

// True when some adjacent pair of the (ascending) roots is closer than the
// given relative separation.
inline bool has_close_pair(const std::vector<PolyRoot>& roots, double rel) {
  for (std::size_t k = 0; k + 1 < roots.size(); ++k)
    if (roots[k + 1].x - roots[k].x <= rel * std::max(std::abs(roots[k + 1].x), 1e-300))
      return true;
  return false;
}

}  // namespace sqh
