#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <utility>
#include <vector>

#include "sqh/errors.hpp"
#include "sqh/ode.hpp"

namespace sqh {

struct TrigParams {
  int l1 = 1;
  int l2 = 1;

  TrigParams() = default;
  TrigParams(int l1_, int l2_) : l1(l1_), l2(l2_) {
    if (l1 < 1 || l2 < 1) throw Error("TrigParams: l1, l2 must be >= 1");
  }

  friend bool operator==(const TrigParams&, const TrigParams&) = default;
};

// Common period of Cs and Sn:
//   T = 2 l1^{-1/(2 l2)} l2^{-1/(2 l1)} Gamma(u) Gamma(v) / Gamma(u+v)
// with u = 1/(2 l1), v = 1/(2 l2).
inline double period(TrigParams t) {
  const double u = 1.0 / (2.0 * t.l1);
  const double v = 1.0 / (2.0 * t.l2);
  return 2.0 * std::pow(static_cast<double>(t.l1), -v) *
         std::pow(static_cast<double>(t.l2), -u) * std::tgamma(u) * std::tgamma(v) /
         std::tgamma(u + v);
}

struct CsSn {
  double cs = 0;
  double sn = 0;
};

namespace detail {

struct TrigRhs {
  int e1;  // 2 l1 - 1
  int e2;  // 2 l2 - 1
  void operator()(const State<2>& y, State<2>& dydt) const {
    dydt[0] = -ipow(y[1], e1);
    dydt[1] = ipow(y[0], e2);
  }
};

inline State<2> trig_start(TrigParams t) {
  return {std::pow(static_cast<double>(t.l1), -1.0 / (2.0 * t.l2)), 0.0};
}

}  // namespace detail

// Evaluates (Cs, Sn) at an ascending list of phases in one sweep of the
// defining initial-value problem z' = -w^{2 l1 - 1}, w' = z^{2 l2 - 1},
// z(0) = l1^{-1/(2 l2)}, w(0) = 0. Phases must lie in [0, inf); values are
// taken at the phases as given (no period reduction).
inline std::vector<CsSn> cs_sn_sweep(const std::vector<double>& phis, TrigParams t,
                                     double rel_tol = 1e-13) {
  StepControl ctrl;
  ctrl.rel_tol = rel_tol;
  ctrl.abs_tol = 1e-15;
  Dopri5<2, detail::TrigRhs> stepper(detail::TrigRhs{2 * t.l1 - 1, 2 * t.l2 - 1}, ctrl);
  stepper.start(0.0, detail::trig_start(t));
  std::vector<CsSn> out;
  out.reserve(phis.size());
  for (double phi : phis) {
    if (phi < 0) throw Error("cs_sn_sweep: phases must be nonnegative and ascending");
    while (stepper.t_end() < phi && stepper.advance(phi)) {
    }
    if (stepper.status() != IntegrateStatus::Ok)
      throw Error("cs_sn_sweep: integration failed");
    State<2> y;
    if (stepper.steps() == 0 || phi >= stepper.t_end()) y = stepper.y_end();
    else if (phi <= stepper.t_begin()) y = stepper.y_begin();
    else y = stepper.dense(phi);
    out.push_back({y[0], y[1]});
  }
  return out;
}

// Cs and Sn at a single phase, reduced modulo the period.
inline CsSn cs_sn(double phi, TrigParams t, double rel_tol = 1e-13) {
  if (!std::isfinite(phi)) throw Error("cs_sn: phase must be finite");
  const double T = period(t);
  double r = std::fmod(phi, T);
  if (r < 0) r += T;
  return cs_sn_sweep({r}, t, rel_tol)[0];
}

// Integral of Sn^alpha Cs^beta over one exact period, by quadrature of the
// integrand as an extra state alongside the defining problem. This is the
// oracle path: no parity shortcut is taken.
inline double moment_quadrature(int alpha, int beta, TrigParams t, double rel_tol = 1e-13) {
  if (alpha < 0 || beta < 0) throw Error("moment exponents must be nonnegative");
  struct Rhs {
    int e1, e2, alpha, beta;
    void operator()(const State<3>& y, State<3>& dydt) const {
      dydt[0] = -ipow(y[1], e1);
      dydt[1] = ipow(y[0], e2);
      dydt[2] = ipow(y[1], alpha) * ipow(y[0], beta);
    }
  };
  StepControl ctrl;
  ctrl.rel_tol = rel_tol;
  ctrl.abs_tol = 1e-15;
  Dopri5<3, Rhs> stepper(Rhs{2 * t.l1 - 1, 2 * t.l2 - 1, alpha, beta}, ctrl);
  const auto z0 = detail::trig_start(t);
  stepper.start(0.0, {z0[0], z0[1], 0.0});
  const double T = period(t);
  while (stepper.advance(T)) {
  }
  if (stepper.status() != IntegrateStatus::Ok) throw Error("moment quadrature failed");
  return stepper.y_end()[2];
}

// Moment integral with the exact parity rule: zero without quadrature when
// alpha or beta is odd, strictly positive otherwise.
inline double moment(int alpha, int beta, TrigParams t) {
  if (alpha < 0 || beta < 0) throw Error("moment exponents must be nonnegative");
  if (alpha % 2 == 1 || beta % 2 == 1) return 0.0;
  const double value = moment_quadrature(alpha, beta, t);
  if (!(value > 0.0)) throw Error("even-even moment lost positivity in quadrature");
  return value;
}

// Cache of moment integrals for one parameter pair. Entries are exactly
// zero iff alpha or beta is odd. Concurrent readers are fine; insertion is
// internally synchronized.
class MomentTable {
 public:
  explicit MomentTable(TrigParams t) : t_(t), period_(sqh::period(t)) {}

  TrigParams params() const { return t_; }
  double period() const { return period_; }

  static bool exact_zero(int alpha, int beta) { return alpha % 2 == 1 || beta % 2 == 1; }

  double operator()(int alpha, int beta) const {
    if (exact_zero(alpha, beta)) return 0.0;
    const std::pair<int, int> key{alpha, beta};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const double value = moment(alpha, beta, t_);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, value).first->second;
  }

  void prefill(int max_alpha_plus_beta) {
    for (int alpha = 0; alpha <= max_alpha_plus_beta; alpha += 2)
      for (int beta = 0; alpha + beta <= max_alpha_plus_beta; beta += 2) (*this)(alpha, beta);
  }

  // CSV columns: alpha,beta,l1,l2,value,exact_zero. Odd entries up to the
  // largest cached degree are written with their exact zeros.
  void dump_csv(std::ostream& os) const {
    std::lock_guard<std::mutex> lock(mutex_);
    int max_deg = 0;
    for (const auto& [key, value] : cache_) max_deg = std::max(max_deg, key.first + key.second);
    os << "alpha,beta,l1,l2,value,exact_zero\n";
    char buf[64];
    for (int alpha = 0; alpha <= max_deg; ++alpha) {
      for (int beta = 0; alpha + beta <= max_deg; ++beta) {
        if (exact_zero(alpha, beta)) {
          os << alpha << "," << beta << "," << t_.l1 << "," << t_.l2 << ",0,1\n";
          continue;
        }
        auto it = cache_.find({alpha, beta});
        if (it == cache_.end()) continue;
        std::snprintf(buf, sizeof buf, "%.17g", it->second);
        os << alpha << "," << beta << "," << t_.l1 << "," << t_.l2 << "," << buf << ",0\n";
      }
    }
  }

 private:
  TrigParams t_;
  double period_;
  mutable std::map<std::pair<int, int>, double> cache_;
  mutable std::mutex mutex_;
};

}  // namespace sqh
