#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sqh/classify.hpp"
#include "sqh/melnikov.hpp"
#include "sqh/ode.hpp"

namespace sqh {

struct FieldTerm {
  double c = 0;
  int i = 0, j = 0;
};

// Planar polynomial vector field in double precision, with optional (l1,l2)
// level metadata so section coordinates can be converted to rho-equivalent
// radii through H-levels.
struct PlanarField {
  std::vector<FieldTerm> fx, fy;
  std::optional<TrigParams> level;

  void add_x(double c, int i, int j) {
    if (c != 0.0) fx.push_back({c, i, j});
  }
  void add_y(double c, int i, int j) {
    if (c != 0.0) fy.push_back({c, i, j});
  }

  double px(double x, double y) const { return eval_terms(fx, x, y); }
  double qy(double x, double y) const { return eval_terms(fy, x, y); }

  void operator()(const State<2>& s, State<2>& ds) const {
    ds[0] = px(s[0], s[1]);
    ds[1] = qy(s[0], s[1]);
  }

  static PlanarField from_polynomials(const Polynomial& P, const Polynomial& Q) {
    PlanarField f;
    for (const auto& [mono, c] : P.terms()) f.add_x(to_double(c), mono.i, mono.j);
    for (const auto& [mono, c] : Q.terms()) f.add_y(to_double(c), mono.i, mono.j);
    return f;
  }

  static PlanarField from_system(const SemiQHSystem& s) { return from_polynomials(s.P, s.Q); }

  static PlanarField from_normal_form(const NormalForm& nf) {
    PlanarField f = from_polynomials(expand_normal_form_p(nf), expand_normal_form_q(nf));
    if (nf.r1 % 2 == 1 && nf.r2 % 2 == 1) f.level = TrigParams(nf.l1, nf.l2);
    return f;
  }

  // x' = y^{r1}, y' = -x^{r2}
  static PlanarField hamiltonian(int r1, int r2) {
    if (r1 % 2 == 0 || r2 % 2 == 0) throw Error("Hamiltonian core needs r1, r2 odd");
    PlanarField f;
    f.add_x(1.0, 0, r1);
    f.add_y(-1.0, r2, 0);
    f.level = TrigParams((r1 + 1) / 2, (r2 + 1) / 2);
    return f;
  }

  static PlanarField perturbed_hamiltonian(const NormalForm& frame, const PerturbationSpec& pert) {
    PlanarField f = hamiltonian(frame.r1, frame.r2);
    const int p = frame.w.p, q = frame.w.q;
    for (int i = 1; i <= frame.cap_a(); ++i)
      f.add_x(pert.epsilon * pert.a_coeff(i), i * q, frame.r1 - i * p);
    for (int j = 1; j <= frame.cap_b(); ++j)
      f.add_y(pert.epsilon * pert.b_coeff(j), frame.r2 - j * q, j * p);
    return f;
  }

  static PlanarField from_center_family(const CenterFamily& fam) {
    PlanarField f;
    const int p = fam.w.p, q = fam.w.q;
    for (int i = 0; i <= fam.cap(); ++i) f.add_x(to_double(fam.a[i]), i * q, fam.r1 - i * p);
    f.add_y(to_double(fam.b0), fam.r2, 0);
    f.level = TrigParams(fam.l1(), fam.l2());
    return f;
  }

  static PlanarField from_infinity_family(const InfinityFamily& fam) {
    PlanarField f;
    const int p = fam.w.p, q = fam.w.q;
    f.add_x(-1.0, 0, fam.r1);
    f.add_y(1.0, fam.r2, 0);
    for (int j = 1; j <= fam.cap(); ++j)
      f.add_y(to_double(fam.b_coeff(j)), fam.r2 - j * q, j * p);
    f.level = TrigParams((fam.r1 + 1) / 2, (fam.r2 + 1) / 2);
    return f;
  }

 private:
  static double eval_terms(const std::vector<FieldTerm>& terms, double x, double y) {
    double out = 0;
    for (const auto& t : terms) out += t.c * ipow(x, t.i) * ipow(y, t.j);
    return out;
  }
};

struct IntegrationOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  std::size_t max_steps = 4'000'000;
  double blowup_norm = 1e6;
  double max_sample_dt = 0.0;  // when > 0, dense-subsample long steps for export
};

struct TraceSample {
  double t = 0, x = 0, y = 0;
};

struct SectionCrossing {
  double t = 0, x = 0, y = 0;  // |y| <= 1e-10 after refinement
  int direction = 0;           // sign of y' at the crossing
};

struct Trace {
  std::vector<TraceSample> samples;
  std::vector<SectionCrossing> crossings;
  IntegrateStatus status = IntegrateStatus::Ok;
  double rel_tol = 0, abs_tol = 0;
};

namespace detail {

using PlanarStepper = Dopri5<2, PlanarField>;

inline StepControl make_control(const IntegrationOptions& opt) {
  StepControl ctrl;
  ctrl.rel_tol = opt.rel_tol;
  ctrl.abs_tol = opt.abs_tol;
  ctrl.max_steps = opt.max_steps;
  ctrl.blowup_norm = opt.blowup_norm;
  return ctrl;
}

// Locates the y = 0 crossing inside the last accepted step (sign change of
// y between step ends required) and polishes it: bisection on the dense
// interpolant, then Newton-in-time micro-steps with the true field.
inline std::optional<SectionCrossing> refine_crossing(const PlanarStepper& stepper,
                                                      const PlanarField& field) {
  double ta = stepper.t_begin(), tb = stepper.t_end();
  double ya = stepper.y_begin()[1], yb = stepper.y_end()[1];
  if (ya == 0.0) return std::nullopt;  // step departs from the section itself
  if (yb != 0.0 && (ya < 0) == (yb < 0)) return std::nullopt;
  if (yb == 0.0) ta = tb;  // landed exactly on the section

  for (int iter = 0; ta != tb && iter < 90; ++iter) {
    const double tm = 0.5 * (ta + tb);
    const double ym = stepper.dense(tm)[1];
    if (ym == 0.0) {
      ta = tb = tm;
      break;
    }
    if ((ya < 0) == (ym < 0)) {
      ta = tm;
      ya = ym;
    } else {
      tb = tm;
      yb = ym;
    }
  }
  double t_star = 0.5 * (ta + tb);
  State<2> s = stepper.dense(t_star);

  // Newton in time with one classical RK4 micro-step per update.
  for (int iter = 0; iter < 4 && s[1] != 0.0; ++iter) {
    State<2> ds;
    field(s, ds);
    if (ds[1] == 0.0) break;
    const double dt = -s[1] / ds[1];
    State<2> k1 = ds, k2, k3, k4, tmp;
    tmp = {s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1]};
    field(tmp, k2);
    tmp = {s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1]};
    field(tmp, k3);
    tmp = {s[0] + dt * k3[0], s[1] + dt * k3[1]};
    field(tmp, k4);
    s = {s[0] + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
         s[1] + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    t_star += dt;
    if (std::abs(dt) < 1e-18 * std::max(1.0, std::abs(t_star))) break;
  }

  SectionCrossing c;
  c.t = t_star;
  c.x = s[0];
  c.y = s[1];
  State<2> ds;
  field(s, ds);
  c.direction = ds[1] > 0 ? 1 : (ds[1] < 0 ? -1 : 0);
  return c;
}

}  // namespace detail

inline Trace integrate(const PlanarField& field, double x0, double y0, double t_end,
                       const IntegrationOptions& opt = {}) {
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(t_end))
    throw Error("integrate: initial data must be finite");
  Trace trace;
  trace.rel_tol = opt.rel_tol;
  trace.abs_tol = opt.abs_tol;
  detail::PlanarStepper stepper(field, detail::make_control(opt));
  stepper.start(0.0, {x0, y0});
  trace.samples.push_back({0.0, x0, y0});
  while (stepper.advance(t_end)) {
    if (opt.max_sample_dt > 0.0) {
      const double span = stepper.t_end() - stepper.t_begin();
      const int extra = static_cast<int>(std::abs(span) / opt.max_sample_dt);
      for (int k = 1; k <= extra; ++k) {
        const double t = stepper.t_begin() + span * k / (extra + 1);
        const auto s = stepper.dense(t);
        trace.samples.push_back({t, s[0], s[1]});
      }
    }
    trace.samples.push_back({stepper.t_end(), stepper.y_end()[0], stepper.y_end()[1]});
    if (auto crossing = detail::refine_crossing(stepper, field)) trace.crossings.push_back(*crossing);
    if (stepper.status() != IntegrateStatus::Ok) break;
  }
  trace.status = stepper.status();
  return trace;
}

enum class ReturnOutcome { Returned, AnnulusExit, Blowup, StepLimit, TimeLimit };

inline const char* to_string(ReturnOutcome o) {
  switch (o) {
    case ReturnOutcome::Returned: return "returned";
    case ReturnOutcome::AnnulusExit: return "annulus-exit";
    case ReturnOutcome::Blowup: return "blowup";
    case ReturnOutcome::StepLimit: return "step-limit";
    case ReturnOutcome::TimeLimit: return "time-limit";
  }
  return "?";
}

struct ReturnMapSample {
  double x_in = 0, x_out = 0;
  int turns = 1;
};

struct ReturnResult {
  ReturnOutcome outcome = ReturnOutcome::TimeLimit;
  std::optional<ReturnMapSample> sample;
  bool monotone_winding = true;
  double elapsed = 0;
  double winding = 0;  // total angular progress, radians
};

struct ReturnOptions {
  IntegrationOptions integ;
  double annulus_lo = 1.0 / 64.0;  // relative to the start radius
  double annulus_hi = 64.0;
  double time_limit = 1e5;
};

// First return to the section {y = 0, x > 0} with the same crossing
// direction as the departure from (x_in, 0). Non-rotational behavior shows
// up as an annulus exit, blowup, or time/step limit.
inline ReturnResult return_map(const PlanarField& field, double x_in,
                               const ReturnOptions& opt = {}) {
  if (!(x_in > 0)) throw Error("return_map: section coordinate must be positive");
  ReturnResult res;
  const int dir0 = [&] {
    const double q0 = field.qy(x_in, 0.0);
    return q0 > 0 ? 1 : (q0 < 0 ? -1 : 0);
  }();

  detail::PlanarStepper stepper(field, detail::make_control(opt.integ));
  stepper.start(0.0, {x_in, 0.0});
  const double r0 = x_in;
  double prev_x = x_in, prev_y = 0.0;

  const auto turn = [&](double x, double y) {
    const double dtheta = std::atan2(prev_x * y - prev_y * x, prev_x * x + prev_y * y);
    if (res.winding != 0.0 && dtheta * res.winding < -1e-12 * std::abs(res.winding))
      res.monotone_winding = false;
    res.winding += dtheta;
    prev_x = x;
    prev_y = y;
  };

  while (true) {
    if (!stepper.advance(opt.time_limit)) {
      res.outcome = stepper.status() == IntegrateStatus::StepLimit ? ReturnOutcome::StepLimit
                                                                   : ReturnOutcome::TimeLimit;
      break;
    }
    if (stepper.status() == IntegrateStatus::Blowup) {
      res.outcome = ReturnOutcome::Blowup;
      break;
    }
    if (auto crossing = detail::refine_crossing(stepper, field)) {
      if (crossing->t > 1e-12 && crossing->x > 0 && crossing->direction == dir0 && dir0 != 0) {
        turn(crossing->x, crossing->y);
        res.outcome = ReturnOutcome::Returned;
        res.sample = ReturnMapSample{x_in, crossing->x, 1};
        res.elapsed = crossing->t;
        return res;
      }
    }
    const double x = stepper.y_end()[0], y = stepper.y_end()[1];
    turn(x, y);
    const double r = std::hypot(x, y);
    if (r < opt.annulus_lo * r0 || r > opt.annulus_hi * r0) {
      res.outcome = ReturnOutcome::AnnulusExit;
      break;
    }
  }
  res.elapsed = stepper.t_end();
  return res;
}

struct LimitCycleEstimate {
  double x_fixed = 0;
  double rho_equiv = 0;
  double residual = 0;
  enum class Stability { Attracting, Repelling, Unknown } stability = Stability::Unknown;
};

struct CycleSearch {
  std::vector<LimitCycleEstimate> cycles;
  int no_return_samples = 0;
  int samples = 0;
};

namespace detail {

inline std::optional<double> displacement(const PlanarField& field, double x,
                                          const ReturnOptions& opt) {
  const ReturnResult r = return_map(field, x, opt);
  if (r.outcome != ReturnOutcome::Returned) return std::nullopt;
  return r.sample->x_out - r.sample->x_in;
}

}  // namespace detail

// Samples the displacement d(x) = return(x) - x on a grid, brackets sign
// changes, and polishes each bracket by bisection/secant until
// |d| <= 1e-10 x. Samples that do not return are skipped and counted.
inline CycleSearch find_limit_cycles(const PlanarField& field, double x_lo, double x_hi, int grid,
                                     const ReturnOptions& opt = {}) {
  if (!(0 < x_lo && x_lo < x_hi)) throw Error("find_limit_cycles: need 0 < x_lo < x_hi");
  if (grid < 8) throw Error("find_limit_cycles: grid must be at least 8");
  CycleSearch search;
  search.samples = grid;

  ReturnOptions refine_opt = opt;
  refine_opt.integ.rel_tol = std::min(opt.integ.rel_tol, 1e-12);

  std::vector<double> xs(grid), ds(grid);
  std::vector<bool> ok(grid, false);
  for (int k = 0; k < grid; ++k) {
    xs[k] = x_lo + (x_hi - x_lo) * k / (grid - 1);
    if (auto d = detail::displacement(field, xs[k], opt)) {
      ds[k] = *d;
      ok[k] = true;
    } else {
      ++search.no_return_samples;
    }
  }

  for (int k = 0; k + 1 < grid; ++k) {
    if (!ok[k] || !ok[k + 1]) continue;
    if (ds[k] == 0.0 || (ds[k] < 0) == (ds[k + 1] < 0)) continue;
    double lo = xs[k], hi = xs[k + 1], dlo = ds[k], dhi = ds[k + 1];
    double x_star = 0.5 * (lo + hi), d_star = 0;
    for (int iter = 0; iter < 60; ++iter) {
      double cand = 0.5 * (lo + hi);
      if (iter % 2 == 1 && dhi != dlo) {
        const double secant = lo - dlo * (hi - lo) / (dhi - dlo);
        if (secant > lo && secant < hi) cand = secant;
      }
      const auto d = detail::displacement(field, cand, refine_opt);
      if (!d) break;
      x_star = cand;
      d_star = *d;
      if (std::abs(d_star) <= 1e-10 * cand || hi - lo <= 1e-12 * cand) break;
      if ((d_star < 0) == (dlo < 0)) {
        lo = cand;
        dlo = d_star;
      } else {
        hi = cand;
        dhi = d_star;
      }
    }
    LimitCycleEstimate est;
    est.x_fixed = x_star;
    est.residual = std::abs(d_star);
    est.rho_equiv = field.level ? rho_from_section_x(x_star, field.level->l1, field.level->l2)
                                : x_star;
    // displacement positive inside and negative outside means attracting
    if (dlo > 0 && dhi < 0) est.stability = LimitCycleEstimate::Stability::Attracting;
    else if (dlo < 0 && dhi > 0) est.stability = LimitCycleEstimate::Stability::Repelling;
    const bool duplicate =
        !search.cycles.empty() &&
        std::abs(search.cycles.back().x_fixed - est.x_fixed) <= 1e-6 * est.x_fixed;
    if (!duplicate) search.cycles.push_back(est);
  }
  return search;
}

struct CenterProbe {
  bool is_center = false;
  double max_rel_displacement = 0;
  int no_return_samples = 0;
  int samples = 0;
};

// True iff every sampled displacement satisfies |d(x)|/x <= tol_rel and all
// samples return.
inline CenterProbe detect_center(const PlanarField& field, double x_lo, double x_hi, int samples,
                                 double tol_rel = 1e-8, const ReturnOptions& opt = {}) {
  if (!(0 < x_lo && x_lo <= x_hi)) throw Error("detect_center: need 0 < x_lo <= x_hi");
  if (samples < 1) throw Error("detect_center: need at least one sample");
  CenterProbe probe;
  probe.samples = samples;
  for (int k = 0; k < samples; ++k) {
    const double x = samples == 1 ? x_lo : x_lo + (x_hi - x_lo) * k / (samples - 1);
    if (auto d = detail::displacement(field, x, opt)) {
      probe.max_rel_displacement = std::max(probe.max_rel_displacement, std::abs(*d) / x);
    } else {
      ++probe.no_return_samples;
    }
  }
  probe.is_center = probe.no_return_samples == 0 && probe.max_rel_displacement <= tol_rel;
  return probe;
}

// Crude simulation-based signature of a local phase portrait: integrate a
// ring of starts forward and backward over a long horizon and record the
// fraction that ends up well inside the start radius. Nodes pull the whole
// ring in for exactly one time direction, saddles for neither beyond their
// separatrix spokes, saddle-nodes for about half a ring, centers and foci
// keep returning to the section. The horizon must be long because the
// contraction rates here are algebraic, not exponential.
struct LocalProbe {
  enum class Kind { StableNode, UnstableNode, Saddle, SaddleNode, CenterOrFocus, Unclear };
  Kind kind = Kind::Unclear;
  double forward_contracting = 0;
  double backward_contracting = 0;
  bool some_return = false;
};

namespace detail {

enum class SpokeFate { In, Escape, Undecided };

// Integrate one start until the trajectory either contracts inside
// radius/4 or escapes past 4*radius, extending the horizon geometrically;
// decay and escape rates here are algebraic, so no single horizon works.
inline SpokeFate spoke_fate(const PlanarField& field, double x0, double y0, double sign,
                            double radius) {
  IntegrationOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  opt.blowup_norm = 1e4;
  double horizon = 100.0;
  for (int round = 0; round < 6; ++round, horizon *= 10.0) {
    const Trace tr = integrate(field, x0, y0, sign * horizon, opt);
    const auto& last = tr.samples.back();
    const double r_end = std::hypot(last.x, last.y);
    if (tr.status != IntegrateStatus::Ok || r_end > 4.0 * radius) return SpokeFate::Escape;
    if (r_end < 0.25 * radius) return SpokeFate::In;
  }
  return SpokeFate::Undecided;
}

}  // namespace detail

inline LocalProbe classify_local_numeric(const PlanarField& field, double radius = 0.05,
                                         int spokes = 16) {
  LocalProbe probe;
  int fwd_in = 0, fwd_esc = 0, bwd_in = 0, bwd_esc = 0;
  for (int k = 0; k < spokes; ++k) {
    const double angle = 2.0 * 3.14159265358979323846 * k / spokes;
    const double x0 = radius * std::cos(angle), y0 = radius * std::sin(angle);
    const auto fwd = detail::spoke_fate(field, x0, y0, 1.0, radius);
    const auto bwd = detail::spoke_fate(field, x0, y0, -1.0, radius);
    fwd_in += fwd == detail::SpokeFate::In;
    fwd_esc += fwd == detail::SpokeFate::Escape;
    bwd_in += bwd == detail::SpokeFate::In;
    bwd_esc += bwd == detail::SpokeFate::Escape;
  }
  ReturnOptions ropt;
  ropt.time_limit = 1e6;
  const ReturnResult ret = return_map(field, radius, ropt);
  probe.some_return = ret.outcome == ReturnOutcome::Returned;
  const double fi = static_cast<double>(fwd_in) / spokes;
  const double fe = static_cast<double>(fwd_esc) / spokes;
  const double bi = static_cast<double>(bwd_in) / spokes;
  const double be = static_cast<double>(bwd_esc) / spokes;
  probe.forward_contracting = fi;
  probe.backward_contracting = bi;

  if (probe.some_return) probe.kind = LocalProbe::Kind::CenterOrFocus;
  else if (bi >= 0.9 && fe >= 0.9) probe.kind = LocalProbe::Kind::UnstableNode;
  else if (fi >= 0.9 && be >= 0.9) probe.kind = LocalProbe::Kind::StableNode;
  else if (fi <= 0.25 && bi <= 0.25 && fe >= 0.7 && be >= 0.7)
    probe.kind = LocalProbe::Kind::Saddle;
  else if ((bi > 0.25 && bi < 0.85) || (fi > 0.25 && fi < 0.85))
    probe.kind = LocalProbe::Kind::SaddleNode;
  return probe;
}

inline const char* to_string(LocalProbe::Kind k) {
  switch (k) {
    case LocalProbe::Kind::StableNode: return "stable node";
    case LocalProbe::Kind::UnstableNode: return "unstable node";
    case LocalProbe::Kind::Saddle: return "saddle";
    case LocalProbe::Kind::SaddleNode: return "saddle-node";
    case LocalProbe::Kind::CenterOrFocus: return "center-or-focus";
    case LocalProbe::Kind::Unclear: return "unclear";
  }
  return "?";
}

// Probe location for a weak-focus oracle check. Two conditions pick the
// radius: the leading odd slot must dominate the predicted one-turn radial
// change (so the displacement sign is decided by that slot), and the
// angular-speed correction sum must stay small (so the rotation argument
// applies at all). Deep probes stay cheap in steps even when the orbit
// time blows up like a power of 1/rho; the returned options carry a time
// budget scaled to the orbit period at the probe radius.
struct FocusProbe {
  double x = 0;
  double rho = 0;
  ReturnOptions options;
};

inline FocusProbe weak_focus_probe(const CenterFamily& fam, const MomentTable& mt,
                                   int first_odd) {
  const int s = (fam.m() - fam.n()) / 2;
  const int l1 = fam.l1(), l2 = fam.l2();
  CenterFamily canon = fam;
  if (canon.a[0].sign() > 0) {
    for (auto& c : canon.a) c = -c;
    canon.b0 = -canon.b0;
  }

  // per-slot bound of |Cs^{iq+2l2-1} Sn^{r1-ip+1}| over one period
  const TrigParams tp(l1, l2);
  const double T = mt.period();
  std::vector<double> phis;
  for (int k = 0; k < 256; ++k) phis.push_back(T * k / 256.0);
  const auto sweep = cs_sn_sweep(phis, tp, 1e-10);
  std::vector<double> abar(fam.cap() + 1, 0.0), angular_bound(fam.cap() + 1, 0.0),
      moment_mag(fam.cap() + 1, 0.0);
  for (int i = 1; i <= fam.cap(); ++i) {
    if (canon.a[i].is_zero()) continue;
    abar[i] = rescaled_coefficient(canon, i);
    double peak = 0;
    for (const auto& v : sweep)
      peak = std::max(peak, std::abs(ipow(v.cs, i * fam.w.q + 2 * l2 - 1) *
                                     ipow(v.sn, fam.r1 - i * fam.w.p + 1)));
    angular_bound[i] = peak;
    if (i % 2 == 1)
      moment_mag[i] = mt(fam.r1 - i * fam.w.p, i * fam.w.q + 2 * l2 - 1);
  }

  double rho = 0.8;
  for (int level = 0; level < 15; ++level, rho *= 0.68) {
    double lead = 0, rest_odd = 0, angular = 0;
    for (int i = 1; i <= fam.cap(); ++i) {
      if (abar[i] == 0.0) continue;
      angular += l2 * std::abs(abar[i]) * angular_bound[i] * std::pow(rho, i * s);
      if (i % 2 == 0) continue;
      const double mag = std::abs(abar[i]) * moment_mag[i] * std::pow(rho, (i - 1) * s);
      if (i == first_odd) lead = mag;
      else rest_odd += mag;
    }
    if (lead > 0 && lead >= 3.0 * rest_odd && angular <= 0.25) break;
  }

  FocusProbe probe;
  probe.rho = rho;
  probe.x = section_x_from_rho(rho, l1, l2);
  probe.options.annulus_lo = 1.0 / 256.0;
  probe.options.annulus_hi = 256.0;
  probe.options.time_limit =
      std::max(1e5, 40.0 * period(tp) * std::pow(rho, l1 + l2 - 2 * l1 * l2));
  return probe;
}

// Return-map options for near-origin probing of closed families: orbit
// periods grow like a negative power of rho, so only the step budget can
// be the limit.
inline ReturnOptions probe_return_options() {
  ReturnOptions opt;
  opt.time_limit = 1e15;
  opt.annulus_lo = 1.0 / 256.0;
  opt.annulus_hi = 256.0;
  return opt;
}

// Measures the return-map displacement of a weak-focus family near the
// origin. Starts at the dominance radius of weak_focus_probe and keeps
// shrinking while the trajectory fails to return: at larger radii the
// coefficients need not be perturbative and the rotation can break down
// entirely, while the first returning radius still carries a displacement
// far above integration noise. The probe radius lives in the rescaled
// frame; the section coordinate is mapped back through b0^{1/(r2+1)}.
struct FocusOracle {
  bool returned = false;
  double displacement = 0;
  double rho = 0;
  double probe_x = 0;
  ReturnOutcome outcome = ReturnOutcome::TimeLimit;
};

inline FocusOracle weak_focus_displacement(const CenterFamily& fam, const MomentTable& mt,
                                           int first_odd, const PlanarField& field,
                                           double rel_tol = 1e-12) {
  const auto fp = weak_focus_probe(fam, mt, first_odd);
  const int l1 = fam.l1(), l2 = fam.l2();
  const double xscale = std::pow(std::abs(to_double(fam.b0)), 1.0 / (fam.r2 + 1));
  FocusOracle out;
  double rho = fp.rho;
  for (int attempt = 0; attempt < 9; ++attempt, rho *= 0.68) {
    ReturnOptions opt;
    opt.integ.rel_tol = rel_tol;
    opt.annulus_lo = 1.0 / 256.0;
    opt.annulus_hi = 256.0;
    opt.time_limit = std::max(1e5, 40.0 * mt.period() * std::pow(rho, l1 + l2 - 2 * l1 * l2));
    const double x_probe = section_x_from_rho(rho, l1, l2) / xscale;
    const auto ret = return_map(field, x_probe, opt);
    out.rho = rho;
    out.probe_x = x_probe;
    out.outcome = ret.outcome;
    if (ret.outcome == ReturnOutcome::Returned) {
      out.returned = true;
      out.displacement = ret.sample->x_out - ret.sample->x_in;
      return out;
    }
  }
  return out;
}

inline void export_portrait_csv(const std::vector<Trace>& traces, std::ostream& os) {
  if (traces.empty()) throw Error("export_portrait: no traces");
  os << "t,x,y,trace_id\n";
  char buf[96];
  for (std::size_t id = 0; id < traces.size(); ++id) {
    for (const auto& s : traces[id].samples) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%zu\n", s.t, s.x, s.y, id);
      os << buf;
    }
  }
  if (!os) throw Error("export_portrait: write failed");
}

inline void export_portrait_svg(const std::vector<Trace>& traces, std::ostream& os,
                                const std::vector<Trace>& cycle_overlays = {}) {
  if (traces.empty() && cycle_overlays.empty()) throw Error("export_portrait: no traces");
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  const auto widen = [&](const std::vector<Trace>& ts) {
    for (const auto& tr : ts)
      for (const auto& s : tr.samples) {
        x_min = std::min(x_min, s.x);
        x_max = std::max(x_max, s.x);
        y_min = std::min(y_min, s.y);
        y_max = std::max(y_max, s.y);
      }
  };
  widen(traces);
  widen(cycle_overlays);
  const double span_x = std::max(x_max - x_min, 1e-12);
  const double span_y = std::max(y_max - y_min, 1e-12);
  const double margin = 0.05;
  const double w = 720, h = 720;
  const auto sx = [&](double x) { return (x - x_min) / span_x * w * (1 - 2 * margin) + w * margin; };
  const auto sy = [&](double y) { return h - ((y - y_min) / span_y * h * (1 - 2 * margin) + h * margin); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (x_min < 0 && x_max > 0)
    os << "<line x1=\"" << sx(0) << "\" y1=\"0\" x2=\"" << sx(0) << "\" y2=\"" << h
       << "\" stroke=\"#cccccc\"/>\n";
  if (y_min < 0 && y_max > 0)
    os << "<line x1=\"0\" y1=\"" << sy(0) << "\" x2=\"" << w << "\" y2=\"" << sy(0)
       << "\" stroke=\"#cccccc\"/>\n";
  const auto draw = [&](const Trace& tr, const char* cls, const char* stroke, double width) {
    os << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"" << width << "\" points=\"";
    for (const auto& s : tr.samples) os << sx(s.x) << "," << sy(s.y) << " ";
    os << "\"/>\n";
  };
  for (const auto& tr : traces) draw(tr, "orbit", "#4477aa", 0.8);
  for (const auto& tr : cycle_overlays) draw(tr, "cycle", "#cc3311", 1.8);
  os << "</svg>\n";
  if (!os) throw Error("export_portrait: write failed");
}

// CSV always; the SVG overlay is written when svg_path is nonempty.
inline void export_portrait(const std::vector<Trace>& traces, const std::string& csv_path,
                            const std::string& svg_path = "",
                            const std::vector<Trace>& cycle_overlays = {}) {
  std::ofstream csv(csv_path);
  if (!csv) throw Error("export_portrait: cannot open " + csv_path);
  export_portrait_csv(traces, csv);
  if (!svg_path.empty()) {
    std::ofstream svg(svg_path);
    if (!svg) throw Error("export_portrait: cannot open " + svg_path);
    export_portrait_svg(traces, svg, cycle_overlays);
  }
}

}  // namespace sqh
