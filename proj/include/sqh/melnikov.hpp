#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sqh/lyaptrig.hpp"
#include "sqh/normal_form.hpp"
#include "sqh/roots.hpp"

namespace sqh {

// H(x, y) = l1 x^{2 l2} + l2 y^{2 l1}. Level sets are the closed orbits of
// x' = y^{2 l1 - 1}, y' = -x^{2 l2 - 1}; on the orbit through
// (rho^{l1} Cs(phi), rho^{l2} Sn(phi)) the level is rho^{2 l1 l2}.
inline double hamiltonian_level(double x, double y, int l1, int l2) {
  return l1 * ipow(x, 2 * l2) + l2 * ipow(y, 2 * l1);
}

inline double rho_from_level(double h, int l1, int l2) {
  return std::pow(h, 1.0 / (2.0 * l1 * l2));
}

// The section coordinate x > 0 with H(x, 0) = rho^{2 l1 l2}.
inline double section_x_from_rho(double rho, int l1, int l2) {
  return ipow(rho, l1) * std::pow(static_cast<double>(l1), -1.0 / (2.0 * l2));
}

inline double rho_from_section_x(double x, int l1, int l2) {
  return rho_from_level(hamiltonian_level(x, 0.0, l1, l2), l1, l2);
}

// Perturbation coefficients for x' = y^{r1} + eps * sum a_i x^{iq} y^{r1-ip},
// y' = -x^{r2} + eps * sum b_j x^{r2-jq} y^{jp} with i, j starting at 1.
struct PerturbationSpec {
  std::vector<double> a;  // a[k] holds the coefficient of index k+1
  std::vector<double> b;
  double epsilon = 1e-3;

  double a_coeff(int i) const {
    return i >= 1 && i <= static_cast<int>(a.size()) ? a[i - 1] : 0.0;
  }
  double b_coeff(int j) const {
    return j >= 1 && j <= static_cast<int>(b.size()) ? b[j - 1] : 0.0;
  }
};

// The first-order displacement integral I(rho) reduced to a polynomial:
//   I(rho) = rho^{base_power} ( sum mu_{2i-1} rho^{(2i-1) s}
//                             + sum nu_{2j-1} rho^{-(2j-1) s} ),  s = (m-n)/2,
// which after factoring the extreme power becomes F(xi) with xi = rho^{|n-m|}.
struct AbelianForm {
  int i_star = 0, j_star = 0;     // number of surviving mu / nu slots
  std::vector<double> mu;         // mu[k] = mu_{2k+1}
  std::vector<double> nu;         // nu[k] = nu_{2k+1}
  int exponent_step = 0;          // s = (m-n)/2, signed
  int base_power = 0;             // 2 l1 l2
  int xi_power = 0;               // xi = rho^{xi_power}, xi_power = |n-m|
  bool m_greater = false;
  std::vector<double> F;          // F[k] multiplies xi^k

  double closed_form(double rho) const {
    double out = 0;
    const double base = ipow(rho, base_power);
    for (std::size_t k = 0; k < mu.size(); ++k)
      out += mu[k] * base * std::pow(rho, (2.0 * k + 1.0) * exponent_step);
    for (std::size_t k = 0; k < nu.size(); ++k)
      out += nu[k] * base * std::pow(rho, -(2.0 * k + 1.0) * exponent_step);
    return out;
  }
};

namespace detail {

// 2 (l1 q - l2 p) = m - n ties the polar exponents to the weighted degrees;
// it must hold exactly for every valid frame.
inline void check_exponent_identity(const NormalForm& nf) {
  if (2 * (nf.l1 * nf.w.q - nf.l2 * nf.w.p) != nf.m - nf.n)
    throw Error("exponent identity 2(l1 q - l2 p) = m - n failed; invalid frame");
}

inline void check_abelian_frame(const NormalForm& nf) {
  if (nf.parity_case != ParityCase::BothOdd)
    throw Error("Abelian machinery requires the both-odd parity case");
  if (nf.m == nf.n) throw Error("m = n is out of class");
  check_exponent_identity(nf);
}

inline void check_table(const NormalForm& nf, const MomentTable& mt) {
  if (mt.params() != TrigParams(nf.l1, nf.l2))
    throw Error("moment table parameters do not match the frame");
}

inline double mu_moment(const NormalForm& nf, const MomentTable& mt, int i) {
  return mt(nf.r1 - i * nf.w.p, i * nf.w.q + 2 * nf.l2 - 1);
}

inline double nu_moment(const NormalForm& nf, const MomentTable& mt, int j) {
  return mt(j * nf.w.p + 2 * nf.l1 - 1, nf.r2 - j * nf.w.q);
}

}  // namespace detail

// Assembles mu_i = a_i * Int Cs^{iq+2l2-1} Sn^{r1-ip}, nu_j likewise, and
// the reduced polynomial F. Even-index slots vanish exactly by the moment
// parity rule. Both degree orderings are handled: for m < n the xi powers
// ascend through mu then nu, for m > n the roles mirror.
inline AbelianForm abelian_coefficients(const NormalForm& nf, const PerturbationSpec& pert,
                                        const MomentTable& mt) {
  detail::check_abelian_frame(nf);
  detail::check_table(nf, mt);
  const int cap_a = nf.cap_a();
  const int cap_b = nf.cap_b();
  if (static_cast<int>(pert.a.size()) > cap_a || static_cast<int>(pert.b.size()) > cap_b)
    throw Error("perturbation has more coefficients than the frame admits");

  AbelianForm af;
  af.i_star = (cap_a + 1) / 2;
  af.j_star = (cap_b + 1) / 2;
  af.exponent_step = (nf.m - nf.n) / 2;
  af.base_power = 2 * nf.l1 * nf.l2;
  af.xi_power = std::abs(nf.n - nf.m);
  af.m_greater = nf.m > nf.n;
  for (int k = 0; k < af.i_star; ++k)
    af.mu.push_back(pert.a_coeff(2 * k + 1) * detail::mu_moment(nf, mt, 2 * k + 1));
  for (int k = 0; k < af.j_star; ++k)
    af.nu.push_back(pert.b_coeff(2 * k + 1) * detail::nu_moment(nf, mt, 2 * k + 1));

  af.F.assign(af.i_star + af.j_star, 0.0);
  if (!af.m_greater) {
    for (int e = 0; e < af.i_star; ++e) af.F[e] = af.mu[af.i_star - e - 1];
    for (int e = af.i_star; e < af.i_star + af.j_star; ++e) af.F[e] = af.nu[e - af.i_star];
  } else {
    for (int e = 0; e < af.j_star; ++e) af.F[e] = af.nu[af.j_star - e - 1];
    for (int e = af.j_star; e < af.i_star + af.j_star; ++e) af.F[e] = af.mu[e - af.j_star];
  }
  return af;
}

struct CycleZero {
  double xi = 0;
  double rho = 0;
  bool simple = true;
};

struct CycleConfirmation {
  double rho_predicted = 0;
  double rho_observed = 0;
  double residual = 0;
  bool confirmed = false;
};

struct CycleReport {
  int zero_count = 0;
  std::vector<CycleZero> zeros;
  int lower_bound = 0;
  bool identically_zero = false;
  bool ill_conditioned = false;
  std::vector<CycleConfirmation> confirmed;
};

// Positive real zeros of F with simplicity certification and the
// corresponding radii rho = xi^{1/|n-m|}. A zero polynomial is reported via
// identically_zero (first-order center candidate); zeros closer than 1e-8
// relative raise ill_conditioned but are kept separate.
inline CycleReport count_positive_simple_zeros(const AbelianForm& af) {
  CycleReport report;
  const bool all_zero =
      std::all_of(af.F.begin(), af.F.end(), [](double c) { return c == 0.0; });
  if (all_zero) {
    report.identically_zero = true;
    return report;
  }
  const auto roots = positive_roots(af.F);
  report.ill_conditioned = has_close_pair(roots, 1e-8);
  for (const auto& r : roots)
    report.zeros.push_back({r.x, std::pow(r.x, 1.0 / af.xi_power), r.simple});
  report.zero_count = static_cast<int>(report.zeros.size());
  return report;
}

// [([r1/p]+1)/2] + [([r2/q]+1)/2] - 1 under divisibility and both-odd
// parity; rejects parameters outside that class.
inline int lower_bound(int p, int q, int m, int n) {
  const ParamScreen ps = screen_parameters(p, q, m, n);
  if (ps.rejection)
    throw Error("lower_bound requires divisibility and both-odd parity: " + ps.rejection->detail);
  if (ps.parity_case != ParityCase::BothOdd)
    throw Error("lower_bound is stated for the both-odd parity case");
  return (ps.r1 / p + 1) / 2 + (ps.r2 / q + 1) / 2 - 1;
}

// Chooses perturbation coefficients so that F is the monic polynomial with
// simple zeros exactly at xi = radii^{|n-m|}: coefficients are matched to
// the mu/nu slots and divided by the (strictly positive) even-even moments;
// even-index slots stay zero. An empty radius list returns the zero
// perturbation (F identically zero).
inline PerturbationSpec design_perturbation(const NormalForm& nf,
                                            const std::vector<double>& target_radii,
                                            const MomentTable& mt, double epsilon = 1e-3) {
  detail::check_abelian_frame(nf);
  detail::check_table(nf, mt);
  const int cap_a = nf.cap_a();
  const int cap_b = nf.cap_b();
  const int i_star = (cap_a + 1) / 2;
  const int j_star = (cap_b + 1) / 2;
  const int slots = i_star + j_star;
  const int want = static_cast<int>(target_radii.size());
  if (want > slots - 1)
    throw InsufficientSlots("requested " + std::to_string(want) + " radii but only " +
                            std::to_string(slots - 1) + " zeros are achievable");

  PerturbationSpec pert;
  pert.epsilon = epsilon;
  pert.a.assign(cap_a, 0.0);
  pert.b.assign(cap_b, 0.0);
  if (want == 0) return pert;

  const int xi_power = std::abs(nf.n - nf.m);
  std::vector<double> xi;
  for (double rho : target_radii) {
    if (!(rho > 0)) throw Error("target radii must be positive");
    xi.push_back(ipow(rho, xi_power));
  }
  std::sort(xi.begin(), xi.end());
  for (std::size_t k = 0; k + 1 < xi.size(); ++k)
    if (xi[k + 1] - xi[k] <= 1e-9 * xi[k + 1]) throw Error("target radii must be distinct");

  // monic product (xi - xi_1)...(xi - xi_k)
  std::vector<double> target(1, 1.0);
  for (double root : xi) {
    std::vector<double> next(target.size() + 1, 0.0);
    for (std::size_t k = 0; k < target.size(); ++k) {
      next[k + 1] += target[k];
      next[k] -= root * target[k];
    }
    target = std::move(next);
  }
  target.resize(slots, 0.0);

  for (int e = 0; e < slots; ++e) {
    const double c = target[e];
    if (nf.m > nf.n) {
      if (e < j_star) {
        const int j = 2 * (j_star - e) - 1;
        pert.b[j - 1] = c / detail::nu_moment(nf, mt, j);
      } else {
        const int i = 2 * (e - j_star + 1) - 1;
        pert.a[i - 1] = c / detail::mu_moment(nf, mt, i);
      }
    } else {
      if (e < i_star) {
        const int i = 2 * (i_star - e) - 1;
        pert.a[i - 1] = c / detail::mu_moment(nf, mt, i);
      } else {
        const int j = 2 * (e - i_star + 1) - 1;
        pert.b[j - 1] = c / detail::nu_moment(nf, mt, j);
      }
    }
  }
  return pert;
}

// I_i = -Int_0^T Cs^{iq+2l2-1} Sn^{r1-ip} dphi, the divergence integral of
// the i-th slot over the unit level set. Nonzero exactly for odd i; even i
// is rejected since the integral vanishes and decides nothing.
inline double divergence_integral(int i, const NormalForm& nf, const MomentTable& mt) {
  detail::check_abelian_frame(nf);
  detail::check_table(nf, mt);
  if (i < 1 || i > nf.cap_a()) throw Error("divergence_integral: index out of range");
  if (i % 2 == 0) throw Error("divergence_integral: even index vanishes by parity");
  return -detail::mu_moment(nf, mt, i);
}

// Builds the bare frame (r1, r2, parities, weights) for the Hamiltonian
// core of given parameters; coefficient vectors hold a_0 = 1, b_0 = -1.
inline NormalForm hamiltonian_frame(int p, int q, int m, int n) {
  const ParamScreen ps = screen_parameters(p, q, m, n);
  if (ps.rejection) throw Error("invalid Hamiltonian frame: " + ps.rejection->detail);
  NormalForm nf;
  nf.w = WeightVector(p, q);
  nf.r1 = ps.r1;
  nf.r2 = ps.r2;
  nf.l1 = (ps.r1 + 1) / 2;
  nf.l2 = (ps.r2 + 1) / 2;
  nf.m = m;
  nf.n = n;
  nf.parity_case = ps.parity_case;
  nf.a.assign(nf.cap_a() + 1, Rational(0));
  nf.b.assign(nf.cap_b() + 1, Rational(0));
  nf.a[0] = 1;
  nf.b[0] = -1;
  return nf;
}

}  // namespace sqh
