#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oracles.hpp"
#include "sqh/lyaptrig.hpp"

using namespace sqh;

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
// Gamma-formula value computed independently at 30 digits.
constexpr double kT21 = 7.416298709205487673735;
}  // namespace

TEST_CASE("period formula: classical and generalized values", "[lyaptrig]") {
  CHECK(period(TrigParams(1, 1)) == Catch::Approx(kTwoPi).epsilon(1e-12));
  CHECK(period(TrigParams(2, 1)) == Catch::Approx(kT21).epsilon(1e-12));
  // the formula is symmetric in (l1, l2)
  CHECK(period(TrigParams(1, 2)) == Catch::Approx(period(TrigParams(2, 1))).epsilon(1e-14));
  CHECK(period(TrigParams(2, 3)) == Catch::Approx(period(TrigParams(3, 2))).epsilon(1e-14));
}

TEST_CASE("period matches the flow first-return time", "[lyaptrig]") {
  for (const auto [l1, l2] : {std::pair{2, 1}, std::pair{2, 3}}) {
    const double t_formula = period(TrigParams(l1, l2));
    const double t_flow = oracles::trig_return_time(l1, l2);
    REQUIRE(t_flow > 0);
    CHECK(t_flow == Catch::Approx(t_formula).epsilon(1e-9));
  }
}

TEST_CASE("cs_sn at the anchors", "[lyaptrig]") {
  const auto at0 = cs_sn(0.0, TrigParams(1, 1));
  CHECK(at0.cs == Catch::Approx(1.0).margin(1e-14));
  CHECK(at0.sn == Catch::Approx(0.0).margin(1e-14));

  const auto quarter = cs_sn(kTwoPi / 4, TrigParams(1, 1));
  CHECK(quarter.cs == Catch::Approx(0.0).margin(1e-12));
  CHECK(quarter.sn == Catch::Approx(1.0).margin(1e-12));

  // initial value for general parameters is l1^{-1/(2 l2)}
  const auto g0 = cs_sn(0.0, TrigParams(3, 2));
  CHECK(g0.cs == Catch::Approx(std::pow(3.0, -0.25)).margin(1e-14));
}

TEST_CASE("reflection symmetry: Cs even, Sn odd", "[lyaptrig]") {
  for (double phi : {0.37, 1.1, 2.9}) {
    for (const auto [l1, l2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{3, 2}}) {
      const auto plus = cs_sn(phi, TrigParams(l1, l2));
      const auto minus = cs_sn(-phi, TrigParams(l1, l2));
      CHECK(minus.cs == Catch::Approx(plus.cs).margin(1e-10));
      CHECK(minus.sn == Catch::Approx(-plus.sn).margin(1e-10));
    }
  }
}

TEST_CASE("defining identity along a sweep", "[lyaptrig]") {
  for (const auto [l1, l2] : {std::pair{2, 1}, std::pair{3, 2}}) {
    const TrigParams t(l1, l2);
    const double T = period(t);
    std::vector<double> phis;
    for (int k = 0; k < 2000; ++k) phis.push_back(T * k / 2000.0);
    const auto vals = cs_sn_sweep(phis, t);
    double worst = 0;
    for (const auto& v : vals)
      worst = std::max(worst, std::abs(l1 * ipow(v.cs, 2 * l2) + l2 * ipow(v.sn, 2 * l1) - 1.0));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("derivative relations against central differences", "[lyaptrig]") {
  const double h = 1e-6;
  for (const auto [l1, l2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 3}}) {
    const TrigParams t(l1, l2);
    const double T = period(t);
    std::vector<double> phis;
    for (int k = 1; k < 40; ++k) {
      const double c = T * k / 40.0;
      phis.push_back(c - h);
      phis.push_back(c);
      phis.push_back(c + h);
    }
    const auto vals = cs_sn_sweep(phis, t);
    double worst = 0;
    for (std::size_t k = 0; k < vals.size(); k += 3) {
      const auto& lo = vals[k];
      const auto& mid = vals[k + 1];
      const auto& hi = vals[k + 2];
      const double d_sn = (hi.sn - lo.sn) / (2 * h);
      const double d_cs = (hi.cs - lo.cs) / (2 * h);
      worst = std::max(worst, std::abs(d_sn - ipow(mid.cs, 2 * l2 - 1)));
      worst = std::max(worst, std::abs(d_cs + ipow(mid.sn, 2 * l1 - 1)));
    }
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("T-periodicity along a sweep", "[lyaptrig]") {
  for (const auto [l1, l2] : {std::pair{2, 1}, std::pair{3, 2}}) {
    const TrigParams t(l1, l2);
    const double T = period(t);
    std::vector<double> phis;
    for (int k = 0; k < 50; ++k) {
      phis.push_back(T * k / 50.0);
      phis.push_back(T * k / 50.0 + T);
    }
    std::sort(phis.begin(), phis.end());
    const auto vals = cs_sn_sweep(phis, t);
    // pair values phi and phi+T back up by phase
    std::vector<double> sorted(phis);
    double worst = 0;
    for (std::size_t a = 0; a < phis.size(); ++a) {
      for (std::size_t b = a + 1; b < phis.size(); ++b) {
        if (std::abs(phis[b] - phis[a] - T) < 1e-12) {
          worst = std::max(worst, std::abs(vals[b].cs - vals[a].cs));
          worst = std::max(worst, std::abs(vals[b].sn - vals[a].sn));
        }
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("moment parity short-circuit and quadrature oracle", "[lyaptrig]") {
  // odd exponents: the operation returns exact zero, the quadrature stays tiny
  CHECK(moment(1, 2, TrigParams(1, 1)) == 0.0);
  CHECK(std::abs(moment_quadrature(1, 2, TrigParams(1, 1))) <= 1e-10);
  CHECK(moment(3, 4, TrigParams(2, 3)) == 0.0);
  CHECK(std::abs(moment_quadrature(3, 4, TrigParams(2, 3))) <= 1e-10);
}

TEST_CASE("classical moments", "[lyaptrig]") {
  CHECK(moment(2, 0, TrigParams(1, 1)) ==
        Catch::Approx(3.141592653589793238463).epsilon(1e-9));
  CHECK(moment(0, 0, TrigParams(2, 1)) == Catch::Approx(period(TrigParams(2, 1))).epsilon(1e-9));
}

TEST_CASE("even-even moments match the Euler-integral closed form", "[lyaptrig]") {
  for (const auto [l1, l2] : {std::pair{2, 1}, std::pair{3, 2}}) {
    for (int alpha = 0; alpha <= 8; alpha += 2) {
      for (int beta = 0; alpha + beta <= 8; beta += 2) {
        const double quad = moment(alpha, beta, TrigParams(l1, l2));
        const double closed = oracles::beta_moment(alpha, beta, l1, l2);
        REQUIRE(quad > 0.0);
        CHECK(quad == Catch::Approx(closed).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("moment table caches and dumps CSV", "[lyaptrig]") {
  MomentTable mt(TrigParams(2, 1));
  const double first = mt(2, 2);
  const double again = mt(2, 2);
  CHECK(first == again);
  CHECK(mt(1, 2) == 0.0);
  CHECK(MomentTable::exact_zero(1, 2));
  CHECK_FALSE(MomentTable::exact_zero(2, 2));

  mt.prefill(4);
  std::ostringstream csv;
  mt.dump_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("alpha,beta,l1,l2,value,exact_zero", 0) == 0);
  CHECK(text.find("1,2,2,1,0,1") != std::string::npos);   // odd entry, exact zero
  CHECK(text.find("\n2,2,2,1,0.67777") != std::string::npos);  // cached even-even value
}
