#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "sqh/phaseflow.hpp"

using namespace sqh;

namespace {

CenterFamily cubic_family(Rational a0, Rational a1, Rational a2, Rational a3, Rational b0) {
  CenterFamily fam;
  fam.w = WeightVector(1, 1);
  fam.r1 = 3;
  fam.r2 = 1;
  fam.a = {a0, a1, a2, a3};
  fam.b0 = b0;
  return fam;
}

}  // namespace

TEST_CASE("kappa threshold case split", "[classify]") {
  CHECK(kappa_threshold(7, 1) == 7);
  CHECK(kappa_threshold(9, 3) == 3);
  CHECK(kappa_threshold(5, 1) == 5);
  CHECK(kappa_threshold(9, 1) == 9);
  CHECK(kappa_threshold(7, 3) == 1);  // [7/3] = 2 even -> 1
  CHECK_THROWS_AS(kappa_threshold(4, 1), Error);
  CHECK_THROWS_AS(kappa_threshold(5, 2), Error);
}

TEST_CASE("center verdict when the odd column vanishes", "[classify]") {
  MomentTable mt(TrigParams(2, 1));
  const auto fam = cubic_family(Rational(-1), Rational(0), Rational(1, 2), Rational(0), Rational(1));
  const auto v = center_at_origin(fam, mt);
  CHECK(v.kind == CenterVerdict::Kind::Center);
  CHECK(v.reason == CenterVerdict::CenterReason::OddCoeffsVanish);
  CHECK(v.code == "thm1.3.i");
  CHECK(v.kappa == 3);
  CHECK(v.cyclicity == 1);
}

TEST_CASE("weak focus order and producible cycles", "[classify]") {
  MomentTable mt(TrigParams(2, 1));
  const auto v = center_at_origin(
      cubic_family(Rational(-1), Rational(1, 10), Rational(1, 2), Rational(0), Rational(1)), mt);
  CHECK(v.kind == CenterVerdict::Kind::WeakFocus);
  CHECK(v.order_index == 1);
  CHECK(v.producible_cycles == 0);
  CHECK(v.stability_sign == 1);  // repelling: the divergence a1 y^2 is nonnegative
  CHECK(v.code == "thm1.3.ii");

  const auto v3 = center_at_origin(
      cubic_family(Rational(-1), Rational(0), Rational(0), Rational(2, 3), Rational(1)), mt);
  CHECK(v3.kind == CenterVerdict::Kind::WeakFocus);
  CHECK(v3.order_index == 2);
  CHECK(v3.producible_cycles == 1);
}

TEST_CASE("cyclicity follows (kappa-1)/2", "[classify]") {
  // r1 = 7, p = 1: kappa = 7 and the center cyclicity is 3
  CenterFamily fam;
  fam.w = WeightVector(1, 1);
  fam.r1 = 7;
  fam.r2 = 1;
  fam.a = {Rational(-1), Rational(0), Rational(0), Rational(0),
           Rational(0),  Rational(0), Rational(0), Rational(0)};
  fam.b0 = Rational(1);
  MomentTable mt(TrigParams(4, 1));
  const auto v = center_at_origin(fam, mt);
  CHECK(v.kappa == 7);
  CHECK(v.cyclicity == 3);
}

TEST_CASE("family preconditions are enforced", "[classify]") {
  MomentTable mt(TrigParams(2, 1));
  CHECK_THROWS_AS(center_at_origin(
                      cubic_family(Rational(1), Rational(0), Rational(0), Rational(0), Rational(1)),
                      mt),
                  Error);  // a0 b0 > 0
  CHECK_THROWS_AS(center_at_origin(
                      cubic_family(Rational(0), Rational(1), Rational(0), Rational(0), Rational(1)),
                      mt),
                  Error);  // a0 = 0
}

TEST_CASE("rescaled coefficients on a rational-root instance", "[classify]") {
  // (-a0)^{1/(r1+1)} = 16^{1/4} = 2 and b0^{1/(r2+1)} = 81^{1/2} = 9, so
  // abar_1 = a_1 * 16^{-3/4} * 81^{-1/2} = a_1 / 72 exactly.
  const auto fam = cubic_family(Rational(-16), Rational(3), Rational(0), Rational(0), Rational(81));
  CHECK(rescaled_coefficient(fam, 1) == Catch::Approx(3.0 / 72.0).epsilon(1e-14));
  // abar_3 = a_3 * 16^{-1/4} * 81^{-3/2} = a_3 / (2 * 729)
  const auto fam3 = cubic_family(Rational(-16), Rational(0), Rational(0), Rational(5), Rational(81));
  CHECK(rescaled_coefficient(fam3, 3) == Catch::Approx(5.0 / 1458.0).epsilon(1e-14));
}

TEST_CASE("rescaling transports the vector field exactly", "[classify]") {
  // With xb = b0^{1/(r2+1)} x, yb = (-a0)^{1/(r1+1)} y and the matching time
  // scale, the transformed x-equation must read -yb^3 + sum abar_i xb^i yb^{3-i}.
  const auto fam = cubic_family(Rational(-16), Rational(3), Rational(-2), Rational(7), Rational(81));
  const double sx = std::pow(81.0, 0.5), sy = std::pow(16.0, 0.25);
  const double st = sx * sy;  // d tau / dt... time factor (-a0)^{1/4} b0^{1/2}
  const auto field = PlanarField::from_center_family(fam);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(-1.2, 1.2);
  for (int trial = 0; trial < 200; ++trial) {
    const double xb = pick(rng), yb = pick(rng);
    const double x = xb / sx, y = yb / sy;
    // transformed right-hand side, x-component: sx * P(x,y) / st
    const double lhs = sx * field.px(x, y) / st;
    double rhs = -ipow(yb, 3);
    for (int i = 1; i <= 3; ++i)
      rhs += rescaled_coefficient(fam, i) * ipow(xb, i) * ipow(yb, 3 - i);
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
    // y-component must become xb^{r2} on the nose
    const double lhs_y = sy * field.qy(x, y) / st;
    REQUIRE(lhs_y == Catch::Approx(xb).margin(1e-12));
  }
}

TEST_CASE("verdicts are invariant under positive time rescaling", "[classify]") {
  MomentTable mt(TrigParams(2, 1));
  const auto base = cubic_family(Rational(-2), Rational(1, 4), Rational(1), Rational(0), Rational(3));
  const auto v0 = center_at_origin(base, mt);
  for (const Rational c : {Rational(3), Rational(1, 7), Rational(25, 4)}) {
    CenterFamily scaled = base;
    for (auto& coeff : scaled.a) coeff *= c;
    scaled.b0 *= c;
    const auto v = center_at_origin(scaled, mt);
    CHECK(v.kind == v0.kind);
    CHECK(v.order_index == v0.order_index);
    CHECK(v.stability_sign == v0.stability_sign);
    CHECK(v.kappa == v0.kappa);
  }
}

TEST_CASE("symmetry reflection check", "[classify]") {
  SECTION("the center family with vanishing odd column is reversible") {
    const auto fam = cubic_family(Rational(-1), Rational(0), Rational(1, 2), Rational(0), Rational(1));
    NormalForm nf;
    nf.w = fam.w;
    nf.r1 = fam.r1;
    nf.r2 = fam.r2;
    nf.l1 = fam.l1();
    nf.l2 = fam.l2();
    nf.m = fam.m();
    nf.n = fam.n();
    nf.a = fam.a;
    nf.b = {fam.b0, Rational(0)};
    CHECK(symmetry_center_check(nf));
    nf.a[1] = Rational(1, 10);
    CHECK_FALSE(symmetry_center_check(nf));
  }
  SECTION("q-even normal forms are reflection symmetric by parity") {
    // (p,q) = (1,2), m = 4, n = 2: r1 = 2... needs r1 odd; take m = 2, n = 2? m != n.
    // Use (p,q,m,n) = (1,2,2,4): r1 = (1+2-1)/2 = 1, r2 = (2+4-1)/1 = 5.
    const auto ps = screen_parameters(1, 2, 2, 4);
    REQUIRE_FALSE(ps.rejection.has_value());
    NormalForm nf;
    nf.w = WeightVector(1, 2);
    nf.r1 = ps.r1;
    nf.r2 = ps.r2;
    nf.l1 = (ps.r1 + 1) / 2;
    nf.l2 = (ps.r2 + 1) / 2;
    nf.m = 2;
    nf.n = 4;
    nf.parity_case = ParityCase::QEven;
    nf.a = {Rational(1), Rational(-3)};              // y, x^2  (i*q with q=2)
    nf.b = {Rational(2), Rational(5), Rational(-1)};  // x^5, x^3 y, x y^2
    CHECK(symmetry_center_check(nf));
  }
}

TEST_CASE("local type for the m = 1 family: the sign rules", "[classify]") {
  SECTION("a0 = 0 decides by the signs of a1 and the top coefficient") {
    const std::vector<Rational> top_pos{Rational(0), Rational(0), Rational(0), Rational(1)};
    const std::vector<Rational> top_neg{Rational(0), Rational(0), Rational(0), Rational(-1)};
    const auto node = local_type_m1(Rational(0), Rational(1), top_pos, 1, 3);
    CHECK(node.kind == LocalType::Kind::UnstableNode);
    CHECK(node.code == "thm1.4.i");
    const auto saddle = local_type_m1(Rational(0), Rational(1), top_neg, 1, 3);
    CHECK(saddle.kind == LocalType::Kind::TopologicalSaddle);
    const auto stable = local_type_m1(Rational(0), Rational(-1), top_neg, 1, 3);
    CHECK(stable.kind == LocalType::Kind::StableNode);
  }
  SECTION("p = 1 alternating sum") {
    // n = 3, b = (1,0,0,0): S1 = -b0 a0 / a1^4, checked by hand against the
    // semi-hyperbolic reduction x_bar = -a1 x - a0 y
    const std::vector<Rational> b{Rational(1), Rational(0), Rational(0), Rational(0)};
    const auto saddle = local_type_m1(Rational(1), Rational(1), b, 1, 3);
    CHECK(saddle.kind == LocalType::Kind::TopologicalSaddle);
    CHECK(saddle.code == "thm1.4.ii.a.2");
    const auto node = local_type_m1(Rational(-1), Rational(1), b, 1, 3);
    CHECK(node.kind == LocalType::Kind::UnstableNode);
    CHECK(node.code == "thm1.4.ii.a.1");
  }
  SECTION("p = 3 weighted sum") {
    // p = 3, n = 3, a1 = 1, a0 = 1, b = (-2, 1): S2 = 1*((-2)(-1) + 1) = 3 > 0
    const auto node =
        local_type_m1(Rational(1), Rational(1), {Rational(-2), Rational(1)}, 3, 3);
    CHECK(node.kind == LocalType::Kind::UnstableNode);
    CHECK(node.code == "thm1.4.ii.b.1");
    const auto saddle =
        local_type_m1(Rational(1), Rational(1), {Rational(2), Rational(1)}, 3, 3);
    CHECK(saddle.kind == LocalType::Kind::TopologicalSaddle);
    CHECK(saddle.code == "thm1.4.ii.b.2");
  }
  SECTION("boundary S = 0 stays undetermined") {
    const auto v = local_type_m1(Rational(1), Rational(1), {Rational(1), Rational(1)}, 3, 3);
    CHECK(v.kind == LocalType::Kind::Undetermined);
  }
  SECTION("center criterion with a1 = 0") {
    const auto center = local_type_m1(
        Rational(-1), Rational(0),
        {Rational(1), Rational(0), Rational(1, 3), Rational(0)}, 1, 3);
    CHECK(center.kind == LocalType::Kind::Center);
    CHECK(center.code == "thm1.4.iii");
    const auto focus = local_type_m1(
        Rational(-1), Rational(0),
        {Rational(1), Rational(1, 5), Rational(1, 3), Rational(0)}, 1, 3);
    CHECK(focus.kind == LocalType::Kind::Focus);
  }
  SECTION("coprimality is rejected") {
    // a0 = 0 with b_{n/p} = 0 forces the common factor x
    CHECK_THROWS_AS(local_type_m1(Rational(0), Rational(1),
                                  {Rational(1), Rational(0), Rational(0), Rational(0)}, 1, 3),
                    NotCoprime);
  }
}

TEST_CASE("semi-hyperbolic classification by series expansion", "[classify]") {
  SECTION("the three canonical cases") {
    const auto saddle_node =
        classify_degenerate(Rational(1), parse_polynomial("x^2"), Polynomial{});
    CHECK(saddle_node.kind == LocalType::Kind::SaddleNode);
    CHECK(saddle_node.code == "thm2.4.iii");
    const auto node = classify_degenerate(Rational(1), parse_polynomial("x^3"), Polynomial{});
    CHECK(node.kind == LocalType::Kind::UnstableNode);
    CHECK(node.code == "thm2.4.ii");
    const auto saddle = classify_degenerate(Rational(1), parse_polynomial("-x^3"), Polynomial{});
    CHECK(saddle.kind == LocalType::Kind::TopologicalSaddle);
    CHECK(saddle.code == "thm2.4.i");
  }
  SECTION("a composed case with nontrivial f(x)") {
    // lambda = 2, B = x^2 + x y: f = -x^2/2 + x^3/4 - ...; A = y^2 - x^3
    // expands to -x^3 + x^4/4 + ..., so e = 3, c = -1: saddle.
    const auto v = classify_degenerate(Rational(2), parse_polynomial("y^2 - x^3"),
                                       parse_polynomial("x^2 + x*y"));
    CHECK(v.kind == LocalType::Kind::TopologicalSaddle);
  }
  SECTION("series order exhaustion is an explicit outcome") {
    CHECK_THROWS_AS(classify_degenerate(Rational(1), parse_polynomial("y^2"), Polynomial{}),
                    SeriesOrderExhausted);
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(classify_degenerate(Rational(-1), parse_polynomial("x^2"), Polynomial{}),
                    Error);
    CHECK_THROWS_AS(classify_degenerate(Rational(1), parse_polynomial("x"), Polynomial{}), Error);
  }
}

TEST_CASE("infinity analysis", "[classify]") {
  InfinityFamily fam;
  fam.w = WeightVector(1, 1);
  fam.r1 = 5;
  fam.r2 = 3;
  SECTION("vanishing odd slots give a center at infinity") {
    fam.b = {Rational(0), Rational(1, 2), Rational(0)};
    const auto v = infinity_analysis(fam);
    CHECK(v.kind == InfinityVerdict::Kind::CenterAtInfinity);
    CHECK(v.mu == 3);
    CHECK(v.cyclicity == 1);
    CHECK(v.code == "thm1.5.i");
  }
  SECTION("first odd slot sets order and sign") {
    fam.b = {Rational(1, 5), Rational(1, 2), Rational(0)};
    const auto v = infinity_analysis(fam);
    CHECK(v.kind == InfinityVerdict::Kind::FocusAtInfinity);
    CHECK(v.order_index == 1);
    CHECK(v.stability_sign == 1);
    CHECK(v.bifurcating_orbits == 0);
    fam.b = {Rational(0), Rational(1, 2), Rational(-2)};
    const auto w = infinity_analysis(fam);
    CHECK(w.order_index == 2);
    CHECK(w.stability_sign == -1);
    CHECK(w.bifurcating_orbits == 1);
  }
  SECTION("cyclicity for r2 = 7, q = 1") {
    InfinityFamily big;
    big.w = WeightVector(1, 1);
    big.r1 = 9;
    big.r2 = 7;
    big.b = {};
    const auto v = infinity_analysis(big);
    CHECK(v.mu == 7);
    CHECK(v.cyclicity == 3);
  }
  SECTION("family shape is validated") {
    InfinityFamily bad = fam;
    bad.r1 = 3;
    bad.r2 = 5;
    bad.b = {};
    CHECK_THROWS_AS(infinity_analysis(bad), Error);
  }
}
