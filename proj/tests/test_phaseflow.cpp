#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sqh/phaseflow.hpp"

using namespace sqh;

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
}

TEST_CASE("harmonic oscillator closes after one period", "[phaseflow]") {
  PlanarField f;
  f.add_x(1.0, 0, 1);   // x' = y
  f.add_y(-1.0, 1, 0);  // y' = -x
  const auto trace = integrate(f, 1.0, 0.0, kTwoPi);
  REQUIRE(trace.status == IntegrateStatus::Ok);
  const auto& last = trace.samples.back();
  CHECK(last.x == Catch::Approx(1.0).margin(1e-8));
  CHECK(last.y == Catch::Approx(0.0).margin(1e-8));
}

TEST_CASE("energy is conserved on the cubic oscillator", "[phaseflow]") {
  // x' = y^3, y' = -x preserves H = 2 x^2 + y^4
  const auto f = PlanarField::hamiltonian(3, 1);
  for (double rho : {0.5, 1.0, 2.0}) {
    const double x0 = section_x_from_rho(rho, 2, 1);
    const double h0 = hamiltonian_level(x0, 0.0, 2, 1);
    // ten revolutions: use ten consecutive returns' worth of time
    const auto ret = return_map(f, x0);
    REQUIRE(ret.outcome == ReturnOutcome::Returned);
    const auto trace = integrate(f, x0, 0.0, 10.0 * ret.elapsed);
    REQUIRE(trace.status == IntegrateStatus::Ok);
    const auto& last = trace.samples.back();
    const double h1 = hamiltonian_level(last.x, last.y, 2, 1);
    CHECK(std::abs(h1 - h0) / h0 <= 1e-8);
  }
}

TEST_CASE("blowup is flagged on the linear source", "[phaseflow]") {
  PlanarField f;
  f.add_x(1.0, 1, 0);
  f.add_y(1.0, 0, 1);
  const auto trace = integrate(f, 1e-3, 0.0, 100.0);
  CHECK(trace.status == IntegrateStatus::Blowup);
}

TEST_CASE("forward-backward integration returns to the start", "[phaseflow]") {
  const auto f = PlanarField::hamiltonian(5, 3);
  const auto fwd = integrate(f, 0.9, 0.2, 7.0);
  REQUIRE(fwd.status == IntegrateStatus::Ok);
  const auto& mid = fwd.samples.back();
  PlanarField back;
  for (const auto& t : f.fx) back.add_x(-t.c, t.i, t.j);
  for (const auto& t : f.fy) back.add_y(-t.c, t.i, t.j);
  const auto rev = integrate(back, mid.x, mid.y, 7.0);
  REQUIRE(rev.status == IntegrateStatus::Ok);
  const auto& last = rev.samples.back();
  CHECK(last.x == Catch::Approx(0.9).epsilon(1e-7));
  CHECK(last.y == Catch::Approx(0.2).margin(1e-7));
}

TEST_CASE("return map is the identity on closed level sets", "[phaseflow]") {
  for (const auto [r1, r2] : {std::pair{3, 1}, std::pair{5, 3}}) {
    const auto f = PlanarField::hamiltonian(r1, r2);
    for (double x_in : {0.5, 1.0, 2.0}) {
      const auto ret = return_map(f, x_in);
      REQUIRE(ret.outcome == ReturnOutcome::Returned);
      CHECK(ret.sample->x_out == Catch::Approx(x_in).epsilon(1e-8));
      CHECK(ret.monotone_winding);
      CHECK(std::abs(ret.winding) == Catch::Approx(kTwoPi).epsilon(1e-6));
    }
  }
}

TEST_CASE("crossing events are refined onto the section", "[phaseflow]") {
  const auto f = PlanarField::hamiltonian(3, 1);
  const auto trace = integrate(f, 1.0, 0.5, 30.0);
  REQUIRE(trace.status == IntegrateStatus::Ok);
  REQUIRE_FALSE(trace.crossings.empty());
  for (const auto& c : trace.crossings) CHECK(std::abs(c.y) <= 1e-10);
}

TEST_CASE("designed perturbation yields the two predicted cycles", "[phaseflow]") {
  MomentTable mt(TrigParams(2, 1));
  const auto nf = hamiltonian_frame(1, 1, 3, 1);
  const auto pert = design_perturbation(nf, {1.0, 2.0}, mt, 1e-3);
  const auto field = PlanarField::perturbed_hamiltonian(nf, pert);

  // displacement changes sign near rho = 1 and rho = 2
  const auto d_at = [&](double rho) {
    const auto ret = return_map(field, section_x_from_rho(rho, 2, 1));
    REQUIRE(ret.outcome == ReturnOutcome::Returned);
    return ret.sample->x_out - ret.sample->x_in;
  };
  CHECK(d_at(0.8) * d_at(1.2) < 0);
  CHECK(d_at(1.7) * d_at(2.3) < 0);

  const auto search = find_limit_cycles(field, 0.3, 4.0, 24);
  REQUIRE(search.cycles.size() == 2);
  CHECK(search.cycles[0].rho_equiv == Catch::Approx(1.0).margin(0.1));
  CHECK(search.cycles[1].rho_equiv == Catch::Approx(2.0).margin(0.2));
  CHECK(search.cycles[0].residual <= 1e-9);
  CHECK(search.cycles[1].residual <= 1e-9);
  CHECK(search.no_return_samples == 0);
}

TEST_CASE("unperturbed sweep finds no cycles", "[phaseflow]") {
  const auto field = PlanarField::hamiltonian(3, 1);
  const auto search = find_limit_cycles(field, 0.4, 2.5, 10);
  CHECK(search.cycles.empty());
  const auto probe = detect_center(field, 0.4, 2.5, 5);
  CHECK(probe.is_center);
}

TEST_CASE("b0 = 0 blocks every return", "[phaseflow]") {
  // x' = y^3 + x^3, y' = y: the x-axis is invariant, nothing can rotate
  PlanarField f;
  f.add_x(1.0, 0, 3);
  f.add_x(1.0, 3, 0);
  f.add_y(1.0, 0, 1);
  for (double x_in : {0.5, 1.0, 2.0}) {
    const auto ret = return_map(f, x_in);
    CHECK(ret.outcome != ReturnOutcome::Returned);
  }
}

TEST_CASE("saddle starts never return", "[phaseflow]") {
  // thm1.4.i saddle instance: x' = x, y' = -y^3 (a1 = 1, b_{n/p} = -1)
  PlanarField f;
  f.add_x(1.0, 1, 0);
  f.add_y(-1.0, 0, 3);
  const auto ret = return_map(f, 0.05);
  CHECK(ret.outcome != ReturnOutcome::Returned);
}

TEST_CASE("center detection agrees with the reflection-symmetric family", "[phaseflow]") {
  MomentTable mt(TrigParams(2, 1));
  CenterFamily fam;
  fam.w = WeightVector(1, 1);
  fam.r1 = 3;
  fam.r2 = 1;
  fam.a = {Rational(-1), Rational(0), Rational(1, 2), Rational(0)};
  fam.b0 = Rational(1);
  const auto field = PlanarField::from_center_family(fam);
  const auto probe = detect_center(field, 0.2, 0.8, 5);
  CHECK(probe.is_center);
  CHECK(probe.max_rel_displacement <= 1e-8);

  CenterFamily focus = fam;
  focus.a[1] = Rational(1, 10);
  const auto ffield = PlanarField::from_center_family(focus);
  const auto fprobe = detect_center(ffield, 0.2, 0.8, 5);
  CHECK_FALSE(fprobe.is_center);
  // displacement keeps one sign near the origin
  double d_small = 0, d_large = 0;
  {
    const auto r = return_map(ffield, 0.2);
    REQUIRE(r.outcome == ReturnOutcome::Returned);
    d_small = r.sample->x_out - r.sample->x_in;
  }
  {
    const auto r = return_map(ffield, 0.5);
    REQUIRE(r.outcome == ReturnOutcome::Returned);
    d_large = r.sample->x_out - r.sample->x_in;
  }
  CHECK(d_small > 0);
  CHECK(d_large > 0);
}

TEST_CASE("no finite singular point away from the origin", "[phaseflow]") {
  // dense-grid witness on 20 random valid reduced systems
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> coeff(0.2, 2.0);
  std::uniform_int_distribution<int> sign_dist(0, 1);
  const int frames[][4] = {{1, 1, 3, 1}, {1, 1, 5, 3}};
  int tested = 0;
  for (int trial = 0; trial < 60 && tested < 20; ++trial) {
    const auto& fr = frames[trial % 2];
    const int r1 = fr[2], r2 = fr[3];
    Polynomial P, Q;
    for (int i = 0; i <= r1; ++i) {
      const double c = (sign_dist(rng) ? 1 : -1) * coeff(rng);
      P.add_term(Rational(static_cast<int>(c * 64)) / 64, i, r1 - i);
    }
    for (int j = 0; j <= r2; ++j) {
      const double c = (sign_dist(rng) ? 1 : -1) * coeff(rng);
      Q.add_term(Rational(static_cast<int>(c * 64)) / 64, r2 - j, j);
    }
    if (P.is_zero() || Q.is_zero() || !coprime(P, Q)) continue;
    ++tested;
    const auto field = PlanarField::from_polynomials(P, Q);
    double floor_residual = 1e300;
    for (int gx = 0; gx <= 80; ++gx) {
      for (int gy = 0; gy <= 80; ++gy) {
        const double x = -2.0 + 4.0 * gx / 80, y = -2.0 + 4.0 * gy / 80;
        if (std::max(std::abs(x), std::abs(y)) < 0.25) continue;
        floor_residual =
            std::min(floor_residual, std::max(std::abs(field.px(x, y)), std::abs(field.qy(x, y))));
      }
    }
    CHECK(floor_residual > 1e-6);
  }
  REQUIRE(tested == 20);
}

TEST_CASE("portrait export", "[phaseflow]") {
  const auto f = PlanarField::hamiltonian(3, 1);
  const auto ret = return_map(f, 1.0);
  REQUIRE(ret.outcome == ReturnOutcome::Returned);
  IntegrationOptions opt;
  opt.max_sample_dt = ret.elapsed / 400;
  const auto orbit = integrate(f, 1.0, 0.0, ret.elapsed, opt);

  SECTION("CSV rows carry 17 significant digits and close the loop") {
    std::ostringstream csv;
    export_portrait_csv({orbit}, csv);
    const std::string text = csv.str();
    CHECK(text.rfind("t,x,y,trace_id", 0) == 0);
    const auto& first = orbit.samples.front();
    const auto& last = orbit.samples.back();
    CHECK(std::abs(first.x - last.x) <= 1e-6);
    CHECK(std::abs(first.y - last.y) <= 1e-6);
    CHECK(text.find(",0\n") != std::string::npos);
    // 17-significant-digit payload shows up as long decimal fields
    CHECK(text.find("0.99999") != std::string::npos);
  }

  SECTION("empty trace list is rejected") {
    std::ostringstream csv;
    CHECK_THROWS_AS(export_portrait_csv({}, csv), Error);
  }

  SECTION("SVG overlays detected cycles") {
    MomentTable mt(TrigParams(2, 1));
    const auto nf = hamiltonian_frame(1, 1, 3, 1);
    const auto pert = design_perturbation(nf, {1.0, 2.0}, mt, 1e-3);
    const auto field = PlanarField::perturbed_hamiltonian(nf, pert);
    const auto search = find_limit_cycles(field, 0.3, 4.0, 24);
    REQUIRE(search.cycles.size() == 2);
    std::vector<Trace> cycles;
    for (const auto& est : search.cycles) {
      const auto r = return_map(field, est.x_fixed);
      REQUIRE(r.outcome == ReturnOutcome::Returned);
      IntegrationOptions copt;
      copt.max_sample_dt = r.elapsed / 300;
      cycles.push_back(integrate(field, est.x_fixed, 0.0, r.elapsed, copt));
    }
    std::ostringstream svg;
    export_portrait_svg({orbit}, svg, cycles);
    const std::string text = svg.str();
    CHECK(text.find("<svg") != std::string::npos);
    std::size_t cycle_count = 0, pos = 0;
    while ((pos = text.find("class=\"cycle\"", pos)) != std::string::npos) {
      ++cycle_count;
      pos += 1;
    }
    CHECK(cycle_count == 2);
  }
}

TEST_CASE("numeric local signatures match the canonical portraits", "[phaseflow]") {
  SECTION("saddle-node x' = x^2, y' = y") {
    PlanarField f;
    f.add_x(1.0, 2, 0);
    f.add_y(1.0, 0, 1);
    CHECK(classify_local_numeric(f).kind == LocalProbe::Kind::SaddleNode);
  }
  SECTION("unstable node x' = x^3, y' = y") {
    PlanarField f;
    f.add_x(1.0, 3, 0);
    f.add_y(1.0, 0, 1);
    CHECK(classify_local_numeric(f).kind == LocalProbe::Kind::UnstableNode);
  }
  SECTION("saddle x' = -x^3, y' = y") {
    PlanarField f;
    f.add_x(-1.0, 3, 0);
    f.add_y(1.0, 0, 1);
    CHECK(classify_local_numeric(f).kind == LocalProbe::Kind::Saddle);
  }
}
