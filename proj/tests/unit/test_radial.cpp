#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kirchhoff/error.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/quadrature.hpp"
#include "kirchhoff/radial_groundstate.hpp"
#include "oracles.hpp"

using namespace kirchhoff;

namespace {

RadialProfile synthetic(double r_max, std::size_t n, double (*f)(double), double (*df)(double)) {
  RadialProfile prof;
  prof.grid = RadialGrid::uniform(r_max, n);
  for (double r : prof.grid.nodes()) {
    prof.values.push_back(f(r));
    prof.derivs.push_back(df(r));
  }
  prof.tail_start = n;
  return prof;
}

const radial::ScalarGroundState& cubic() {
  static const radial::ScalarGroundState q = radial::shoot(3.0);
  return q;
}

}  // namespace

TEST_CASE("grid nodes and spacing") {
  const auto g = RadialGrid::uniform(10.0, 21);
  CHECK(g.size() == 21);
  CHECK(g.front() == doctest::Approx(kOriginOffset));
  CHECK(g.r_max() == 10.0);
  CHECK(g.spacing() == doctest::Approx((10.0 - kOriginOffset) / 20.0));
  const auto d = g.dilated(2.0);
  CHECK(d.r_max() == doctest::Approx(20.0));
  CHECK(d.spacing() == doctest::Approx(2.0 * g.spacing()));
  CHECK_THROWS_AS(RadialGrid::uniform(10.0, 1), Error);
  CHECK_THROWS_AS(RadialGrid::uniform(-1.0, 10), Error);
}

TEST_CASE("simpson is exact on cubics") {
  std::vector<double> f;
  const double h = 0.1;
  for (int i = 0; i <= 10; ++i) f.push_back(std::pow(i * h, 3));
  CHECK(quadrature::simpson(f, h) == doctest::Approx(0.25).epsilon(1e-14));
  f.push_back(std::pow(1.1, 3));
  CHECK(quadrature::simpson(f, h) == doctest::Approx(std::pow(1.1, 4) / 4).epsilon(1e-13));
}

TEST_CASE("mass of exp(-r) is pi") {
  const auto prof = synthetic(40.0, 8001, [](double r) { return std::exp(-r); },
                              [](double r) { return -std::exp(-r); });
  const auto nm = radial::norms(prof, 3.0);
  CHECK(nm.mass_sq == doctest::Approx(std::numbers::pi).epsilon(1e-8));
  CHECK(nm.grad_sq == doctest::Approx(std::numbers::pi).epsilon(1e-8));
}

TEST_CASE("zero profile has zero norms") {
  const auto prof = zero_profile(RadialGrid::uniform(10.0, 101));
  const auto nm = radial::norms(prof, 3.0);
  CHECK(nm.mass_sq == 0.0);
  CHECK(nm.grad_sq == 0.0);
  CHECK(nm.lp1 == 0.0);
}

TEST_CASE("decay fit recovers rate and constant") {
  const auto unit = synthetic(25.0, 4000, [](double r) { return std::exp(-r) / r; },
                              [](double r) { return -std::exp(-r) * (1.0 / r + 1.0 / (r * r)); });
  const auto f1 = radial::decay_fit(unit);
  CHECK(f1.rate == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f1.constant == doctest::Approx(1.0).epsilon(1e-8));
  const auto steep = synthetic(25.0, 4000, [](double r) { return 5.0 * std::exp(-2.0 * r) / r; },
                               [](double r) { return -5.0 * std::exp(-2.0 * r) * (2.0 / r + 1.0 / (r * r)); });
  const auto f2 = radial::decay_fit(steep);
  CHECK(f2.rate == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(f2.constant == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("decay fit rejects noisy windows") {
  auto prof = synthetic(25.0, 400, [](double r) { return std::exp(-r) / r; },
                        [](double r) { return -std::exp(-r) / r; });
  for (std::size_t i = 0; i < prof.values.size(); i += 2) prof.values[i] *= 1.5;
  CHECK_THROWS_AS(radial::decay_fit(prof), Error);
}

TEST_CASE("hermite interpolation reproduces smooth functions") {
  const auto prof = synthetic(10.0, 1001, [](double r) { return std::exp(-r * r); },
                              [](double r) { return -2.0 * r * std::exp(-r * r); });
  for (double r : {0.0, 0.0123, 0.5, 1.2345, 3.3}) {
    CHECK(prof.value_at(r) == doctest::Approx(std::exp(-r * r)).epsilon(1e-8));
    CHECK(prof.derivative_at(r) == doctest::Approx(-2.0 * r * std::exp(-r * r)).scale(1.0).epsilon(1e-6));
  }
}

TEST_CASE("trajectory classification") {
  radial::ShootingConfig cfg;
  cfg.n = 2000;
  CHECK(radial::integrate_once(10.0, 3.0, cfg).outcome == radial::Outcome::Overshoot);
  CHECK(radial::integrate_once(1.0 + 1e-3, 3.0, cfg).outcome == radial::Outcome::Undershoot);
  CHECK(testing::rk4_trajectory(10.0, 3.0, 1e-2, 40.0).fate == testing::Fate::Overshoot);
  CHECK(testing::rk4_trajectory(1.0 + 1e-3, 3.0, 1e-2, 40.0).fate == testing::Fate::Undershoot);
}

TEST_CASE("invalid shooting input") {
  CHECK_THROWS_AS(radial::shoot(1.0), Error);
  CHECK_THROWS_AS(radial::shoot(5.0), Error);
  radial::ShootingConfig bad;
  bad.beta_lo = 5.0;
  bad.beta_hi = 6.0;
  try {
    radial::shoot(3.0, bad);
    FAIL("expected BracketInvalid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BracketInvalid);
  }
}

TEST_CASE("cubic ground state against the fixed-step oracle") {
  const auto& q = cubic();
  const auto oracle = testing::rk4_ground_state(3.0);
  CHECK(oracle.pohozaev < 1e-7);
  CHECK(q.amplitude == doctest::Approx(oracle.beta).epsilon(1e-9));
  CHECK(q.grad_sq == doctest::Approx(oracle.grad_sq).epsilon(1e-6));
  CHECK(q.mass_sq == doctest::Approx(oracle.mass_sq).epsilon(1e-6));
  CHECK(q.nehari_residual() < 1e-8);
  CHECK(q.pohozaev_residual() < 1e-8);
  CHECK(q.grad_sq / q.mass_sq == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("ground state identities across exponents") {
  for (double p : {1.5, 2.0, 2.5, 4.0, 4.5}) {
    CAPTURE(p);
    const auto q = radial::shoot(p, {});
    const auto oracle = testing::rk4_ground_state(p);
    CHECK(q.amplitude == doctest::Approx(oracle.beta).epsilon(1e-7));
    CHECK(q.nehari_residual() < 1e-6);
    CHECK(q.pohozaev_residual() < 1e-6);
    // Pohozaev and Nehari combined: grad/mass = 3(p-1)/(5-p).
    CHECK(q.grad_sq / q.mass_sq == doctest::Approx(3.0 * (p - 1.0) / (5.0 - p)).epsilon(1e-5));
  }
}

TEST_CASE("profile is positive, decreasing and decays at rate one") {
  const auto& q = cubic();
  const auto& v = q.profile.values;
  for (std::size_t i = 1; i < v.size(); ++i) {
    REQUIRE(v[i] > 0.0);
    REQUIRE(v[i] < v[i - 1]);
  }
  CHECK(q.decay_rate == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("bisection brackets are nested") {
  const auto& steps = cubic().bisection;
  REQUIRE(steps.size() > 10);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(steps[i].lo <= steps[i].hi);
    CHECK(steps[i].lo_outcome == radial::Outcome::Undershoot);
    CHECK(steps[i].hi_outcome == radial::Outcome::Overshoot);
    if (i > 0) {
      CHECK(steps[i].lo >= steps[i - 1].lo);
      CHECK(steps[i].hi <= steps[i - 1].hi);
    }
  }
}

TEST_CASE("profile csv") {
  const auto prof = synthetic(1.0, 17, [](double r) { return 1.0 - r; }, [](double) { return -1.0; });
  const std::string csv = radial::profile_csv(prof);
  CHECK(csv.rfind("r,Q,Qprime\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 18);
}
