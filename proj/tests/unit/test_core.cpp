#include <cmath>
#include <random>

#include "doctest.h"
#include "kirchhoff/error.hpp"
#include "kirchhoff/kirchhoff_core.hpp"
#include "kirchhoff/radial_groundstate.hpp"
#include "json.hpp"

using namespace kirchhoff;

namespace {

const radial::ScalarGroundState& cubic() {
  static const radial::ScalarGroundState q = radial::shoot(3.0);
  return q;
}

}  // namespace

TEST_CASE("parameter hypotheses") {
  auto params = [](double a, double b, double p) { return core::Params{a, b, p}; };
  CHECK_NOTHROW(params(1.0, 1.0, 3.0).validate());
  CHECK_THROWS_AS(params(0.0, 1.0, 3.0).validate(), Error);
  CHECK_THROWS_AS(params(1.0, 0.0, 3.0).validate(), Error);
  CHECK_NOTHROW(params(1.0, 0.0, 3.0).validate(true));
  CHECK_THROWS_AS(params(1.0, -1.0, 3.0).validate(true), Error);
  CHECK_THROWS_AS(params(1.0, 1.0, 5.0).validate(), Error);
  CHECK_THROWS_AS(params(1.0, 1.0, 1.0).validate(), Error);
}

TEST_CASE("coefficient worked examples") {
  const auto local = core::coefficient_c({4.0, 0.0, 3.0}, 7.0);
  CHECK(local.sqrt_c == doctest::Approx(2.0));
  CHECK(local.c == doctest::Approx(4.0));
  const auto unit = core::coefficient_c({1.0, 1.0, 3.0}, 3.0);
  CHECK(unit.sqrt_c == doctest::Approx((3.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-15));
  CHECK(unit.c == doctest::Approx(10.908326913195984).epsilon(1e-14));
}

TEST_CASE("coefficient solves the quadratic and matches the fixed point") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ab(0.01, 100.0), g(0.1, 200.0);
  for (int i = 0; i < 100; ++i) {
    const core::Params prm{ab(gen), ab(gen), 3.0};
    const double G = g(gen);
    const auto co = core::coefficient_c(prm, G);
    CHECK(co.sqrt_c > 0.0);
    CHECK(std::abs(co.c - prm.a - prm.b * co.sqrt_c * G) / co.c < 1e-13);
    CHECK(std::abs(core::fixed_point_c(prm, G) - co.c) / co.c < 1e-10);
  }
}

TEST_CASE("coefficient rejects bad input") {
  CHECK_THROWS_AS(core::coefficient_c({1.0, 1.0, 3.0}, -1.0), Error);
  CHECK_THROWS_AS(core::coefficient_c({-1.0, 1.0, 3.0}, 1.0), Error);
  try {
    core::fixed_point_c({1.0, 1.0, 3.0}, 50.0, 1e-15, 2);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("constructed solution is self-consistent") {
  const auto sol = core::build_solution({1.0, 1.0, 3.0}, cubic());
  const double G = cubic().grad_sq;
  CHECK(sol.c() == doctest::Approx(1.0 + sol.grad_sq_u()).epsilon(1e-10));
  CHECK(sol.grad_sq_u() == doctest::Approx(sol.sqrt_c() * G).epsilon(1e-8));
  CHECK(sol.amplitude() == doctest::Approx(cubic().amplitude));
  CHECK(sol.profile().grid.r_max() == doctest::Approx(sol.sqrt_c() * cubic().profile.grid.r_max()));
  const auto ids = core::integral_identities(sol);
  CHECK(ids.nehari < 1e-8);
  CHECK(ids.pohozaev < 1e-8);
}

TEST_CASE("residual is small and sensitive to perturbation") {
  const core::Params prm{1.0, 1.0, 3.0};
  const auto sol = core::build_solution(prm, cubic());
  const double res = core::residual(sol);
  CHECK(res < 1e-5);
  auto bumped = sol.profile();
  for (std::size_t i = 0; i < bumped.values.size(); ++i) {
    const double r = bumped.grid[i];
    bumped.values[i] *= 1.0 + 1e-3 * std::exp(-(r - 5.0) * (r - 5.0));
  }
  CHECK(core::residual(prm, bumped) > 10.0 * res);
}

TEST_CASE("energy decomposition") {
  const auto sol = core::build_solution({1.0, 1.0, 3.0}, cubic());
  const auto e = core::energy(sol);
  CHECK(e.total == doctest::Approx(e.quadratic + e.quartic - e.potential));
  CHECK(e.m == e.total);
  CHECK(e.m > 0.0);
  CHECK_THROWS_AS(core::energy(sol.params(), zero_profile(sol.profile().grid)), Error);
}

TEST_CASE("vanishing b recovers the local problem") {
  const auto sol = core::build_solution({2.0, 1e-12, 3.0}, cubic());
  const double s = std::sqrt(2.0);
  CHECK(sol.sqrt_c() == doctest::Approx(s).epsilon(1e-10));
  double worst = 0.0;
  for (double r = 0.0; r < 30.0; r += 0.0137) {
    worst = std::max(worst, std::abs(sol.profile().value_at(r) - cubic().profile.value_at(r / s)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("evaluation is translation covariant") {
  const auto sol = core::build_solution({1.0, 1.0, 3.0}, cubic());
  const core::Vec3 t{0.5, -1.0, 2.0};
  const core::Vec3 x{1.0, 1.0, 1.0};
  const core::Vec3 xt{1.5, 0.0, 3.0};
  CHECK(core::evaluate(sol, xt, t) == doctest::Approx(core::evaluate(sol, x, {0.0, 0.0, 0.0})));
  CHECK(core::evaluate(sol, t, t) == doctest::Approx(sol.amplitude()).epsilon(1e-10));
  const auto moved = sol.translated(t);
  CHECK(moved.translation()[2] == 2.0);
  CHECK(moved.c() == sol.c());
}

TEST_CASE("coefficient grows with b and a") {
  const double G = cubic().grad_sq;
  double prev = 0.0;
  for (double b : {0.1, 1.0, 10.0}) {
    const double c = core::coefficient_c({1.0, b, 3.0}, G).c;
    CHECK(c > prev);
    prev = c;
  }
}

TEST_CASE("solution json and csv") {
  const auto sol = core::build_solution({1.0, 1.0, 3.0}, cubic());
  const auto doc = nlohmann::json::parse(core::solution_json(sol, core::residual(sol), core::energy(sol)));
  CHECK(doc.at("c").get<double>() == doctest::Approx(sol.c()));
  CHECK(doc.at("grid").at("n").get<int>() == 4000);
  for (const char* key : {"a", "b", "p", "sqrt_c", "grad_sq_Q", "grad_sq_u", "amplitude_u0", "m", "residual"}) {
    CHECK(doc.contains(key));
  }
  const std::string csv = core::solution_csv(sol, cubic().profile);
  CHECK(csv.rfind("r,Q,Qprime,u,uprime\n", 0) == 0);
}
