#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kirchhoff/error.hpp"
#include "kirchhoff/tridiagonal.hpp"
#include "oracles.hpp"

using namespace kirchhoff;
using linalg::RankOne;
using linalg::SymTridiag;

namespace {

SymTridiag laplacian(std::size_t n, double h, double c) {
  SymTridiag t;
  t.diag.assign(n, 2.0 * c / (h * h));
  t.off.assign(n - 1, -c / (h * h));
  return t;
}

SymTridiag random_tridiag(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SymTridiag t;
  for (std::size_t i = 0; i < n; ++i) t.diag.push_back(u(gen));
  for (std::size_t i = 0; i + 1 < n; ++i) t.off.push_back(u(gen));
  return t;
}

std::vector<std::vector<double>> dense(const SymTridiag& t, const RankOne& r1) {
  const std::size_t n = t.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = t.diag[i];
    if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = t.off[i];
  }
  if (r1.active()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] += r1.sigma * r1.q[i] * r1.q[j];
  }
  return a;
}

}  // namespace

TEST_CASE("discrete Dirichlet Laplacian spectrum") {
  const std::size_t n = 999;
  const double L = 10.0;
  const double h = L / static_cast<double>(n + 1);
  const double c = 2.5;
  const auto t = laplacian(n, h, c);
  const double tol = 1e-14 * linalg::norm_bound(t, {});
  for (std::size_t j = 1; j <= 5; ++j) {
    const double exact_discrete =
        4.0 * c / (h * h) * std::pow(std::sin(static_cast<double>(j) * std::numbers::pi / (2.0 * static_cast<double>(n + 1))), 2);
    const double continuum = c * std::pow(static_cast<double>(j) * std::numbers::pi / L, 2);
    const double mu = linalg::eigenvalue(t, {}, j - 1, tol);
    CHECK(std::abs(mu - exact_discrete) <= 2.0 * tol);
    CHECK(std::abs(mu - continuum) / continuum < 1e-2);
  }
}

TEST_CASE("inertia counts match the exact spectrum") {
  const auto t = laplacian(50, 0.1, 1.0);
  CHECK(linalg::count_below(t, {}, 0.0) == 0);
  CHECK(linalg::count_below(t, {}, 1e6) == 50);
  const double mu3 = linalg::eigenvalue(t, {}, 3, 1e-12);
  CHECK(linalg::count_below(t, {}, mu3 - 1e-8) == 3);
  CHECK(linalg::count_below(t, {}, mu3 + 1e-8) == 4);
}

TEST_CASE("rank-one spectra match a dense oracle and interlace") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 9);
    const auto t = random_tridiag(gen, n);
    RankOne r1;
    for (std::size_t i = 0; i < n; ++i) r1.q.push_back(u(gen));
    r1.sigma = trial % 2 ? 1.7 : -0.9;
    const auto ref = testing::jacobi_eigenvalues(dense(t, r1));
    const auto base = testing::jacobi_eigenvalues(dense(t, {}));
    const double tol = 1e-13 * linalg::norm_bound(t, r1);
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = linalg::eigenvalue(t, r1, i, tol);
      CHECK(mu == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
      if (r1.sigma > 0) {
        CHECK(mu >= base[i] - 1e-10);
        if (i + 1 < n) CHECK(mu <= base[i + 1] + 1e-10);
      } else {
        CHECK(mu <= base[i] + 1e-10);
        if (i > 0) CHECK(mu >= base[i - 1] - 1e-10);
      }
    }
  }
}

TEST_CASE("inverse iteration returns eigenvectors") {
  std::mt19937_64 gen(99);
  const auto t = random_tridiag(gen, 30);
  RankOne r1;
  for (std::size_t i = 0; i < 30; ++i) r1.q.push_back(std::sin(0.3 * static_cast<double>(i)));
  r1.sigma = 0.5;
  const double nb = linalg::norm_bound(t, r1);
  for (std::size_t idx : {0u, 7u, 29u}) {
    const double mu = linalg::eigenvalue(t, r1, idx, 1e-15 * nb);
    const auto ev = linalg::inverse_iteration(t, r1, mu, 1e-10 * nb);
    double norm = 0.0;
    for (double x : ev.v) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));
    const auto av = linalg::apply(t, r1, ev.v);
    double res = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) res += std::pow(av[i] - mu * ev.v[i], 2);
    CHECK(std::sqrt(res) < 1e-10 * nb);
    CHECK(*std::max_element(ev.v.begin(), ev.v.end()) >= -*std::min_element(ev.v.begin(), ev.v.end()));
  }
}

TEST_CASE("inverse iteration gives up on a non-eigenvalue") {
  const auto t = laplacian(40, 0.1, 1.0);
  const double mid = 0.5 * (linalg::eigenvalue(t, {}, 0, 1e-12) + linalg::eigenvalue(t, {}, 1, 1e-12));
  try {
    linalg::inverse_iteration(t, {}, mid, 1e-12, 3);
    FAIL("expected IterationLimit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IterationLimit);
  }
}

TEST_CASE("LDLT solve") {
  const auto t = laplacian(100, 0.05, 1.0);
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(0.1 * static_cast<double>(i));
  const auto b = linalg::apply(t, {}, x);
  const auto y = linalg::solve_ldlt(t, b);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-9));

  SymTridiag sing;
  sing.diag = {1.0, 1.0};
  sing.off = {1.0};
  try {
    linalg::solve_ldlt(sing, std::vector<double>{1.0, 2.0});
    FAIL("expected NearSingular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearSingular);
  }
}

TEST_CASE("malformed matrices are rejected") {
  SymTridiag t;
  t.diag = {1.0, 2.0};
  t.off = {1.0, 1.0};
  CHECK_THROWS_AS(t.validate(), Error);
  t.off = {std::nan("")};
  CHECK_THROWS_AS(t.validate(), Error);
}
