#pragma once

// Test-side reference computations. Nothing here calls into the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace kirchhoff::testing {

enum class Fate { Overshoot, Undershoot, Undecided };

struct FixedStepRun {
  Fate fate = Fate::Undecided;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
};

// Classical RK4 with a constant step from the Taylor seed at r0.
inline FixedStepRun rk4_trajectory(double beta, double p, double h, double r_stop, double r0 = 1e-6) {
  auto rhs = [p](double r, const std::array<double, 2>& y) {
    const double u = y[0];
    return std::array<double, 2>{y[1], -2.0 / r * y[1] + u - std::pow(std::abs(u), p - 1.0) * u};
  };
  const double curv = (beta - std::pow(beta, p)) / 3.0;
  std::array<double, 2> y{beta + curv * r0 * r0 / 2.0, curv * r0};
  double r = r0;
  FixedStepRun run;
  run.r.push_back(r);
  run.u.push_back(y[0]);
  run.du.push_back(y[1]);
  while (r < r_stop) {
    const auto k1 = rhs(r, y);
    const auto k2 = rhs(r + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const auto k3 = rhs(r + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
    const auto k4 = rhs(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int j = 0; j < 2; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    r += h;
    run.r.push_back(r);
    run.u.push_back(y[0]);
    run.du.push_back(y[1]);
    if (!std::isfinite(y[0])) return run;
    if (y[0] < 0.0) {
      run.fate = Fate::Overshoot;
      return run;
    }
    if (y[1] > 0.0) {
      run.fate = Fate::Undershoot;
      return run;
    }
  }
  return run;
}

struct OracleGroundState {
  double beta = 0.0;
  double mass_sq = 0.0;
  double grad_sq = 0.0;
  double lp1 = 0.0;
  double pohozaev = 0.0;
  int bisections = 0;
};

inline double simpson_uniform(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  if (n % 2 == 0) --n;  // drop the last sample; the integrand is negligible there
  double s = f[0] + f[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

// Bisection on the amplitude with fixed-step RK4, followed by Simpson norms
// over the stretch where the bracketing trajectories agree.
inline OracleGroundState rk4_ground_state(double p, double h = 1e-3, double tol = 1e-12) {
  double lo = 1.01;
  double hi = 20.0;
  OracleGroundState out;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const Fate f = rk4_trajectory(mid, p, h, 40.0).fate;
    if (f == Fate::Overshoot) {
      hi = mid;
    } else if (f == Fate::Undershoot) {
      lo = mid;
    } else {
      break;
    }
    ++out.bisections;
  }
  out.beta = 0.5 * (lo + hi);
  const FixedStepRun a = rk4_trajectory(lo, p, h, 40.0);
  const FixedStepRun b = rk4_trajectory(hi, p, h, 40.0);
  std::size_t keep = 0;
  while (keep < a.u.size() && keep < b.u.size() && std::abs(a.u[keep] - b.u[keep]) < 1e-6 * a.u[keep]) ++keep;
  std::vector<double> fm(keep), fg(keep), fl(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const double r2 = a.r[i] * a.r[i];
    fm[i] = a.u[i] * a.u[i] * r2;
    fg[i] = a.du[i] * a.du[i] * r2;
    fl[i] = std::pow(a.u[i], p + 1.0) * r2;
  }
  const double four_pi = 4.0 * std::acos(-1.0);
  out.mass_sq = four_pi * simpson_uniform(fm, h);
  out.grad_sq = four_pi * simpson_uniform(fg, h);
  out.lp1 = four_pi * simpson_uniform(fl, h);
  out.pohozaev = std::abs(0.5 * out.grad_sq + 1.5 * out.mass_sq - 3.0 / (p + 1.0) * out.lp1) / out.lp1;
  return out;
}

// Eigenvalues of a small dense symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace kirchhoff::testing
