#include "kirchhoff/radial_groundstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "kirchhoff/error.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/quadrature.hpp"

namespace kirchhoff::radial {

namespace {

// The state is carried in extended precision: the shooting problem is
// exponentially sensitive to the amplitude, and every extra digit of beta
// pushes the point where the bracketing trajectories part further out.
using Real = long double;

struct State {
  Real u;
  Real du;
};

State rhs(Real r, const State& y, Real p) {
  const Real power = std::pow(std::abs(y.u), p - 1) * y.u;
  return {y.du, -2 * y.du / r + y.u - power};
}

State axpy(const State& y, Real h, std::initializer_list<std::pair<Real, const State*>> terms) {
  State out = y;
  for (const auto& [coef, k] : terms) {
    out.u += h * coef * k->u;
    out.du += h * coef * k->du;
  }
  return out;
}

// Dormand-Prince 5(4) tableau.
constexpr Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr Real a21 = 1.0L / 5;
constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
               a54 = -212.0L / 729;
constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
               a64 = 49.0L / 176, a65 = -5103.0L / 18656;
constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
               b6 = 11.0L / 84;
constexpr Real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
               e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;

struct StepResult {
  State y;
  Real error;  // scaled error norm, accept if <= 1
};

StepResult dp_step(Real r, const State& y, Real h, Real p, Real abs_tol, Real rel_tol) {
  const State k1 = rhs(r, y, p);
  const State k2 = rhs(r + c2 * h, axpy(y, h, {{a21, &k1}}), p);
  const State k3 = rhs(r + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}), p);
  const State k4 = rhs(r + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), p);
  const State k5 =
      rhs(r + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), p);
  const State k6 = rhs(r + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}),
                       p);
  const State y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State k7 = rhs(r + h, y5, p);
  const State err =
      axpy(State{0, 0}, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
  const Real su = abs_tol + rel_tol * std::max(std::abs(y.u), std::abs(y5.u));
  const Real sd = abs_tol + rel_tol * std::max(std::abs(y.du), std::abs(y5.du));
  return {y5, std::max(std::abs(err.u) / su, std::abs(err.du) / sd)};
}

enum class Verdict { Open, Overshoot, Undershoot, Converged };

Verdict classify(Real r, const State& y, Real beta, Real threshold) {
  if (y.u < 0) return Verdict::Overshoot;
  if (y.u < threshold && y.du < 0) {
    // An overshooting trajectory also passes below the threshold on its way
    // to zero; only the decaying mode has u'/u close to -(1 + 1/r).
    const Real decay = 1 + 1 / r;
    if (std::abs(y.du / y.u + decay) <= Real(0.1) * decay) return Verdict::Converged;
  }
  if (y.du >= 0 && y.u > 0 && y.u <= beta) return Verdict::Undershoot;
  return Verdict::Open;
}

/// Taylor seed at r = eps from u''(0) = (beta - beta^p) / 3.
State seed(Real beta, Real p, Real eps) {
  const Real curv = (beta - std::pow(beta, p)) / 3;
  return {beta + curv * eps * eps / 2, curv * eps};
}

struct Integrator {
  Real p;
  Real beta;
  const ShootingConfig& cfg;
  Real max_step;
  Real h_try;

  /// Advance from r to r_target with adaptive substeps, classifying after
  /// each accepted substep. Returns the verdict and leaves r at the stop.
  Verdict advance(Real& r, State& y, Real r_target) {
    while (r < r_target) {
      Real h = std::min({h_try, max_step, r_target - r});
      for (int attempt = 0;; ++attempt) {
        const StepResult s = dp_step(r, y, h, p, cfg.abs_tol, cfg.rel_tol);
        if (!std::isfinite(s.y.u) || !std::isfinite(s.y.du) || !std::isfinite(s.error)) {
          if (attempt > 60) {
            throw Error(ErrorKind::NonFinite,
                        "trajectory blew up near r = " + std::to_string(static_cast<double>(r)));
          }
          h /= 4;
          continue;
        }
        const Real factor =
            s.error == 0 ? Real(5) : std::clamp(Real(0.9) * std::pow(s.error, Real(-0.2)), Real(0.2), Real(5));
        if (s.error <= 1) {
          r = (h == r_target - r) ? r_target : r + h;
          y = s.y;
          h_try = h * factor;
          break;
        }
        h *= factor;
        if (h < 1e-14L * std::max(Real(1), r)) {
          throw Error(ErrorKind::NonFinite,
                      "step size underflow near r = " + std::to_string(static_cast<double>(r)));
        }
      }
      const Verdict v = classify(r, y, beta, cfg.converge_threshold);
      if (v != Verdict::Open) return v;
    }
    return Verdict::Open;
  }
};

Outcome to_outcome(Verdict v) {
  switch (v) {
    case Verdict::Overshoot: return Outcome::Overshoot;
    case Verdict::Converged: return Outcome::Converged;
    default: return Outcome::Undershoot;
  }
}

void check_exponent(double p) {
  if (!(p > 1.0 && p < 5.0)) {
    throw Error(ErrorKind::InvalidArgument, "exponent p must lie in (1, 5), got " + io::format_double(p));
  }
}

}  // namespace

void ShootingConfig::validate() const {
  if (!(beta_lo > 0.0 && beta_lo < beta_hi)) {
    throw Error(ErrorKind::InvalidArgument, "amplitude bracket must satisfy 0 < beta_lo < beta_hi");
  }
  if (!(tol_beta > 0.0 && abs_tol > 0.0 && rel_tol > 0.0 && converge_threshold > 0.0 &&
        trust_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (max_step < 0.0 || !(r_stop > 0.0) || max_bisections <= 0) {
    throw Error(ErrorKind::InvalidArgument, "invalid integrator step controls");
  }
}

const char* to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::Overshoot: return "Overshoot";
    case Outcome::Undershoot: return "Undershoot";
    case Outcome::Converged: return "Converged";
  }
  return "?";
}

double ScalarGroundState::nehari_residual() const {
  return std::abs(grad_sq + mass_sq - lp1) / lp1;
}

double ScalarGroundState::pohozaev_residual() const {
  return std::abs(0.5 * grad_sq + 1.5 * mass_sq - 3.0 / (p + 1.0) * lp1) / lp1;
}

namespace {

// The bisection runs in extended precision, so the amplitude is taken as
// Real here rather than through the double-typed public entry point.
Trajectory integrate_extended(Real beta, double p, const ShootingConfig& cfg, const RadialGrid& grid) {
  const Real step_cap = cfg.max_step > 0.0 ? cfg.max_step : grid.spacing();
  Integrator integ{p, beta, cfg, step_cap, step_cap};
  Trajectory out;
  out.beta = static_cast<double>(beta);
  out.values.reserve(grid.size());
  out.derivs.reserve(grid.size());
  Real r = grid.front();
  State y = seed(beta, p, r);
  out.values.push_back(static_cast<double>(y.u));
  out.derivs.push_back(static_cast<double>(y.du));
  Verdict v = classify(r, y, beta, cfg.converge_threshold);
  for (std::size_t i = 1; i < grid.size() && v == Verdict::Open && r < cfg.r_stop; ++i) {
    v = integ.advance(r, y, std::min<Real>(grid[i], cfg.r_stop));
    if (v == Verdict::Open && r == grid[i]) {
      out.values.push_back(static_cast<double>(y.u));
      out.derivs.push_back(static_cast<double>(y.du));
    }
  }
  if (v == Verdict::Open && r < cfg.r_stop) v = integ.advance(r, y, cfg.r_stop);
  if (v == Verdict::Open) {
    throw Error(ErrorKind::HorizonReached,
                "trajectory unclassified at r_stop = " + io::format_double(cfg.r_stop));
  }
  out.outcome = to_outcome(v);
  out.r_event = static_cast<double>(r);
  return out;
}

}  // namespace

Trajectory integrate_once(double beta, double p, const ShootingConfig& cfg) {
  return integrate_once(beta, p, cfg, RadialGrid::uniform(cfg.r_max, cfg.n));
}

Trajectory integrate_once(double beta, double p, const ShootingConfig& cfg, const RadialGrid& grid) {
  cfg.validate();
  check_exponent(p);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::InvalidArgument, "amplitude must be positive");
  }
  return integrate_extended(beta, p, cfg, grid);
}

ScalarGroundState shoot(double p, const ShootingConfig& cfg) {
  cfg.validate();
  check_exponent(p);
  const RadialGrid grid = RadialGrid::uniform(cfg.r_max, cfg.n);

  Real lo = cfg.beta_lo;
  Real hi = cfg.beta_hi;
  Trajectory t_lo = integrate_extended(lo, p, cfg, grid);
  Trajectory t_hi = integrate_extended(hi, p, cfg, grid);
  if (t_lo.outcome != Outcome::Undershoot || t_hi.outcome != Outcome::Overshoot) {
    throw Error(ErrorKind::BracketInvalid,
                std::string("bracket endpoints classify as ") + to_string(t_lo.outcome) + "/" +
                    to_string(t_hi.outcome) + ", need Undershoot/Overshoot");
  }

  ScalarGroundState gs;
  gs.p = p;
  gs.bisection.push_back({static_cast<double>(lo), static_cast<double>(hi), t_lo.outcome, t_hi.outcome});
  Real accepted = -1;
  int iterations = 0;
  while (hi - lo > static_cast<Real>(cfg.tol_beta)) {
    if (++iterations > cfg.max_bisections) {
      throw Error(ErrorKind::NoConvergence, "amplitude bisection did not reach tol_beta");
    }
    const Real mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;  // bracket at working precision
    Trajectory t = integrate_extended(mid, p, cfg, grid);
    if (t.outcome == Outcome::Converged) {
      accepted = mid;
      gs.final_outcome = Outcome::Converged;
      break;
    }
    if (t.outcome == Outcome::Overshoot) {
      hi = mid;
      t_hi = std::move(t);
    } else {
      lo = mid;
      t_lo = std::move(t);
    }
    gs.bisection.push_back({static_cast<double>(lo), static_cast<double>(hi), t_lo.outcome, t_hi.outcome});
  }
  if (accepted < 0) {
    accepted = lo + (hi - lo) / 2;
    gs.final_outcome = Outcome::Undershoot;
  }

  // Trust the samples while the two bracketing trajectories agree; past
  // that point the unstable growing mode dominates.
  const std::size_t common = std::min(t_lo.values.size(), t_hi.values.size());
  std::size_t trusted = 0;
  for (std::size_t i = 0; i < common; ++i) {
    const double ul = t_lo.values[i];
    const double uh = t_hi.values[i];
    if (!(ul > 0.0) || std::abs(uh - ul) > cfg.trust_tol * ul) break;
    if (i > 0 && !(t_lo.derivs[i] < 0.0 && t_hi.derivs[i] < 0.0)) break;
    trusted = i + 1;
  }
  if (trusted < 16) {
    throw Error(ErrorKind::NoConvergence, "shooting trajectories disagree too early to build a profile");
  }

  const std::size_t n = grid.size();
  RadialProfile profile{grid, std::vector<double>(n), std::vector<double>(n), trusted, 0.0};
  for (std::size_t i = 0; i < trusted; ++i) {
    profile.values[i] = 0.5 * (t_lo.values[i] + t_hi.values[i]);
    profile.derivs[i] = 0.5 * (t_lo.derivs[i] + t_hi.derivs[i]);
  }
  gs.r_trusted = grid[trusted - 1];

  const std::size_t window = std::max<std::size_t>(8, trusted / 10);
  const DecayFit fit = decay_fit(profile, trusted - window, trusted);
  gs.decay_rate = fit.rate;
  gs.decay_constant = fit.constant;

  if (trusted < n) {
    const double rt = grid[trusted - 1];
    const double ut = profile.values[trusted - 1];
    profile.tail_rate = fit.rate;
    for (std::size_t i = trusted; i < n; ++i) {
      const double r = grid[i];
      const double u = ut * (rt / r) * std::exp(-fit.rate * (r - rt));
      profile.values[i] = u;
      profile.derivs[i] = -u * (fit.rate + 1.0 / r);
    }
  } else {
    profile.tail_rate = fit.rate;
  }

  gs.amplitude = static_cast<double>(accepted);
  const Norms nm = norms(profile, p);
  gs.mass_sq = nm.mass_sq;
  gs.grad_sq = nm.grad_sq;
  gs.lp1 = nm.lp1;
  gs.profile = std::move(profile);
  return gs;
}

Norms norms(const RadialProfile& profile, double p) {
  profile.validate();
  const std::size_t n = profile.grid.size();
  std::vector<double> sq(n), dsq(n), pw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = profile.values[i];
    sq[i] = u * u;
    dsq[i] = profile.derivs[i] * profile.derivs[i];
    pw[i] = std::pow(std::abs(u), p + 1.0);
  }
  Norms out{quadrature::ball_integral(profile.grid, sq), quadrature::ball_integral(profile.grid, dsq),
            quadrature::ball_integral(profile.grid, pw)};

  // Leading-order tail of u ~ u_R (R/r) exp(-rho (r - R)).
  const double uR = profile.values.back();
  const double dR = profile.derivs.back();
  const double R = profile.grid.r_max();
  if (uR > 0.0 && dR < 0.0) {
    const double rho = -dR / uR - 1.0 / R;
    if (rho > 0.0) {
      const double four_pi = 4.0 * std::numbers::pi;
      const double a2 = uR * uR * R * R;
      out.mass_sq += four_pi * a2 / (2.0 * rho);
      out.grad_sq += four_pi * a2 * (rho + 1.0 / R) * (rho + 1.0 / R) / (2.0 * rho);
      out.lp1 += four_pi * std::pow(uR, p + 1.0) * R * R / ((p + 1.0) * rho);
    }
  }
  return out;
}

DecayFit decay_fit(const RadialProfile& profile, std::size_t first, std::size_t last, double max_rms) {
  const std::size_t n = profile.grid.size();
  if (first == 0 && last == 0) {
    last = profile.tail_start == 0 ? n : std::min(profile.tail_start, n);
    first = last - std::min(last, std::max<std::size_t>(3, last / 10));
  }
  if (last > n || first >= last || last - first < 3) {
    throw Error(ErrorKind::InvalidArgument, "decay fit window needs at least 3 nodes inside the grid");
  }
  const auto count = static_cast<double>(last - first);
  double mx = 0.0, my = 0.0;
  std::vector<double> ys(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const double u = profile.values[i];
    if (!(u > 0.0)) throw Error(ErrorKind::InvalidArgument, "decay fit needs a positive profile");
    ys[i - first] = std::log(profile.grid[i] * u);
    mx += profile.grid[i];
    my += ys[i - first];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double dx = profile.grid[i] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[i - first] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double res = ys[i - first] - (intercept + slope * profile.grid[i]);
    ss += res * res;
  }
  DecayFit fit{-slope, std::exp(intercept), std::sqrt(ss / count)};
  if (!(fit.rms_residual <= max_rms)) {
    throw Error(ErrorKind::WindowTooNoisy,
                "log-linear decay fit residual " + io::format_double(fit.rms_residual) + " exceeds " +
                    io::format_double(max_rms));
  }
  return fit;
}

std::string profile_csv(const RadialProfile& profile) {
  std::string out = "r,Q,Qprime\n";
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    out += io::format_double(profile.grid[i]);
    out += ',';
    out += io::format_double(profile.values[i]);
    out += ',';
    out += io::format_double(profile.derivs[i]);
    out += '\n';
  }
  return out;
}

}  // namespace kirchhoff::radial
