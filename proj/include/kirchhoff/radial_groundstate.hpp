#pragma once

// Positive radial solution Q of  -Q'' - (2/r) Q' + Q = Q^p  on (0, inf),
// computed by shooting on the central amplitude Q(0).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kirchhoff/grid.hpp"

namespace kirchhoff::radial {

struct ShootingConfig {
  double beta_lo = 1.01;
  double beta_hi = 20.0;
  double tol_beta = 1e-17;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.0;  ///< 0 means "grid spacing"
  double r_stop = 40.0;
  double converge_threshold = 1e-9;
  int max_bisections = 200;
  /// Relative disagreement between the bracketing trajectories beyond which
  /// integrated samples are replaced by the exponential tail.
  double trust_tol = 1e-6;
  double r_max = 25.0;
  std::size_t n = 4000;

  void validate() const;
};

enum class Outcome { Overshoot, Undershoot, Converged };

const char* to_string(Outcome outcome) noexcept;

/// Result of one initial-value integration. `values`/`derivs` hold the grid
/// samples reached before the trajectory was classified.
struct Trajectory {
  Outcome outcome = Outcome::Undershoot;
  double beta = 0.0;
  double r_event = 0.0;
  std::vector<double> values;
  std::vector<double> derivs;
};

struct DecayFit {
  double rate = 0.0;
  double constant = 0.0;
  double rms_residual = 0.0;
};

struct Norms {
  double mass_sq = 0.0;  ///< ||u||_2^2
  double grad_sq = 0.0;  ///< ||grad u||_2^2
  double lp1 = 0.0;      ///< ||u||_{p+1}^{p+1}
};

/// Bracket after one bisection step, rounded to double, with the
/// classifications of its endpoints.
struct BisectionStep {
  double lo = 0.0;
  double hi = 0.0;
  Outcome lo_outcome = Outcome::Undershoot;
  Outcome hi_outcome = Outcome::Overshoot;
};

struct ScalarGroundState {
  double p = 0.0;
  RadialProfile profile;
  double amplitude = 0.0;
  double mass_sq = 0.0;
  double grad_sq = 0.0;
  double lp1 = 0.0;
  double decay_rate = 0.0;
  double decay_constant = 0.0;

  // Diagnostics of the shooting run.
  double r_trusted = 0.0;
  Outcome final_outcome = Outcome::Undershoot;
  std::vector<BisectionStep> bisection;

  /// |grad + mass - lp1| / lp1
  double nehari_residual() const;
  /// |grad/2 + 3 mass/2 - 3 lp1/(p+1)| / lp1
  double pohozaev_residual() const;
};

/// Integrate u'' = -(2/r)u' + u - |u|^{p-1}u from the origin with u(0) = beta
/// and classify the trajectory. Samples are recorded on the grid
/// (cfg.r_max, cfg.n).
/// Throws NonFinite or HorizonReached.
Trajectory integrate_once(double beta, double p, const ShootingConfig& cfg = {});

/// Same, on an explicit grid.
Trajectory integrate_once(double beta, double p, const ShootingConfig& cfg, const RadialGrid& grid);

/// Bisection on the amplitude followed by tail splicing, norms and decay fit.
/// Throws BracketInvalid, NoConvergence, plus anything integrate_once throws.
ScalarGroundState shoot(double p, const ShootingConfig& cfg = {});

/// Norms by composite Simpson quadrature plus the exponential tail beyond
/// r_max, fitted to the last node.
Norms norms(const RadialProfile& profile, double p);

/// Least-squares fit of log(r u) = log C - rate * r over the nodes
/// [first, last). With first == last == 0 the window is the last tenth of
/// the integrated (non-tail) nodes.
/// Throws WindowTooNoisy when the RMS residual exceeds `max_rms`.
DecayFit decay_fit(const RadialProfile& profile, std::size_t first = 0, std::size_t last = 0,
                   double max_rms = 1e-3);

/// CSV text `r,Q,Qprime`, one node per row, 17 significant digits.
std::string profile_csv(const RadialProfile& profile);

}  // namespace kirchhoff::radial
