#pragma once

// The nonlocal problem  -(a + b ||grad u||^2) Lap u + u = u^p  in R^3,
// solved through the rescaling u(x) = Q((x - t) / sqrt(c)).

#include <array>
#include <string>

#include "kirchhoff/grid.hpp"
#include "kirchhoff/radial_groundstate.hpp"

namespace kirchhoff::core {

using Vec3 = std::array<double, 3>;

struct Params {
  double a = 1.0;
  double b = 1.0;
  double p = 3.0;

  /// a > 0, 1 < p < 5, and b > 0 (b >= 0 when `allow_zero_b`).
  void validate(bool allow_zero_b = false) const;
};

struct Coefficient {
  double c = 0.0;
  double sqrt_c = 0.0;
};

/// Positive root of  s^2 - b G s - a = 0  with s = sqrt(c), G = ||grad Q||^2.
Coefficient coefficient_c(const Params& params, double grad_sq_Q);

/// Iterates c <- a + b sqrt(c) G from c = a until the relative change drops
/// below `tol`. Throws NoConvergence after `max_iter` steps.
double fixed_point_c(const Params& params, double grad_sq_Q, double tol = 1e-15, int max_iter = 10000);

class KirchhoffSolution {
 public:
  const Params& params() const noexcept { return params_; }
  double c() const noexcept { return c_; }
  double sqrt_c() const noexcept { return sqrt_c_; }
  /// Profile of u centred at the origin.
  const RadialProfile& profile() const noexcept { return profile_; }
  double grad_sq_u() const noexcept { return grad_sq_u_; }
  double grad_sq_Q() const noexcept { return grad_sq_Q_; }
  double amplitude() const noexcept { return amplitude_; }
  const Vec3& translation() const noexcept { return translation_; }

  /// Same solution translated to centre t.
  KirchhoffSolution translated(const Vec3& t) const;

 private:
  friend KirchhoffSolution build_solution(const Params&, const radial::ScalarGroundState&);

  Params params_;
  double c_ = 0.0;
  double sqrt_c_ = 0.0;
  RadialProfile profile_;
  double grad_sq_u_ = 0.0;
  double grad_sq_Q_ = 0.0;
  double amplitude_ = 0.0;
  Vec3 translation_{0.0, 0.0, 0.0};
};

/// u(r) = Q(r / sqrt_c) on the dilated grid. Throws InvariantViolated when
/// c = a + b ||grad u||^2 (rel 1e-10) or ||grad u||^2 = sqrt_c ||grad Q||^2
/// (rel 1e-8) fails.
KirchhoffSolution build_solution(const Params& params, const radial::ScalarGroundState& Q);

/// Weighted relative residual of the full equation,
/// ||R||_{L^2(r^2 dr)} / ||u||_{L^2(r^2 dr)}, with the coefficient
/// a + b ||grad u||^2 recomputed from the profile. Derivatives use
/// fourth-order centred differences of the samples.
double residual(const Params& params, const RadialProfile& profile);
double residual(const KirchhoffSolution& sol);

struct EnergyReport {
  double quadratic = 0.0;  ///< (1/2) int (a |grad u|^2 + u^2)
  double quartic = 0.0;    ///< (b/4) (int |grad u|^2)^2
  double potential = 0.0;  ///< int |u|^{p+1} / (p+1)
  double total = 0.0;      ///< I(u)
  double m = 0.0;          ///< ground-state energy, equal to I(u) here
};

/// Throws InvalidArgument for a zero profile, InvariantViolated if m <= 0.
EnergyReport energy(const Params& params, const RadialProfile& profile);
EnergyReport energy(const KirchhoffSolution& sol);

struct IntegralIdentities {
  double nehari = 0.0;    ///< |c G + M - L| / L
  double pohozaev = 0.0;  ///< |c G / 2 + 3 M / 2 - 3 L / (p+1)| / L
};

/// Nehari and Pohozaev relative residuals of u with its coefficient c.
IntegralIdentities integral_identities(const KirchhoffSolution& sol);

/// u(x) for the solution centred at t: Q(|x - t| / sqrt_c).
double evaluate(const KirchhoffSolution& sol, const Vec3& x, const Vec3& t);

/// JSON report {a, b, p, sqrt_c, c, grad_sq_Q, grad_sq_u, amplitude_u0, m,
/// residual, grid:{r_max, n}}.
std::string solution_json(const KirchhoffSolution& sol, double residual, const EnergyReport& e);

/// CSV `r,Q,Qprime,u,uprime` on the nodes of Q's grid.
std::string solution_csv(const KirchhoffSolution& sol, const RadialProfile& Q);

}  // namespace kirchhoff::core
