#include "kirchhoff/kirchhoff_core.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "kirchhoff/error.hpp"
#include "kirchhoff/io.hpp"

namespace kirchhoff::core {

void Params::validate(bool allow_zero_b) const {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "a must be positive");
  const bool b_ok = allow_zero_b ? (b >= 0.0) : (b > 0.0);
  if (!b_ok || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidArgument, allow_zero_b ? "b must be non-negative" : "b must be positive");
  }
  if (!(p > 1.0 && p < 5.0)) {
    throw Error(ErrorKind::InvalidArgument, "p must lie in (1, 5), got " + io::format_double(p));
  }
}

Coefficient coefficient_c(const Params& params, double grad_sq_Q) {
  params.validate(/*allow_zero_b=*/true);
  if (!(grad_sq_Q >= 0.0) || !std::isfinite(grad_sq_Q)) {
    throw Error(ErrorKind::InvalidArgument, "||grad Q||^2 must be non-negative");
  }
  const double bG = params.b * grad_sq_Q;
  const double s = 0.5 * (bG + std::sqrt(bG * bG + 4.0 * params.a));
  return {s * s, s};
}

double fixed_point_c(const Params& params, double grad_sq_Q, double tol, int max_iter) {
  params.validate(/*allow_zero_b=*/true);
  if (!(grad_sq_Q >= 0.0)) throw Error(ErrorKind::InvalidArgument, "||grad Q||^2 must be non-negative");
  // The map has slope b G / (2 sqrt(c)) < 1/2 at its fixed point.
  double c = params.a;
  for (int it = 0; it < max_iter; ++it) {
    const double next = params.a + params.b * std::sqrt(c) * grad_sq_Q;
    const double change = std::abs(next - c) / next;
    c = next;
    if (change < tol) return c;
  }
  throw Error(ErrorKind::NoConvergence, "fixed-point iteration for c did not converge");
}

KirchhoffSolution KirchhoffSolution::translated(const Vec3& t) const {
  KirchhoffSolution out = *this;
  out.translation_ = t;
  return out;
}

KirchhoffSolution build_solution(const Params& params, const radial::ScalarGroundState& Q) {
  params.validate();
  if (Q.p != params.p) {
    throw Error(ErrorKind::InvalidArgument, "ground state exponent does not match params.p");
  }
  const Coefficient coef = coefficient_c(params, Q.grad_sq);

  KirchhoffSolution sol;
  sol.params_ = params;
  sol.c_ = coef.c;
  sol.sqrt_c_ = coef.sqrt_c;
  sol.profile_ = Q.profile.dilated(coef.sqrt_c);
  sol.grad_sq_Q_ = Q.grad_sq;
  sol.amplitude_ = Q.amplitude;
  sol.grad_sq_u_ = radial::norms(sol.profile_, params.p).grad_sq;

  const double self_consistency = std::abs(sol.c_ - (params.a + params.b * sol.grad_sq_u_)) / sol.c_;
  if (!(self_consistency <= 1e-10)) {
    throw Error(ErrorKind::InvariantViolated,
                "c = a + b ||grad u||^2 off by " + io::format_double(self_consistency));
  }
  const double scaling = std::abs(sol.grad_sq_u_ - coef.sqrt_c * Q.grad_sq) / sol.grad_sq_u_;
  if (!(scaling <= 1e-8)) {
    throw Error(ErrorKind::InvariantViolated,
                "||grad u||^2 = sqrt(c) ||grad Q||^2 off by " + io::format_double(scaling));
  }
  return sol;
}

double residual(const Params& params, const RadialProfile& profile) {
  profile.validate();
  const std::size_t n = profile.grid.size();
  const double coef = params.a + params.b * radial::norms(profile, params.p).grad_sq;
  const double h = profile.grid.spacing();
  const auto& u = profile.values;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double r = profile.grid[i];
    const double d2 = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
    const double d1 = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
    const double R = -coef * (d2 + 2.0 * d1 / r) + u[i] - std::pow(std::abs(u[i]), params.p - 1.0) * u[i];
    num += R * R * r * r;
    den += u[i] * u[i] * r * r;
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

double residual(const KirchhoffSolution& sol) { return residual(sol.params(), sol.profile()); }

EnergyReport energy(const Params& params, const RadialProfile& profile) {
  const radial::Norms nm = radial::norms(profile, params.p);
  if (nm.mass_sq == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "energy of the zero profile is not a ground-state energy");
  }
  EnergyReport e;
  e.quadratic = 0.5 * (params.a * nm.grad_sq + nm.mass_sq);
  e.quartic = 0.25 * params.b * nm.grad_sq * nm.grad_sq;
  e.potential = nm.lp1 / (params.p + 1.0);
  e.total = e.quadratic + e.quartic - e.potential;
  e.m = e.total;
  if (!(e.m > 0.0)) {
    throw Error(ErrorKind::InvariantViolated, "ground-state energy must be positive, got " + io::format_double(e.m));
  }
  return e;
}

EnergyReport energy(const KirchhoffSolution& sol) { return energy(sol.params(), sol.profile()); }

IntegralIdentities integral_identities(const KirchhoffSolution& sol) {
  const double p = sol.params().p;
  const radial::Norms nm = radial::norms(sol.profile(), p);
  const double c = sol.c();
  return {std::abs(c * nm.grad_sq + nm.mass_sq - nm.lp1) / nm.lp1,
          std::abs(0.5 * c * nm.grad_sq + 1.5 * nm.mass_sq - 3.0 / (p + 1.0) * nm.lp1) / nm.lp1};
}

double evaluate(const KirchhoffSolution& sol, const Vec3& x, const Vec3& t) {
  const double dx = x[0] - t[0];
  const double dy = x[1] - t[1];
  const double dz = x[2] - t[2];
  return sol.profile().value_at(std::sqrt(dx * dx + dy * dy + dz * dz));
}

std::string solution_json(const KirchhoffSolution& sol, double res, const EnergyReport& e) {
  io::JsonWriter w;
  const auto& prm = sol.params();
  w.begin_object();
  w.field("a", prm.a).field("b", prm.b).field("p", prm.p);
  w.field("sqrt_c", sol.sqrt_c()).field("c", sol.c());
  w.field("grad_sq_Q", sol.grad_sq_Q()).field("grad_sq_u", sol.grad_sq_u());
  w.field("amplitude_u0", sol.amplitude());
  w.field("m", e.m).field("residual", res);
  w.key("grid").begin_object();
  w.field("r_max", sol.profile().grid.r_max() / sol.sqrt_c());
  w.field("n", sol.profile().grid.size());
  w.end_object();
  w.end_object();
  return w.str();
}

std::string solution_csv(const KirchhoffSolution& sol, const RadialProfile& Q) {
  std::string out = "r,Q,Qprime,u,uprime\n";
  for (std::size_t i = 0; i < Q.grid.size(); ++i) {
    const double r = Q.grid[i];
    for (double v : {r, Q.values[i], Q.derivs[i], sol.profile().value_at(r), sol.profile().derivative_at(r)}) {
      out += io::format_double(v);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

}  // namespace kirchhoff::core
