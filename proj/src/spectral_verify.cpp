#include "kirchhoff/spectral_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kirchhoff/error.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/quadrature.hpp"

namespace kirchhoff::spectral {

namespace {

constexpr double kKappaTol = 1e-6;
constexpr double kKappaMargin = 1e-3;
constexpr double kZeroModeRel = 1e-4;
constexpr double kNearSingularRel = 1e-8;
constexpr double kAlignment = 0.999;
constexpr double kGapFactor = 10.0;

double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double relative_gap(std::span<const double> got, std::span<const double> want) {
  double num = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) num += (got[i] - want[i]) * (got[i] - want[i]);
  const double den = norm2(want);
  return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

double bisection_tolerance(const DiscreteOperator& op) {
  return 1e-14 * linalg::norm_bound(op.matrix, op.euclidean_rank_one());
}

// Interior samples times r: the v = r phi representation of a full-grid
// profile.
std::vector<double> to_v(const RadialGrid& grid, std::span<const double> phi) {
  const std::size_t m = grid.size() - 2;
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = grid[i + 1] * phi[i + 1];
  return v;
}

void check_profile(const RadialProfile& profile) {
  profile.validate();
  if (profile.grid.size() < 16) throw Error(ErrorKind::GridMismatch, "grid needs at least 16 nodes");
  const double h = profile.grid.spacing();
  if (!(h > 0.0)) throw Error(ErrorKind::GridMismatch, "grid spacing must be positive");
  const double drift = std::abs((profile.grid.r_max() - profile.grid.front()) -
                                h * static_cast<double>(profile.grid.size() - 1));
  if (drift > 1e-9 * profile.grid.r_max()) throw Error(ErrorKind::GridMismatch, "grid is not uniform");
}

struct Derived {
  std::vector<double> upp;
  std::vector<double> w;
  std::vector<double> S;
  std::vector<double> psi;
  std::vector<double> psi_prime;
  double kappa = 0.0;
};

Derived derive(const core::KirchhoffSolution& sol) {
  const RadialProfile& prof = sol.profile();
  const RadialGrid& grid = prof.grid;
  const std::size_t n = grid.size();
  const double p = sol.params().p;
  const double ratio = sol.params().b / sol.c();
  Derived d;
  d.upp = second_derivative(prof);
  d.w.resize(n);
  d.S.resize(n);
  d.psi.resize(n);
  d.psi_prime.resize(n);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    const double up = prof.derivs[i];
    d.w[i] = -(d.upp[i] + 2.0 * up / r);
    d.S[i] = 2.0 / (p - 1.0) * prof.values[i] + r * up;
    d.psi[i] = -ratio * r * up;
    d.psi_prime[i] = -ratio * (up + r * d.upp[i]);
    integrand[i] = up * d.psi_prime[i];
  }
  d.kappa = quadrature::ball_integral(grid, integrand);
  return d;
}

std::vector<double> inverse_A0(const core::KirchhoffSolution& sol, std::span<const double> rhs, bool correct) {
  const RadialGrid& grid = sol.profile().grid;
  const std::size_t n = grid.size();
  if (rhs.size() != n) throw Error(ErrorKind::GridMismatch, "right-hand side does not match the solution grid");
  const DiscreteOperator op = assemble_sector(sol, 0, false);
  const double delta = kNearSingularRel * op.potential_scale;
  const linalg::RankOne none;
  if (linalg::count_below(op.matrix, none, delta) != linalg::count_below(op.matrix, none, -delta)) {
    throw Error(ErrorKind::NearSingular, "A_0 has an eigenvalue within " + io::format_double(delta) + " of zero");
  }
  const std::vector<double> b = to_v(grid, rhs);
  std::vector<double> x = linalg::solve_ldlt(op.matrix, b);
  if (correct) {
    const std::vector<double> ax = apply_high_order(op, x);
    std::vector<double> defect(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) defect[i] = b[i] - ax[i];
    const std::vector<double> dx = linalg::solve_ldlt(op.matrix, defect);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  }
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) phi[i] = x[i - 1] / grid[i];
  phi[0] = phi[1];
  return phi;
}

}  // namespace

std::int64_t harmonic_dimension(int k) {
  if (k < 0) return 0;
  const std::int64_t kk = k;
  return (kk + 2) * (kk + 1) / 2;
}

SectorSpec sector_spec(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "sector index must be non-negative");
  const std::int64_t kk = k;
  return {k, kk * (kk + 1), harmonic_dimension(k) - harmonic_dimension(k - 2)};
}

linalg::RankOne DiscreteOperator::euclidean_rank_one() const {
  if (!rank_one) return {};
  return {rank_one->weight, rank_one->factor * rank_one->inner_weight};
}

std::vector<double> DiscreteOperator::apply(std::span<const double> v) const {
  return linalg::apply(matrix, euclidean_rank_one(), v);
}

DiscreteOperator DiscreteOperator::without_rank_one() const {
  DiscreteOperator out = *this;
  out.rank_one.reset();
  return out;
}

DiscreteOperator DiscreteOperator::shifted(double mu) const {
  DiscreteOperator out = *this;
  for (auto& d : out.matrix.diag) d -= mu;
  for (auto& v : out.potential) v -= mu;
  return out;
}

double zero_mode_tolerance(const DiscreteOperator& op) { return kZeroModeRel * op.potential_scale; }

std::vector<double> second_derivative(const RadialProfile& profile) {
  const std::vector<double>& f = profile.derivs;
  const std::size_t n = f.size();
  if (n < 5) throw Error(ErrorKind::GridMismatch, "second derivative needs at least 5 nodes");
  const double h = profile.grid.spacing();
  std::vector<double> g(n);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    g[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  }
  g[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  g[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  g[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
  g[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
  return g;
}

DiscreteOperator assemble_sector(const core::KirchhoffSolution& sol, int k, bool with_rank_one) {
  const RadialProfile& prof = sol.profile();
  check_profile(prof);
  DiscreteOperator op;
  op.sector = sector_spec(k);
  op.grid = prof.grid;
  op.c = sol.c();
  const std::size_t n = prof.grid.size();
  const std::size_t m = n - 2;
  const double h = prof.grid.spacing();
  const double c = op.c;
  const double p = sol.params().p;
  const double lambda = static_cast<double>(op.sector.lambda_k);
  const double stiff = c / (h * h);

  op.matrix.diag.resize(m);
  op.matrix.off.assign(m - 1, -stiff);
  op.potential.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = prof.grid[i + 1];
    const double u = prof.values[i + 1];
    op.potential[i] = 1.0 - p * std::pow(std::abs(u), p - 1.0);
    op.potential_scale = std::max(op.potential_scale, std::abs(op.potential[i]));
    op.matrix.diag[i] = 2.0 * stiff + c * lambda / (r * r) + op.potential[i];
  }
  if (k == 0) op.matrix.diag[0] -= stiff * prof.grid[0] / prof.grid[1];

  if (k == 0 && with_rank_one && sol.params().b > 0.0) {
    const std::vector<double> upp = second_derivative(prof);
    RankOneTerm term;
    term.weight.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = prof.grid[i + 1];
      const double w = -(upp[i + 1] + 2.0 * prof.derivs[i + 1] / r);
      term.weight[i] = r * w;
    }
    term.factor = 2.0 * sol.params().b;
    term.inner_weight = 4.0 * std::numbers::pi * h;
    op.rank_one = std::move(term);
  }
  return op;
}

std::vector<double> apply_high_order(const DiscreteOperator& op, std::span<const double> v) {
  const std::size_t m = op.size();
  if (v.size() != m) throw Error(ErrorKind::GridMismatch, "vector length does not match operator");
  const double h = op.grid.spacing();
  const double r0 = op.grid[0];
  const double r1 = op.grid[1];
  const double power = static_cast<double>(op.sector.k + 1);
  // ext[j] holds node j - 1, covering nodes -1 .. n.
  std::vector<double> ext(m + 4, 0.0);
  std::copy(v.begin(), v.end(), ext.begin() + 2);
  ext[1] = std::pow(r0 / r1, power) * v[0];
  ext[0] = std::pow((r0 - h) / r1, power) * v[0];
  ext[m + 3] = -v[m - 1];

  const double lambda = static_cast<double>(op.sector.lambda_k);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d2 =
        (-ext[i] + 16.0 * ext[i + 1] - 30.0 * ext[i + 2] + 16.0 * ext[i + 3] - ext[i + 4]) / (12.0 * h * h);
    const double r = op.grid[i + 1];
    out[i] = -op.c * d2 + (op.c * lambda / (r * r) + op.potential[i]) * v[i];
  }
  if (op.rank_one) {
    const double s = op.rank_one->factor * op.rank_one->inner_weight * dot(op.rank_one->weight, v);
    for (std::size_t i = 0; i < m; ++i) out[i] += s * op.rank_one->weight[i];
  }
  return out;
}

std::vector<double> eigenvalues_lowest(const DiscreteOperator& op, std::size_t count) {
  if (count == 0 || count > 10) throw Error(ErrorKind::InvalidArgument, "eigenvalue count must be in 1..10");
  if (count > op.size()) throw Error(ErrorKind::InvalidArgument, "more eigenvalues requested than unknowns");
  const linalg::RankOne r1 = op.euclidean_rank_one();
  const double tol = bisection_tolerance(op);
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = linalg::eigenvalue(op.matrix, r1, j, tol);
  return out;
}

std::vector<EigenPair> eigen_lowest(const DiscreteOperator& op, std::size_t count) {
  const std::vector<double> values = eigenvalues_lowest(op, count);
  const linalg::RankOne r1 = op.euclidean_rank_one();
  const double scale = linalg::norm_bound(op.matrix, r1);
  const double root_h = std::sqrt(op.grid.spacing());
  std::vector<EigenPair> out;
  out.reserve(count);
  for (double mu : values) {
    linalg::EigenVector ev = linalg::inverse_iteration(op.matrix, r1, mu, 1e-8 * (std::abs(mu) + scale));
    EigenPair pair;
    pair.eigenvalue = mu;
    pair.residual = ev.residual;
    pair.eigenvector = std::move(ev.v);
    for (auto& x : pair.eigenvector) x /= root_h;
    out.push_back(std::move(pair));
  }
  return out;
}

std::size_t negative_count(const DiscreteOperator& op) {
  return linalg::count_below(op.matrix, op.euclidean_rank_one(), 0.0);
}

double smallest_abs_eigenvalue(const DiscreteOperator& op) {
  const linalg::RankOne r1 = op.euclidean_rank_one();
  const double tol = bisection_tolerance(op);
  const std::size_t neg = linalg::count_below(op.matrix, r1, 0.0);
  double best = std::numeric_limits<double>::infinity();
  if (neg > 0) best = std::abs(linalg::eigenvalue(op.matrix, r1, neg - 1, tol));
  if (neg < op.size()) best = std::min(best, std::abs(linalg::eigenvalue(op.matrix, r1, neg, tol)));
  return best;
}

std::vector<double> apply_inverse_A0(const core::KirchhoffSolution& sol, std::span<const double> rhs) {
  return inverse_A0(sol, rhs, true);
}

IdentityResiduals verify_identities(const core::KirchhoffSolution& sol) {
  const RadialProfile& prof = sol.profile();
  const RadialGrid& grid = prof.grid;
  const std::size_t n = grid.size();
  const double p = sol.params().p;
  const DiscreteOperator op = assemble_sector(sol, 0, false);
  const Derived d = derive(sol);

  std::vector<double> up_p(n);
  std::vector<double> lap(n);
  std::vector<double> x_grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    up_p[i] = -(p - 1.0) * std::pow(std::abs(prof.values[i]), p - 1.0) * prof.values[i];
    lap[i] = -d.w[i];
    x_grad[i] = -grid[i] * prof.derivs[i] / (2.0 * sol.c());
  }
  std::vector<double> two_u(n);
  for (std::size_t i = 0; i < n; ++i) two_u[i] = -2.0 * prof.values[i];

  const std::vector<double> vu = to_v(grid, prof.values);
  const std::vector<double> vS = to_v(grid, d.S);
  const std::vector<double> t1 = to_v(grid, up_p);
  const std::vector<double> t2 = to_v(grid, two_u);
  const std::vector<double> t3 = to_v(grid, x_grad);

  IdentityResiduals out;
  out.au_u = relative_gap(apply_high_order(op, vu), t1);
  out.au_S = relative_gap(apply_high_order(op, vS), t2);
  out.inverse_lap = relative_gap(to_v(grid, inverse_A0(sol, lap, true)), t3);
  out.au_u_3pt = relative_gap(op.apply(vu), t1);
  out.au_S_3pt = relative_gap(op.apply(vS), t2);
  out.inverse_lap_3pt = relative_gap(to_v(grid, inverse_A0(sol, lap, false)), t3);
  return out;
}

double kappa_closed(const core::Params& params, double grad_sq_Q) {
  const core::Coefficient coef = core::coefficient_c(params, grad_sq_Q);
  return params.b * grad_sq_Q / (2.0 * coef.sqrt_c);
}

NonlocalData nonlocal_data(const core::KirchhoffSolution& sol) {
  Derived d = derive(sol);
  NonlocalData out;
  out.grid = sol.profile().grid;
  out.w = std::move(d.w);
  out.S = std::move(d.S);
  out.psi = std::move(d.psi);
  out.psi_prime = std::move(d.psi_prime);
  out.kappa = d.kappa;
  out.kappa_closed = kappa_closed(sol.params(), sol.grad_sq_Q());
  const double err = std::abs(out.kappa - out.kappa_closed);
  if (!(err < kKappaTol)) {
    throw Error(ErrorKind::InvariantViolated, "|kappa - (c-a)/(2c)| = " + io::format_double(err));
  }
  if (!(out.kappa_closed > 0.0 && out.kappa_closed < 0.5)) {
    throw Error(ErrorKind::InvariantViolated, "(c-a)/(2c) outside (0, 1/2): " + io::format_double(out.kappa_closed));
  }
  return out;
}

SingularityProbe probe_singularity(const DiscreteOperator& op, double tolerance) {
  SingularityProbe out;
  out.tolerance = tolerance;
  out.smallest_abs = smallest_abs_eigenvalue(op);
  out.singular = !(out.smallest_abs > tolerance);
  return out;
}

SingularityProbe injected_singularity_probe(const core::KirchhoffSolution& sol) {
  const DiscreteOperator a0 = assemble_sector(sol, 0, false);
  const double mu0 = eigenvalues_lowest(a0, 1).front();
  return probe_singularity(a0.shifted(mu0), zero_mode_tolerance(a0));
}

std::string_view to_string(KernelVerdict v) noexcept {
  switch (v) {
    case KernelVerdict::Trivial: return "trivial_kernel";
    case KernelVerdict::Detected: return "kernel_detected";
    case KernelVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RadialKernelResult radial_kernel_routes(const core::KirchhoffSolution& sol) {
  RadialKernelResult out;
  const Derived d = derive(sol);
  out.kappa = d.kappa;
  out.kappa_closed = kappa_closed(sol.params(), sol.grad_sq_Q());
  out.kappa_error = std::abs(out.kappa - out.kappa_closed);
  out.half_margin = sol.params().a / (2.0 * sol.c());
  out.fixed_point_route = out.kappa_error < kKappaTol && 1.0 - out.kappa > kKappaMargin;

  const DiscreteOperator full = assemble_sector(sol, 0, true);
  const DiscreteOperator a0 = full.without_rank_one();
  out.direct = probe_singularity(full, zero_mode_tolerance(full));
  out.direct_route = !out.direct.singular;
  out.morse_index_A0 = negative_count(a0);
  out.morse_index_full = negative_count(full);
  out.lowest_eigs = eigenvalues_lowest(full, 3);

  if (out.fixed_point_route && out.direct_route) {
    out.verdict = KernelVerdict::Trivial;
  } else if (!out.fixed_point_route && !out.direct_route) {
    out.verdict = KernelVerdict::Detected;
  } else {
    out.verdict = KernelVerdict::Inconclusive;
  }
  return out;
}

RadialKernelResult radial_kernel_test(const core::KirchhoffSolution& sol) {
  RadialKernelResult out = radial_kernel_routes(sol);
  if (out.verdict == KernelVerdict::Inconclusive) {
    throw Error(ErrorKind::Inconclusive,
                std::string("radial kernel routes disagree: fixed point ") +
                    (out.fixed_point_route ? "trivial" : "not trivial") + ", direct " +
                    (out.direct_route ? "trivial" : "not trivial"));
  }
  return out;
}

FloorStudy radial_floor_study(std::span<const core::KirchhoffSolution> levels) {
  if (levels.size() != 3) throw Error(ErrorKind::InvalidArgument, "floor study needs three refinement levels");
  FloorStudy out;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const DiscreteOperator full = assemble_sector(levels[j], 0, true);
    if (j == 0) out.tolerance = zero_mode_tolerance(full);
    out.n.push_back(levels[j].profile().grid.size());
    out.smallest_abs.push_back(smallest_abs_eigenvalue(full));
  }
  const double d01 = out.smallest_abs[0] - out.smallest_abs[1];
  const double d12 = out.smallest_abs[1] - out.smallest_abs[2];
  double order = 2.0;
  if (d01 != 0.0 && d12 != 0.0 && d01 / d12 > 0.0) order = std::log2(d01 / d12);
  out.observed_order = order;
  const double q = std::clamp(order, 1.0, 6.0);
  out.extrapolated = out.smallest_abs[2] - d12 / (std::pow(2.0, q) - 1.0);
  out.floor = 0.5 * out.extrapolated;
  out.pass = out.smallest_abs[0] > out.floor && out.floor > out.tolerance;
  return out;
}

FloorStudy radial_floor_study(const core::Params& params, const radial::ShootingConfig& cfg) {
  std::vector<core::KirchhoffSolution> levels;
  radial::ShootingConfig level = cfg;
  for (int j = 0; j < 3; ++j) {
    levels.push_back(core::build_solution(params, radial::shoot(params.p, level)));
    level.n = 2 * level.n - 1;
  }
  return radial_floor_study(levels);
}

TranslationKernelResult translation_kernel_test(const core::KirchhoffSolution& sol) {
  TranslationKernelResult out;
  const DiscreteOperator a1 = assemble_sector(sol, 1);
  const std::vector<EigenPair> pairs = eigen_lowest(a1, 2);
  out.tolerance = zero_mode_tolerance(a1);
  out.lowest = pairs[0].eigenvalue;
  out.second = pairs[1].eigenvalue;

  const std::vector<double> z = to_v(sol.profile().grid, sol.profile().derivs);
  const std::vector<double>& v = pairs[0].eigenvector;
  out.alignment = std::abs(dot(v, z)) / (norm2(v) * norm2(z));
  double vmax = 0.0;
  double vmin = 0.0;
  for (double x : v) {
    vmax = std::max(vmax, std::abs(x));
    vmin = std::min(vmin, x);
  }
  out.one_signed = vmin >= -1e-6 * vmax;

  const double zn = norm2(z) * a1.potential_scale;
  out.u_prime_residual = norm2(apply_high_order(a1, z)) / zn;
  out.u_prime_residual_3pt = norm2(a1.apply(z)) / zn;

  out.zero_mode = std::abs(out.lowest) <= out.tolerance;
  out.aligned = out.alignment >= kAlignment;
  out.gap = out.second > kGapFactor * out.tolerance;
  out.pass = out.zero_mode && out.aligned && out.gap && out.one_signed;
  return out;
}

PositivityResult positivity_test(const core::KirchhoffSolution& sol, int k, std::uint64_t seed, int trials) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "positivity test needs k >= 2");
  PositivityResult out;
  out.k = k;
  const DiscreteOperator ak = assemble_sector(sol, k);
  const DiscreteOperator a1 = assemble_sector(sol, 1);
  out.lowest = eigenvalues_lowest(ak, 1).front();
  out.margin = zero_mode_tolerance(ak);
  out.positive = out.lowest > out.margin;

  const double delta = sol.c() * static_cast<double>(ak.sector.lambda_k - a1.sector.lambda_k);
  std::mt19937_64 gen(seed);
  const std::span<const double> r = ak.radii();
  std::vector<double> v(ak.size());
  bool dominated = true;
  for (int t = 0; t < trials; ++t) {
    for (auto& x : v) x = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    const double qk = dot(v, ak.apply(v));
    const double q1 = dot(v, a1.apply(v));
    double centrifugal = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) centrifugal += delta * v[i] * v[i] / (r[i] * r[i]);
    const double err = std::abs(qk - q1 - centrifugal) / (std::abs(qk) + std::abs(q1));
    out.domination_error = std::max(out.domination_error, err);
    if (!(err < 1e-12) || !(qk >= q1)) dominated = false;
  }
  out.dominated = dominated;
  out.pass = out.positive && out.dominated;
  return out;
}

NondegeneracyReport nondegeneracy_report(const core::KirchhoffSolution& sol, int k_max) {
  if (k_max < 2) throw Error(ErrorKind::InvalidArgument, "k_max must be at least 2");
  NondegeneracyReport rep;
  rep.params = sol.params();
  rep.c = sol.c();
  rep.kappa_closed = kappa_closed(sol.params(), sol.grad_sq_Q());
  bool inconclusive = false;

  auto fail_note = [&](int k, const std::exception& e) {
    rep.notes.push_back("k=" + std::to_string(k) + ": " + e.what());
    inconclusive = true;
  };

  for (int k = 0; k <= k_max; ++k) {
    SectorResult s;
    s.spec = sector_spec(k);
    try {
      if (k == 0) {
        const RadialKernelResult rk = radial_kernel_routes(sol);
        rep.kappa = rk.kappa;
        rep.tolerance = rk.direct.tolerance;
        rep.morse_index_A0 = rk.morse_index_A0;
        rep.morse_index_full = rk.morse_index_full;
        rep.radial_trivial = rk.verdict == KernelVerdict::Trivial;
        if (rk.verdict == KernelVerdict::Inconclusive) inconclusive = true;
        s.lowest_eigs = rk.lowest_eigs;
        s.verdict = std::string(to_string(rk.verdict));
      } else if (k == 1) {
        const TranslationKernelResult tk = translation_kernel_test(sol);
        rep.a1_alignment = tk.alignment;
        rep.translation_ok = tk.pass;
        s.lowest_eigs = eigenvalues_lowest(assemble_sector(sol, 1), 3);
        s.verdict = tk.pass ? "translation_kernel" : "failed";
      } else {
        const PositivityResult pt = positivity_test(sol, k);
        if (k == 2) rep.positivity_ok = true;
        rep.positivity_ok = rep.positivity_ok && pt.pass;
        s.lowest_eigs = eigenvalues_lowest(assemble_sector(sol, k), 3);
        s.verdict = pt.pass ? "positive" : "failed";
      }
    } catch (const std::exception& e) {
      fail_note(k, e);
      s.verdict = "inconclusive";
      if (k >= 2) rep.positivity_ok = false;
    }
    rep.sectors.push_back(std::move(s));
  }

  bool lambda_increasing = true;
  for (std::size_t i = 1; i < rep.sectors.size(); ++i) {
    lambda_increasing = lambda_increasing && rep.sectors[i].spec.lambda_k > rep.sectors[i - 1].spec.lambda_k;
  }
  rep.tail_argument = lambda_increasing && rep.sectors[2].verdict == "positive";

  if (inconclusive) {
    rep.overall = "inconclusive";
  } else if (rep.radial_trivial && rep.translation_ok && rep.positivity_ok && rep.tail_argument) {
    rep.overall = "nondegenerate";
  } else {
    rep.overall = "failed";
  }
  return rep;
}

std::string report_json(const NondegeneracyReport& rep) {
  io::JsonWriter w;
  w.begin_object();
  w.key("params").begin_object();
  w.field("a", rep.params.a).field("b", rep.params.b).field("p", rep.params.p);
  w.end_object();
  w.field("c", rep.c).field("kappa", rep.kappa).field("kappa_closed", rep.kappa_closed);
  w.field("kappa_half_margin", rep.params.a / (2.0 * rep.c));
  w.field("zero_mode_tolerance", rep.tolerance);
  w.key("sectors").begin_array();
  for (const SectorResult& s : rep.sectors) {
    w.begin_object();
    w.field("k", s.spec.k).field("lambda_k", s.spec.lambda_k).field("multiplicity", s.spec.multiplicity);
    w.key("lowest_eigs").values(s.lowest_eigs);
    w.field("verdict", s.verdict);
    w.end_object();
  }
  w.end_array();
  w.field("a1_alignment", rep.a1_alignment);
  w.field("morse_index_A0", rep.morse_index_A0);
  w.field("morse_index_full", rep.morse_index_full);
  w.field("tail_argument", rep.tail_argument);
  w.key("notes").begin_array();
  for (const auto& note : rep.notes) w.value(note);
  w.end_array();
  w.field("overall", rep.overall);
  w.end_object();
  return w.str();
}

std::string eigenvalues_csv(const NondegeneracyReport& rep) {
  std::string out = "k,index,eigenvalue\n";
  for (const SectorResult& s : rep.sectors) {
    for (std::size_t j = 0; j < s.lowest_eigs.size(); ++j) {
      out += std::to_string(s.spec.k) + "," + std::to_string(j) + "," + io::format_double(s.lowest_eigs[j]) + "\n";
    }
  }
  return out;
}

}  // namespace kirchhoff::spectral
