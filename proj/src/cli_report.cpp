#include "kirchhoff/cli_report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <thread>
#include <tuple>

#include "CLI11.hpp"
#include "kirchhoff/error.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/spectral_verify.hpp"

namespace kirchhoff::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    io::write_file_atomic(cfg.out, text);
  }
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  return v;
}

// Smallest of the successive-ratio orders log2(e_j / e_{j+1}) for a
// sequence of errors under step halving.
double decay_order(double e0, double e1, double e2) {
  auto order = [](double x, double y) {
    if (y == 0.0) return x == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::log2(std::abs(x) / std::abs(y));
  };
  return std::min(order(e0, e1), order(e1, e2));
}

// Order of convergence of x_j from the differences of three levels.
double convergence_order(double x0, double x1, double x2) {
  const double d01 = std::abs(x0 - x1);
  const double d12 = std::abs(x1 - x2);
  if (d12 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(d01 / d12);
}

std::vector<double> random_uniform(std::mt19937_64& gen, std::size_t count, double lo, double hi) {
  std::vector<double> out(count);
  for (auto& x : out) x = lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return out;
}

double max_rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v);
  for (auto& x : out) x *= s;
  return out;
}

double relative_l2(std::span<const double> got, std::span<const double> want, std::span<const double> r) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i + 1 < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]) * r[i] * r[i];
    den += want[i] * want[i] * r[i] * r[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

std::vector<double> Range::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[static_cast<std::size_t>(i)] = geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3 && parts.size() != 4) {
    throw Error(ErrorKind::InvalidArgument, "range must be LO:HI:N or LO:HI:N:log, got '" + text + "'");
  }
  Range r;
  r.lo = parse_number(parts[0]);
  r.hi = parse_number(parts[1]);
  const double count = parse_number(parts[2]);
  if (count != std::floor(count) || count < 1.0 || count > 1e6) {
    throw Error(ErrorKind::InvalidArgument, "range count must be a positive integer, got '" + parts[2] + "'");
  }
  r.count = static_cast<int>(count);
  if (parts.size() == 4) {
    if (parts[3] != "log") throw Error(ErrorKind::InvalidArgument, "unknown range spacing '" + parts[3] + "'");
    r.geometric = true;
  }
  if (!(r.lo > 0.0) || !(r.hi > 0.0)) throw Error(ErrorKind::InvalidArgument, "range endpoints must be positive");
  if (r.lo > r.hi) throw Error(ErrorKind::InvalidArgument, "range must satisfy LO <= HI");
  return r;
}

radial::ShootingConfig RunConfig::shooting() const {
  radial::ShootingConfig s;
  s.r_max = r_max;
  s.n = n;
  return s;
}

void RunConfig::validate() const {
  params.validate();
  if (p_range && !(p_range->lo > 1.0 && p_range->hi < 5.0)) {
    throw Error(ErrorKind::InvalidArgument, "p range must lie inside (1, 5)");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorKind::InvalidArgument, "r_max must be positive");
  if (n < 16) throw Error(ErrorKind::InvalidArgument, "n must be at least 16");
  if ((command == Command::Spectrum || command == Command::Verify || command == Command::Sweep) && k_max < 2) {
    throw Error(ErrorKind::InvalidArgument, "k_max must be at least 2");
  }
  if (!(residual_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "residual tolerance must be positive");
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KIRCHHOFF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

std::vector<Check> verify_suite(const RunConfig& cfg) {
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double threshold, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), value, threshold, pass, std::move(detail)});
  };
  auto below = [&](std::string name, double value, double threshold) {
    add(std::move(name), value, threshold, value < threshold);
  };
  auto at_least = [&](std::string name, double value, double threshold) {
    add(std::move(name), value, threshold, value >= threshold);
  };
  auto guarded = [&](const char* group, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(std::string(group) + ".error", kNaN, kNaN, false, e.what());
    }
  };

  const core::Params& prm = cfg.params;
  const double p = prm.p;
  std::vector<radial::ScalarGroundState> Qs;
  std::vector<core::KirchhoffSolution> sols;
  guarded("setup", [&] {
    radial::ShootingConfig level = cfg.shooting();
    for (int j = 0; j < 3; ++j) {
      Qs.push_back(radial::shoot(p, level));
      sols.push_back(core::build_solution(prm, Qs.back()));
      level.n = 2 * level.n - 1;
    }
  });
  if (sols.size() != 3) return checks;
  const radial::ScalarGroundState& Q = Qs[0];
  const core::KirchhoffSolution& sol = sols[0];

  guarded("radial", [&] {
    below("radial.nehari", Q.nehari_residual(), 1e-6);
    below("radial.pohozaev", Q.pohozaev_residual(), 1e-6);
    const double ratio = 3.0 * (p - 1.0) / (5.0 - p);
    below("radial.grad_mass_ratio", max_rel(Q.grad_sq / Q.mass_sq, ratio), 1e-5);
    const double max_slope = *std::max_element(Q.profile.derivs.begin(), Q.profile.derivs.end());
    add("radial.monotone", max_slope, 0.0, max_slope <= 0.0);
    const double min_value = *std::min_element(Q.profile.values.begin(), Q.profile.values.end());
    add("radial.positive", min_value, 0.0, min_value > 0.0);
    below("radial.decay_rate", std::abs(Q.decay_rate - 1.0), 1e-2);
    bool nested = true;
    for (std::size_t i = 0; i < Q.bisection.size(); ++i) {
      const auto& s = Q.bisection[i];
      nested = nested && s.lo <= s.hi && s.lo_outcome == radial::Outcome::Undershoot &&
               s.hi_outcome == radial::Outcome::Overshoot;
      if (i > 0) nested = nested && s.lo >= Q.bisection[i - 1].lo && s.hi <= Q.bisection[i - 1].hi;
    }
    add("radial.bisection_nested", static_cast<double>(Q.bisection.size()), kNaN, nested);
    at_least("radial.grad_sq_refinement_order", convergence_order(Qs[0].grad_sq, Qs[1].grad_sq, Qs[2].grad_sq), 1.9);
  });

  guarded("core", [&] {
    const core::Coefficient coef = core::coefficient_c(prm, Q.grad_sq);
    const double s = coef.sqrt_c;
    below("core.defining_quadratic", std::abs(s * s - prm.b * Q.grad_sq * s - prm.a) / coef.c, 1e-14);

    std::mt19937_64 gen(7);
    const auto as = random_uniform(gen, 100, 0.01, 100.0);
    const auto bs = random_uniform(gen, 100, 0.01, 100.0);
    double worst = max_rel(core::fixed_point_c(prm, Q.grad_sq), coef.c);
    for (std::size_t i = 0; i < as.size(); ++i) {
      const core::Params rp{as[i], bs[i], p};
      worst = std::max(worst, max_rel(core::fixed_point_c(rp, Q.grad_sq), core::coefficient_c(rp, Q.grad_sq).c));
    }
    below("core.fixed_point_agreement", worst, 1e-10);

    below("core.self_consistency", max_rel(prm.a + prm.b * sol.grad_sq_u(), sol.c()), 1e-10);
    below("core.gradient_scaling", max_rel(sol.grad_sq_u(), sol.sqrt_c() * sol.grad_sq_Q()), 1e-8);
    const core::IntegralIdentities ids = core::integral_identities(sol);
    below("core.kirchhoff_nehari", ids.nehari, 1e-5);
    below("core.kirchhoff_pohozaev", ids.pohozaev, 1e-5);

    double res[3];
    for (int j = 0; j < 3; ++j) res[j] = core::residual(sols[static_cast<std::size_t>(j)]);
    below("core.residual", res[0], cfg.residual_tol);
    at_least("core.residual_refinement_order", decay_order(res[0], res[1], res[2]), 1.9);

    const core::Vec3 t{0.3, -1.7, 2.2};
    const core::KirchhoffSolution moved = sol.translated(t);
    double gap = std::abs(core::residual(moved) - res[0]);
    gap = std::max(gap, std::abs(core::energy(moved).total - core::energy(sol).total));
    std::mt19937_64 pts(11);
    for (int i = 0; i < 16; ++i) {
      const auto xs = random_uniform(pts, 3, -5.0 * sol.sqrt_c(), 5.0 * sol.sqrt_c());
      const core::Vec3 x{xs[0], xs[1], xs[2]};
      const core::Vec3 shifted{x[0] - t[0], x[1] - t[1], x[2] - t[2]};
      gap = std::max(gap, std::abs(core::evaluate(moved, x, t) - core::evaluate(moved, shifted, {0.0, 0.0, 0.0})));
    }
    add("core.translation_invariance", gap, 0.0, gap == 0.0);

    const double grid_ab[] = {0.01, 0.1, 1.0, 10.0, 100.0};
    int violations = 0;
    for (double fixed : grid_ab) {
      double prev_a = 0.0;
      double prev_b = 0.0;
      for (double x : grid_ab) {
        const double ca = core::coefficient_c({x, fixed, p}, Q.grad_sq).c;
        const double cb = core::coefficient_c({fixed, x, p}, Q.grad_sq).c;
        if (!(ca > prev_a)) ++violations;
        if (!(cb > prev_b)) ++violations;
        prev_a = ca;
        prev_b = cb;
      }
    }
    add("core.c_monotone", violations, 0.0, violations == 0);

    double m[3];
    for (int j = 0; j < 3; ++j) m[j] = core::energy(sols[static_cast<std::size_t>(j)]).m;
    add("core.energy_positive", m[0], 0.0, m[0] > 0.0);
    below("core.energy_refinement", std::max(max_rel(m[0], m[2]), max_rel(m[1], m[2])), 1e-6);
  });

  guarded("spectral.kappa", [&] {
    const spectral::NonlocalData nd = spectral::nonlocal_data(sol);
    below("spectral.kappa_identity", std::abs(nd.kappa - nd.kappa_closed), 1e-6);
  });

  guarded("spectral", [&] {

    std::mt19937_64 gen(13);
    const auto as = random_uniform(gen, 100, 0.01, 100.0);
    const auto bs = random_uniform(gen, 100, 0.01, 100.0);
    int outside = 0;
    for (std::size_t i = 0; i < as.size(); ++i) {
      const double k = spectral::kappa_closed({as[i], bs[i], p}, Q.grad_sq);
      if (!(k > 0.0 && k < 0.5)) ++outside;
    }
    add("spectral.kappa_closed_range", outside, 0.0, outside == 0);

    const spectral::DiscreteOperator a1 = spectral::assemble_sector(sol, 1);
    double worst_diff = 0.0;
    std::vector<double> lowest;
    for (int k = 2; k <= cfg.k_max; ++k) {
      const spectral::DiscreteOperator ak = spectral::assemble_sector(sol, k);
      const double delta = sol.c() * static_cast<double>(ak.sector.lambda_k - a1.sector.lambda_k);
      for (std::size_t i = 0; i < ak.size(); ++i) {
        const double r = ak.radii()[i];
        const double diff = ak.matrix.diag[i] - a1.matrix.diag[i] - delta / (r * r);
        worst_diff = std::max(worst_diff, std::abs(diff) / (std::abs(ak.matrix.diag[i]) + std::abs(a1.matrix.diag[i])));
      }
    }
    below("spectral.sector_difference", worst_diff, 1e-14);

    const spectral::DiscreteOperator full = spectral::assemble_sector(sol, 0, true);
    const spectral::DiscreteOperator a0 = full.without_rank_one();
    const auto e_full = spectral::eigenvalues_lowest(full, 3);
    const auto e_a0 = spectral::eigenvalues_lowest(a0, 3);
    double interlace = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 3; ++j) interlace = std::min(interlace, e_full[j] - e_a0[j]);
    const bool psd = full.rank_one && full.rank_one->factor > 0.0 && full.rank_one->inner_weight > 0.0;
    add("spectral.rank_one_interlacing", interlace, 0.0, psd && interlace >= 0.0);

    double worst_res = 0.0;
    for (int k = 0; k <= cfg.k_max; ++k) {
      const spectral::DiscreteOperator op = spectral::assemble_sector(sol, k);
      const double scale = linalg::norm_bound(op.matrix, op.euclidean_rank_one());
      for (const auto& pair : spectral::eigen_lowest(op, 3)) {
        worst_res = std::max(worst_res, pair.residual / (std::abs(pair.eigenvalue) + scale));
      }
    }
    below("spectral.eigen_residuals", worst_res, 1e-8);

    spectral::IdentityResiduals ir[3];
    for (int j = 0; j < 3; ++j) ir[j] = spectral::verify_identities(sols[static_cast<std::size_t>(j)]);
    below("spectral.identity_Au_u", ir[0].au_u, 1e-4);
    below("spectral.identity_Au_S", ir[0].au_S, 1e-4);
    below("spectral.identity_inverse_lap", ir[0].inverse_lap, 1e-4);
    at_least("spectral.identity_Au_u_order", decay_order(ir[0].au_u_3pt, ir[1].au_u_3pt, ir[2].au_u_3pt), 1.9);
    at_least("spectral.identity_Au_S_order", decay_order(ir[0].au_S_3pt, ir[1].au_S_3pt, ir[2].au_S_3pt), 1.9);
    at_least("spectral.identity_inverse_lap_order",
             decay_order(ir[0].inverse_lap_3pt, ir[1].inverse_lap_3pt, ir[2].inverse_lap_3pt), 1.9);

    const auto& prof = sol.profile();
    std::vector<double> rhs_u(prof.values.size());
    for (std::size_t i = 0; i < rhs_u.size(); ++i) {
      rhs_u[i] = -(p - 1.0) * std::pow(std::abs(prof.values[i]), p - 1.0) * prof.values[i];
    }
    const auto nodes = prof.grid.nodes();
    std::vector<double> S(nodes.size());
    for (std::size_t i = 0; i < S.size(); ++i) S[i] = 2.0 / (p - 1.0) * prof.values[i] + nodes[i] * prof.derivs[i];
    below("spectral.inverse_A0_u", relative_l2(spectral::apply_inverse_A0(sol, rhs_u), prof.values, nodes), 1e-4);
    below("spectral.inverse_A0_S",
          relative_l2(spectral::apply_inverse_A0(sol, scaled(prof.values, -2.0)), S, nodes), 1e-4);

    const spectral::TranslationKernelResult tk = spectral::translation_kernel_test(sol);
    add("spectral.a1_zero_mode", tk.lowest, tk.tolerance, tk.zero_mode);
    at_least("spectral.a1_alignment", tk.alignment, 0.999);
    add("spectral.a1_gap", tk.second, 10.0 * tk.tolerance, tk.gap);
    add("spectral.a1_zero_mode_one_signed", kNaN, kNaN, tk.one_signed);
    below("spectral.a1_u_prime_residual", tk.u_prime_residual, 1e-4);
    double mu[3];
    mu[0] = tk.lowest;
    for (int j = 1; j < 3; ++j) {
      mu[j] = spectral::eigenvalues_lowest(spectral::assemble_sector(sols[static_cast<std::size_t>(j)], 1), 1)[0];
    }
    at_least("spectral.a1_refinement_order", decay_order(mu[0], mu[1], mu[2]), 1.9);

    bool monotone = true;
    for (int k = 2; k <= cfg.k_max; ++k) {
      const spectral::PositivityResult pr = spectral::positivity_test(sol, k);
      add("spectral.positivity_k" + std::to_string(k), pr.lowest, pr.margin, pr.pass);
      if (!lowest.empty()) monotone = monotone && pr.lowest >= lowest.back();
      lowest.push_back(pr.lowest);
    }
    add("spectral.lowest_monotone_in_k", kNaN, kNaN, monotone);

    const spectral::RadialKernelResult rk = spectral::radial_kernel_routes(sol);
    add("spectral.radial_fixed_point_route", 1.0 - rk.kappa, 1e-3, rk.fixed_point_route);
    add("spectral.radial_direct_route", rk.direct.smallest_abs, rk.direct.tolerance, rk.direct_route);
    add("spectral.morse_index_A0", static_cast<double>(rk.morse_index_A0), 1.0, rk.morse_index_A0 == 1);
    const spectral::SingularityProbe inj = spectral::injected_singularity_probe(sol);
    add("spectral.injected_singularity_detected", inj.smallest_abs, inj.tolerance, inj.singular);
    const spectral::FloorStudy fs = spectral::radial_floor_study(sols);
    add("spectral.radial_floor", fs.smallest_abs[0], fs.floor, fs.pass);
  });
  return checks;
}

std::vector<SweepRecord> sweep(const RunConfig& cfg, unsigned threads) {
  const std::vector<double> as = cfg.a_range ? cfg.a_range->points() : std::vector<double>{cfg.params.a};
  const std::vector<double> bs = cfg.b_range ? cfg.b_range->points() : std::vector<double>{cfg.params.b};
  const std::vector<double> ps = cfg.p_range ? cfg.p_range->points() : std::vector<double>{cfg.params.p};

  std::vector<SweepRecord> rows;
  for (double a : as) {
    for (double b : bs) {
      for (double p : ps) rows.push_back({a, b, p, kNaN, kNaN, kNaN, kNaN, "error"});
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const SweepRecord& x, const SweepRecord& y) { return std::tie(x.a, x.b, x.p) < std::tie(y.a, y.b, y.p); });

  std::vector<double> distinct_p(ps);
  std::sort(distinct_p.begin(), distinct_p.end());
  distinct_p.erase(std::unique(distinct_p.begin(), distinct_p.end()), distinct_p.end());

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
  auto run_pool = [workers](std::size_t count, auto&& job) {
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < std::min<std::size_t>(workers, count); ++w) pool.emplace_back(loop);
    loop();
    for (auto& t : pool) t.join();
  };

  // Ground states are read-only once computed; workers only write their own
  // slot of `cache` and `rows`.
  std::vector<std::optional<radial::ScalarGroundState>> cache(distinct_p.size());
  const radial::ShootingConfig shooting = cfg.shooting();
  run_pool(distinct_p.size(), [&](std::size_t i) {
    try {
      cache[i] = radial::shoot(distinct_p[i], shooting);
    } catch (const std::exception&) {
      cache[i].reset();
    }
  });

  run_pool(rows.size(), [&](std::size_t i) {
    SweepRecord& row = rows[i];
    const auto slot = std::lower_bound(distinct_p.begin(), distinct_p.end(), row.p) - distinct_p.begin();
    const auto& Q = cache[static_cast<std::size_t>(slot)];
    if (!Q) return;
    try {
      const core::Params prm{row.a, row.b, row.p};
      const core::KirchhoffSolution sol = core::build_solution(prm, *Q);
      row.sqrt_c = sol.sqrt_c();
      row.c = sol.c();
      row.m = core::energy(sol).m;
      row.kappa_closed = spectral::kappa_closed(prm, Q->grad_sq);
      row.verdict = spectral::nondegeneracy_report(sol, cfg.k_max).overall;
    } catch (const std::exception&) {
      row.verdict = "error";
    }
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRecord>& rows) {
  std::string out = "a,b,p,sqrt_c,c,m,kappa_closed,verdict\n";
  for (const SweepRecord& r : rows) {
    for (double v : {r.a, r.b, r.p, r.sqrt_c, r.c, r.m, r.kappa_closed}) {
      out += std::isfinite(v) ? io::format_double(v) : std::string("nan");
      out += ',';
    }
    out += r.verdict;
    out += '\n';
  }
  return out;
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const radial::ScalarGroundState Q = radial::shoot(cfg.params.p, cfg.shooting());
    const core::KirchhoffSolution sol = core::build_solution(cfg.params, Q);
    const double res = core::residual(sol);
    const core::EnergyReport e = core::energy(sol);
    emit(cfg, out, core::solution_json(sol, res, e));
    if (!cfg.profile_csv.empty()) io::write_file_atomic(cfg.profile_csv, core::solution_csv(sol, Q.profile));
    if (!(res < cfg.residual_tol)) {
      err << "residual " << io::format_double(res) << " above tolerance " << io::format_double(cfg.residual_tol)
          << "\n";
      return kExitFailed;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "solve failed: " << e.what() << "\n";
    return kExitSolver;
  }
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<Check> checks = verify_suite(cfg);
  const bool all = !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  std::string text;
  if (cfg.json) {
    io::JsonWriter w;
    w.begin_object();
    w.key("params").begin_object();
    w.field("a", cfg.params.a).field("b", cfg.params.b).field("p", cfg.params.p);
    w.end_object();
    w.key("grid").begin_object().field("r_max", cfg.r_max).field("n", cfg.n).end_object();
    w.key("checks").begin_array();
    for (const Check& c : checks) {
      w.begin_object();
      w.field("name", c.name).field("value", c.value).field("threshold", c.threshold).field("pass", c.pass);
      if (!c.detail.empty()) w.field("detail", c.detail);
      w.end_object();
    }
    w.end_array();
    w.field("overall", all ? "pass" : "fail");
    w.end_object();
    text = w.str();
  } else {
    for (const Check& c : checks) {
      text += (c.pass ? "PASS " : "FAIL ") + c.name + " value=" + io::format_double(c.value) +
              " threshold=" + io::format_double(c.threshold);
      if (!c.detail.empty()) text += " (" + c.detail + ")";
      text += "\n";
    }
    text += all ? "overall: pass\n" : "overall: fail\n";
  }
  try {
    emit(cfg, out, text);
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kExitSolver;
  }
  return all ? kExitOk : kExitFailed;
}

int run_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  spectral::NondegeneracyReport rep;
  try {
    const radial::ScalarGroundState Q = radial::shoot(cfg.params.p, cfg.shooting());
    const core::KirchhoffSolution sol = core::build_solution(cfg.params, Q);
    rep = spectral::nondegeneracy_report(sol, cfg.k_max);
    emit(cfg, out, spectral::report_json(rep));
    if (!cfg.eigs_csv.empty()) io::write_file_atomic(cfg.eigs_csv, spectral::eigenvalues_csv(rep));
  } catch (const std::exception& e) {
    err << "spectrum failed: " << e.what() << "\n";
    return kExitSolver;
  }
  if (rep.overall != "nondegenerate") {
    err << "verdict: " << rep.overall << "\n";
    return kExitFailed;
  }
  return kExitOk;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<SweepRecord> rows = sweep(cfg, worker_count());
  try {
    emit(cfg, out, sweep_csv(rows));
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << "\n";
    return kExitSolver;
  }
  const auto errors = std::count_if(rows.begin(), rows.end(), [](const SweepRecord& r) { return r.verdict == "error"; });
  if (errors > 0) {
    err << errors << " sweep row(s) failed\n";
    return kExitFailed;
  }
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive solutions of the Kirchhoff equation in R^3 and their nondegeneracy"};
  app.name("kirchhoff");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string a_range;
  std::string b_range;
  std::string p_range;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.params.a, "coefficient a > 0");
    sub->add_option("--b", cfg.params.b, "coefficient b > 0");
    sub->add_option("--p", cfg.params.p, "exponent, 1 < p < 5");
    sub->add_option("--r-max", cfg.r_max, "grid radius for Q");
    sub->add_option("--n", cfg.n, "grid points");
    sub->add_option("--k-max", cfg.k_max, "highest harmonic sector");
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option("--residual-tol", cfg.residual_tol, "PDE residual tolerance");
  };

  CLI::App* solve = app.add_subcommand("solve", "construct the solution and report c, m and the residual");
  add_common(solve);
  solve->add_option("--profile-csv", cfg.profile_csv, "write r,Q,Qprime,u,uprime");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(verify);
  verify->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* spectrum = app.add_subcommand("spectrum", "sector-wise nondegeneracy report");
  add_common(spectrum);
  spectrum->add_option("--eigs-csv", cfg.eigs_csv, "write k,index,eigenvalue");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--a-range", a_range, "LO:HI:N[:log]");
  sweep_cmd->add_option("--b-range", b_range, "LO:HI:N[:log]");
  sweep_cmd->add_option("--p-range", p_range, "LO:HI:N[:log]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!a_range.empty()) cfg.a_range = parse_range(a_range);
    if (!b_range.empty()) cfg.b_range = parse_range(b_range);
    if (!p_range.empty()) cfg.p_range = parse_range(p_range);
    if (solve->parsed()) cfg.command = Command::Solve;
    if (verify->parsed()) cfg.command = Command::Verify;
    if (spectrum->parsed()) cfg.command = Command::Spectrum;
    if (sweep_cmd->parsed()) cfg.command = Command::Sweep;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  switch (cfg.command) {
    case Command::Solve: return run_solve(cfg, out, err);
    case Command::Verify: return run_verify(cfg, out, err);
    case Command::Spectrum: return run_spectrum(cfg, out, err);
    case Command::Sweep: return run_sweep(cfg, out, err);
  }
  return kExitUsage;
}

}  // namespace kirchhoff::cli
