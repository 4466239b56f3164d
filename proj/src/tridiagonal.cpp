#include "kirchhoff/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kirchhoff/error.hpp"

namespace kirchhoff::linalg {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Gaussian elimination with partial pivoting for a shifted tridiagonal
// matrix; the factors are reused for several right-hand sides.
class ShiftedLU {
 public:
  ShiftedLU(const SymTridiag& t, double shift, double pivot_floor) : n_(t.size()) {
    d_.resize(n_);
    du_.assign(n_, 0.0);
    du2_.assign(n_, 0.0);
    l_.assign(n_, 0.0);
    swap_.assign(n_, false);
    std::vector<double> dl(t.off);
    for (std::size_t i = 0; i < n_; ++i) d_[i] = t.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) du_[i] = t.off[i];
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl[i])) {
        if (d_[i] == 0.0) d_[i] = pivot_floor;
        l_[i] = dl[i] / d_[i];
        d_[i + 1] -= l_[i] * du_[i];
      } else {
        swap_[i] = true;
        l_[i] = d_[i] / dl[i];
        d_[i] = dl[i];
        const double tmp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = tmp - l_[i] * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -l_[i] * du_[i + 1];
        }
      }
    }
    if (n_ > 0 && d_[n_ - 1] == 0.0) d_[n_ - 1] = pivot_floor;
    for (auto& x : d_) {
      if (std::abs(x) < pivot_floor) x = std::copysign(pivot_floor, x == 0.0 ? 1.0 : x);
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swap_[i]) {
        const double tmp = x[i];
        x[i] = x[i + 1];
        x[i + 1] = tmp - l_[i] * x[i];
      } else {
        x[i + 1] -= l_[i] * x[i];
      }
    }
    for (std::size_t k = n_; k-- > 0;) {
      double s = x[k];
      if (k + 1 < n_) s -= du_[k] * x[k + 1];
      if (k + 2 < n_) s -= du2_[k] * x[k + 2];
      x[k] = s / d_[k];
    }
    return x;
  }

 private:
  std::size_t n_;
  std::vector<double> d_, du_, du2_, l_;
  std::vector<bool> swap_;
};

}  // namespace

void SymTridiag::validate() const {
  if (diag.empty()) throw Error(ErrorKind::InvalidArgument, "empty tridiagonal matrix");
  if (off.size() + 1 != diag.size()) {
    throw Error(ErrorKind::InvalidArgument, "off-diagonal length must be one less than the diagonal");
  }
  for (double x : diag) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "non-finite diagonal entry");
  }
  for (double x : off) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "non-finite off-diagonal entry");
  }
}

std::vector<double> apply(const SymTridiag& t, const RankOne& r1, std::span<const double> x) {
  const std::size_t n = t.size();
  if (x.size() != n) throw Error(ErrorKind::GridMismatch, "vector length does not match operator");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = t.diag[i] * x[i];
    if (i > 0) s += t.off[i - 1] * x[i - 1];
    if (i + 1 < n) s += t.off[i] * x[i + 1];
    y[i] = s;
  }
  if (r1.active()) {
    const double s = r1.sigma * dot(r1.q, x);
    for (std::size_t i = 0; i < n; ++i) y[i] += s * r1.q[i];
  }
  return y;
}

double norm_bound(const SymTridiag& t, const RankOne& r1) {
  const std::size_t n = t.size();
  double qsum = 0.0;
  if (r1.active()) {
    for (double v : r1.q) qsum += std::abs(v);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(t.diag[i]);
    if (i > 0) s += std::abs(t.off[i - 1]);
    if (i + 1 < n) s += std::abs(t.off[i]);
    if (r1.active()) s += std::abs(r1.sigma * r1.q[i]) * qsum;
    best = std::max(best, s);
  }
  return best;
}

std::size_t count_below(const SymTridiag& t, const RankOne& r1, double x) {
  const std::size_t n = t.size();
  const bool rank_one = r1.active();
  std::size_t negatives = 0;
  double d = 0.0;
  double z = 0.0;
  double secular = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      d = t.diag[0] - x;
      if (rank_one) z = r1.q[0];
    } else {
      const double l = t.off[i - 1] / d;
      d = t.diag[i] - x - l * t.off[i - 1];
      if (rank_one) z = r1.q[i] - l * z;
    }
    if (d == 0.0) d = -kTiny;
    if (d < 0.0) ++negatives;
    if (rank_one) secular += z * z / d;
  }
  if (!rank_one) return negatives;
  const double f = 1.0 + r1.sigma * secular;
  if (r1.sigma > 0.0) return f <= 0.0 ? negatives - 1 : negatives;
  return f < 0.0 ? negatives + 1 : negatives;
}

double eigenvalue(const SymTridiag& t, const RankOne& r1, std::size_t index, double tol) {
  t.validate();
  if (index >= t.size()) throw Error(ErrorKind::InvalidArgument, "eigenvalue index out of range");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "bisection tolerance must be positive");
  const double bound = norm_bound(t, r1);
  double lo = -bound - 1.0;
  double hi = bound + 1.0;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(t, r1, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EigenVector inverse_iteration(const SymTridiag& t, const RankOne& r1, double mu, double tol, int max_iter) {
  t.validate();
  const std::size_t n = t.size();
  const double scale = norm_bound(t, r1);
  const ShiftedLU lu(t, mu, std::numeric_limits<double>::epsilon() * scale);
  std::vector<double> z;
  double zq = 0.0;
  if (r1.active()) {
    z = lu.solve(r1.q);
    zq = dot(r1.q, z);
  }

  EigenVector out;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.618034 * static_cast<double>(i + 1));
  const double v0 = norm2(v);
  for (auto& x : v) x /= v0;

  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> x = lu.solve(v);
    if (r1.active()) {
      const double den = 1.0 + r1.sigma * zq;
      if (den == 0.0) {
        x = z;
      } else {
        const double coef = r1.sigma * dot(r1.q, x) / den;
        for (std::size_t i = 0; i < n; ++i) x[i] -= coef * z[i];
      }
    }
    const double nx = norm2(x);
    if (!(nx > 0.0) || !std::isfinite(nx)) throw Error(ErrorKind::NonFinite, "inverse iteration diverged");
    for (auto& e : x) e /= nx;
    v = std::move(x);

    std::vector<double> av = apply(t, r1, v);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (av[i] - mu * v[i]) * (av[i] - mu * v[i]);
    out.residual = std::sqrt(res);
    out.iterations = it;
    if (out.residual < tol && it >= 2) break;
  }
  if (!(out.residual < tol)) {
    throw Error(ErrorKind::IterationLimit,
                "inverse iteration residual " + std::to_string(out.residual) + " above tolerance");
  }
  const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*big < 0.0) {
    for (auto& e : v) e = -e;
  }
  out.v = std::move(v);
  return out;
}

std::vector<double> solve_ldlt(const SymTridiag& t, std::span<const double> b) {
  t.validate();
  const std::size_t n = t.size();
  if (b.size() != n) throw Error(ErrorKind::GridMismatch, "right-hand side length does not match operator");
  std::vector<double> d(n);
  std::vector<double> l(n > 0 ? n - 1 : 0);
  std::vector<double> y(b.begin(), b.end());
  const double floor = std::numeric_limits<double>::epsilon() * norm_bound(t, RankOne{});
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i];
    if (i > 0) {
      d[i] -= l[i - 1] * t.off[i - 1];
      y[i] -= l[i - 1] * y[i - 1];
    }
    if (std::abs(d[i]) <= floor) throw Error(ErrorKind::NearSingular, "zero pivot in LDL^T factorization");
    if (i + 1 < n) l[i] = t.off[i] / d[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    y[i] /= d[i];
    if (i + 1 < n) y[i] -= l[i] * y[i + 1];
  }
  return y;
}

}  // namespace kirchhoff::linalg
