#pragma once

// Symmetric tridiagonal matrices with an optional symmetric rank-one update
// T + sigma q q^T: inertia counts, bisection eigenvalues, inverse iteration
// and linear solves.

#include <cstddef>
#include <span>
#include <vector>

namespace kirchhoff::linalg {

struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;  ///< off[i] couples i and i+1

  std::size_t size() const noexcept { return diag.size(); }
  /// Throws InvalidArgument on inconsistent sizes or non-finite entries.
  void validate() const;
};

struct RankOne {
  std::vector<double> q;
  double sigma = 0.0;

  bool active() const noexcept { return sigma != 0.0 && !q.empty(); }
};

/// y = (T + sigma q q^T) x.
std::vector<double> apply(const SymTridiag& t, const RankOne& r1, std::span<const double> x);

/// Max absolute row sum of T + sigma q q^T (bounds the spectral radius).
double norm_bound(const SymTridiag& t, const RankOne& r1);

/// Number of eigenvalues strictly below x, from the LDL^T inertia of T - x
/// and the sign of the secular function 1 + sigma q^T (T - x)^{-1} q.
std::size_t count_below(const SymTridiag& t, const RankOne& r1, double x);

/// The `index`-th smallest eigenvalue (0-based) by bisection to absolute
/// width `tol`.
double eigenvalue(const SymTridiag& t, const RankOne& r1, std::size_t index, double tol);

struct EigenVector {
  std::vector<double> v;  ///< Euclidean unit norm, largest entry positive
  double residual = 0.0;  ///< ||(A - mu) v||
  int iterations = 0;
};

/// Inverse iteration for the eigenvector of `mu`, with the rank-one part
/// handled by Sherman-Morrison. Throws IterationLimit when the residual does
/// not fall below `tol` within `max_iter` sweeps.
EigenVector inverse_iteration(const SymTridiag& t, const RankOne& r1, double mu, double tol, int max_iter = 8);

/// Solves T x = b by LDL^T without pivoting. Throws NearSingular on a zero
/// pivot.
std::vector<double> solve_ldlt(const SymTridiag& t, std::span<const double> b);

}  // namespace kirchhoff::linalg
