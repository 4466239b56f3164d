#pragma once

// Sector-wise spectral analysis of the linearisation
//   L+ phi = -c Lap phi + phi - p u^{p-1} phi + 2b (int grad u . grad phi) (-Lap u)
// around the constructed solution. Each spherical-harmonic sector k reduces
// to a radial operator A_k acting on v = r phi.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kirchhoff/grid.hpp"
#include "kirchhoff/kirchhoff_core.hpp"
#include "kirchhoff/radial_groundstate.hpp"
#include "kirchhoff/tridiagonal.hpp"

namespace kirchhoff::spectral {

struct SectorSpec {
  int k = 0;
  std::int64_t lambda_k = 0;      ///< k (k + 1)
  std::int64_t multiplicity = 0;  ///< 2k + 1
};

/// Dimension M_k of homogeneous polynomials of degree k in three variables,
/// zero for k < 0.
std::int64_t harmonic_dimension(int k);

SectorSpec sector_spec(int k);

/// Nonlocal part  factor * w~ <w~, v>  with  <x, y> = inner_weight * sum x_i y_i.
struct RankOneTerm {
  std::vector<double> weight;
  double factor = 0.0;
  double inner_weight = 0.0;
};

/// Three-point discretisation of
///   -c v'' + (c lambda_k / r^2 + 1 - p u^{p-1}) v
/// on the interior nodes 1..n-2 with v = 0 at both ends. For k = 0 the
/// first row uses v_0 = (r_0 / r_1) v_1.
struct DiscreteOperator {
  RadialGrid grid;
  SectorSpec sector;
  double c = 1.0;
  linalg::SymTridiag matrix;
  std::vector<double> potential;  ///< 1 - p u^{p-1} on interior nodes
  double potential_scale = 0.0;   ///< max |1 - p u^{p-1}|
  std::optional<RankOneTerm> rank_one;

  std::size_t size() const noexcept { return matrix.size(); }
  /// Radii of the unknowns.
  std::span<const double> radii() const noexcept { return grid.nodes().subspan(1, size()); }
  /// Rank-one term in Euclidean form sigma q q^T.
  linalg::RankOne euclidean_rank_one() const;
  std::vector<double> apply(std::span<const double> v) const;
  DiscreteOperator without_rank_one() const;
  /// Operator minus mu times the identity.
  DiscreteOperator shifted(double mu) const;
};

/// Zero-mode tolerance 1e-4 times the potential scale.
double zero_mode_tolerance(const DiscreteOperator& op);

/// Throws GridMismatch when the profile grid is too small or non-uniform.
DiscreteOperator assemble_sector(const core::KirchhoffSolution& sol, int k, bool with_rank_one = true);

/// Fourth-order counterpart of `op` applied to v, using odd or even
/// extension of v through the origin according to the sector.
std::vector<double> apply_high_order(const DiscreteOperator& op, std::span<const double> v);

struct EigenPair {
  double eigenvalue = 0.0;
  std::vector<double> eigenvector;  ///< v = r phi on interior nodes, h sum v^2 = 1
  double residual = 0.0;            ///< ||(Op - mu) v|| in the same norm
};

/// Lowest `count` (1..10) eigenpairs.
std::vector<EigenPair> eigen_lowest(const DiscreteOperator& op, std::size_t count);

/// Lowest `count` eigenvalues without eigenvectors.
std::vector<double> eigenvalues_lowest(const DiscreteOperator& op, std::size_t count);

/// Number of eigenvalues below zero.
std::size_t negative_count(const DiscreteOperator& op);

/// Smallest |eigenvalue|.
double smallest_abs_eigenvalue(const DiscreteOperator& op);

/// Solves A_0 phi = rhs (no rank-one term) for samples on the full grid.
/// The three-point system is factored by LDL^T and one defect-correction
/// step with the fourth-order operator is applied. Throws NearSingular when
/// an eigenvalue of A_0 lies within 1e-8 times the potential scale of zero.
std::vector<double> apply_inverse_A0(const core::KirchhoffSolution& sol, std::span<const double> rhs);

struct IdentityResiduals {
  double au_u = 0.0;        ///< |A u + (p-1) u^p| / |(p-1) u^p|
  double au_S = 0.0;        ///< |A S + 2u| / |2u|
  double inverse_lap = 0.0; ///< |A^{-1} Lap u + r u' / (2c)| / |r u' / (2c)|
  // Same quantities with the three-point operator, for diagnostics.
  double au_u_3pt = 0.0;
  double au_S_3pt = 0.0;
  double inverse_lap_3pt = 0.0;
};

IdentityResiduals verify_identities(const core::KirchhoffSolution& sol);

struct NonlocalData {
  RadialGrid grid;
  std::vector<double> w;          ///< -Lap u
  std::vector<double> S;          ///< 2/(p-1) u + r u'
  std::vector<double> psi;        ///< -(b/c) r u'
  std::vector<double> psi_prime;  ///< -(b/c) (u' + r u'')
  double kappa = 0.0;             ///< int grad u . grad psi
  double kappa_closed = 0.0;      ///< (c - a) / (2c)
};

/// Throws InvariantViolated unless |kappa - kappa_closed| < 1e-6 and
/// 0 < kappa_closed < 1/2.
NonlocalData nonlocal_data(const core::KirchhoffSolution& sol);

/// (c - a) / (2c) evaluated as b G_Q / (2 sqrt(c)).
double kappa_closed(const core::Params& params, double grad_sq_Q);

/// Second derivative from fourth-order differences of the stored u'.
std::vector<double> second_derivative(const RadialProfile& profile);

struct SingularityProbe {
  double smallest_abs = 0.0;
  double tolerance = 0.0;
  bool singular = false;
};

SingularityProbe probe_singularity(const DiscreteOperator& op, double tolerance);

/// A_0 without the rank-one term, shifted by its lowest eigenvalue, must be
/// reported singular.
SingularityProbe injected_singularity_probe(const core::KirchhoffSolution& sol);

enum class KernelVerdict { Trivial, Detected, Inconclusive };
std::string_view to_string(KernelVerdict v) noexcept;

struct RadialKernelResult {
  double kappa = 0.0;
  double kappa_closed = 0.0;
  double kappa_error = 0.0;
  double half_margin = 0.0;        ///< 1/2 - kappa_closed = a / (2c)
  bool fixed_point_route = false;  ///< |kappa - kappa_closed| < 1e-6 and 1 - kappa > 1e-3
  SingularityProbe direct;         ///< A_0 + rank-one
  bool direct_route = false;
  std::size_t morse_index_A0 = 0;
  std::size_t morse_index_full = 0;
  std::vector<double> lowest_eigs;  ///< of A_0 + rank-one
  KernelVerdict verdict = KernelVerdict::Inconclusive;
};

/// Both routes, never throws on disagreement.
RadialKernelResult radial_kernel_routes(const core::KirchhoffSolution& sol);

/// As above; throws Inconclusive when the routes disagree.
RadialKernelResult radial_kernel_test(const core::KirchhoffSolution& sol);

struct FloorStudy {
  std::vector<std::size_t> n;
  std::vector<double> smallest_abs;  ///< of A_0 + rank-one at each n
  double extrapolated = 0.0;         ///< Richardson limit for h -> 0
  double observed_order = 0.0;
  double floor = 0.0;                ///< half the extrapolated limit
  double tolerance = 0.0;            ///< zero-mode tolerance at the base grid
  bool pass = false;                 ///< smallest_abs[0] > floor > tolerance
};

/// Direct-route refinement over n, 2n-1, 4n-3 starting from `cfg.n`.
FloorStudy radial_floor_study(const core::Params& params, const radial::ShootingConfig& cfg);

/// Same study over three solutions whose grid spacing halves at each level.
FloorStudy radial_floor_study(std::span<const core::KirchhoffSolution> levels);

struct TranslationKernelResult {
  double lowest = 0.0;
  double second = 0.0;
  double tolerance = 0.0;
  double alignment = 0.0;     ///< |cos| between the zero mode and u'
  bool one_signed = false;
  double u_prime_residual = 0.0;      ///< |A_1 (r u')| / (scale |r u'|), fourth order
  double u_prime_residual_3pt = 0.0;
  bool zero_mode = false;
  bool aligned = false;
  bool gap = false;  ///< second > 10 tolerance
  bool pass = false;
};

TranslationKernelResult translation_kernel_test(const core::KirchhoffSolution& sol);

struct PositivityResult {
  int k = 0;
  double lowest = 0.0;
  double margin = 0.0;
  double domination_error = 0.0;  ///< worst relative mismatch of <(A_k - A_1) v, v>
  bool positive = false;
  bool dominated = false;
  bool pass = false;
};

/// Lowest eigenvalue of A_k above the zero-mode tolerance and the quadratic
/// form identity <A_k v, v> = <A_1 v, v> + c (lambda_k - lambda_1) h sum v^2/r^2
/// on `trials` seeded random vectors.
PositivityResult positivity_test(const core::KirchhoffSolution& sol, int k, std::uint64_t seed = 20240611,
                                 int trials = 8);

struct SectorResult {
  SectorSpec spec;
  std::vector<double> lowest_eigs;
  std::string verdict;
};

struct NondegeneracyReport {
  core::Params params;
  double c = 0.0;
  double kappa = 0.0;
  double kappa_closed = 0.0;
  double tolerance = 0.0;
  std::vector<SectorResult> sectors;
  double a1_alignment = 0.0;
  std::size_t morse_index_A0 = 0;
  std::size_t morse_index_full = 0;
  bool radial_trivial = false;
  bool translation_ok = false;
  bool positivity_ok = false;
  bool tail_argument = false;
  std::string overall;  ///< "nondegenerate", "failed" or "inconclusive"
  std::vector<std::string> notes;
};

/// Never throws for k_max >= 2; sub-check errors become "inconclusive".
NondegeneracyReport nondegeneracy_report(const core::KirchhoffSolution& sol, int k_max = 6);

std::string report_json(const NondegeneracyReport& report);

/// CSV `k,index,eigenvalue` of the reported eigenvalues.
std::string eigenvalues_csv(const NondegeneracyReport& report);

}  // namespace kirchhoff::spectral
