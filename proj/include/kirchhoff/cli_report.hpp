#pragma once

// Pipelines behind the `kirchhoff` command-line tool. Each run_* function
// writes its report to `out` (or to the configured file) and returns the
// process exit code.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kirchhoff/kirchhoff_core.hpp"
#include "kirchhoff/radial_groundstate.hpp"

namespace kirchhoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitUsage = 64;

enum class Command { Solve, Verify, Spectrum, Sweep };

/// LO:HI:N, evenly spaced, or LO:HI:N:log, geometrically spaced.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  bool geometric = false;

  std::vector<double> points() const;
};

/// Throws InvalidArgument on malformed text, non-positive endpoints,
/// lo > hi or count < 1.
Range parse_range(const std::string& text);

struct RunConfig {
  Command command = Command::Solve;
  core::Params params;
  std::optional<Range> a_range;
  std::optional<Range> b_range;
  std::optional<Range> p_range;
  double r_max = 25.0;
  std::size_t n = 4000;
  int k_max = 6;
  double residual_tol = 1e-5;
  std::string out;          ///< empty: standard output
  std::string profile_csv;  ///< solve: profile export path
  std::string eigs_csv;     ///< spectrum: eigenvalue-vs-k export path
  bool json = false;        ///< verify: JSON instead of text lines

  radial::ShootingConfig shooting() const;
  /// Throws InvalidArgument when a parameter violates its hypothesis.
  void validate() const;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// Every invariant of the three core modules at the configured parameters
/// and grid, including refinement studies over n, 2n-1, 4n-3.
std::vector<Check> verify_suite(const RunConfig& cfg);

struct SweepRecord {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  double sqrt_c = 0.0;
  double c = 0.0;
  double m = 0.0;
  double kappa_closed = 0.0;
  std::string verdict;  ///< report verdict, or "error"
};

/// Evaluates every (a, b, p) tuple on a worker pool of at most `threads`
/// workers, computing Q once per distinct p. Rows are sorted by (a, b, p).
std::vector<SweepRecord> sweep(const RunConfig& cfg, unsigned threads);

std::string sweep_csv(const std::vector<SweepRecord>& rows);

/// Worker cap from KIRCHHOFF_THREADS, else the hardware concurrency.
unsigned worker_count();

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Usage errors return 64.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kirchhoff::cli
