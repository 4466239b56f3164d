#include "kirchhoff/quadrature.hpp"

#include <numbers>
#include <vector>

#include "kirchhoff/error.hpp"

namespace kirchhoff::quadrature {

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "Simpson rule needs at least 4 samples");
  const std::size_t intervals = n - 1;
  // Even part handled by 1/3 rule; an odd interval count leaves three
  // intervals at the end for the 3/8 rule.
  const std::size_t even_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= even_end; i += 2) {
    sum += f[i] + 4.0 * f[i + 1] + f[i + 2];
  }
  sum *= h / 3.0;
  if (even_end != intervals) {
    const std::size_t j = even_end;
    sum += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  return sum;
}

double ball_integral(const RadialGrid& grid, std::span<const double> f) {
  if (f.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "sample count does not match grid");
  std::vector<double> weighted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) weighted[i] = f[i] * grid[i] * grid[i];
  const double r0 = grid.front();
  const double inner = f.front() * r0 * r0 * r0 / 3.0;
  return 4.0 * std::numbers::pi * (inner + simpson(weighted, grid.spacing()));
}

}  // namespace kirchhoff::quadrature
