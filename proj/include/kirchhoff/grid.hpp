#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kirchhoff {

/// Offset of the first node from the origin. The radial Laplacian is
/// singular at r = 0, so every grid starts here and the origin itself is
/// reached through the Taylor seed.
inline constexpr double kOriginOffset = 1e-6;

/// Uniform radial grid r_i = r_0 + i*h, i = 0..n-1, with r_0 > 0 and
/// r_{n-1} = r_max.
class RadialGrid {
 public:
  RadialGrid() = default;

  static RadialGrid uniform(double r_max, std::size_t n, double first = kOriginOffset);

  /// Same grid with every node multiplied by `factor` (> 0).
  RadialGrid dilated(double factor) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return spacing_; }
  double front() const noexcept { return nodes_.front(); }
  double r_max() const noexcept { return nodes_.back(); }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  std::span<const double> nodes() const noexcept { return nodes_; }

 private:
  RadialGrid(std::vector<double> nodes, double spacing)
      : nodes_(std::move(nodes)), spacing_(spacing) {}

  std::vector<double> nodes_;
  double spacing_ = 0.0;
};

/// Samples of a radial function and its derivative on a grid. Nodes with
/// index >= tail_start carry the analytic exponential tail
/// u(r) = u(R) (R/r) exp(-tail_rate (r - R)) rather than integrated values.
struct RadialProfile {
  RadialGrid grid;
  std::vector<double> values;
  std::vector<double> derivs;
  std::size_t tail_start = 0;
  double tail_rate = 0.0;

  /// Throws InvalidArgument on size mismatch or non-finite samples.
  void validate() const;

  /// Profile v(r) = u(r / factor) on the dilated grid.
  RadialProfile dilated(double factor) const;

  /// Cubic Hermite interpolation at radius r. Below the first node the
  /// profile is extended evenly; beyond r_max by the exponential tail
  /// fitted to the last node.
  double value_at(double r) const;

  /// Derivative of the same interpolant.
  double derivative_at(double r) const;
};

/// A profile that is zero everywhere.
RadialProfile zero_profile(const RadialGrid& grid);

}  // namespace kirchhoff
