#include "kirchhoff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

RadialGrid RadialGrid::uniform(double r_max, std::size_t n, double first) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::InvalidArgument, "r_max must be positive and finite");
  }
  if (n < 16) {
    throw Error(ErrorKind::InvalidArgument, "grid needs at least 16 nodes, got " + std::to_string(n));
  }
  if (!(first > 0.0) || first >= r_max) {
    throw Error(ErrorKind::InvalidArgument, "first node must lie in (0, r_max)");
  }
  const double h = (r_max - first) / static_cast<double>(n - 1);
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = first + static_cast<double>(i) * h;
  nodes.back() = r_max;
  return RadialGrid(std::move(nodes), h);
}

RadialGrid RadialGrid::dilated(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::InvalidArgument, "dilation factor must be positive");
  }
  std::vector<double> nodes(nodes_);
  for (auto& r : nodes) r *= factor;
  return RadialGrid(std::move(nodes), spacing_ * factor);
}

void RadialProfile::validate() const {
  if (values.size() != grid.size() || derivs.size() != grid.size()) {
    throw Error(ErrorKind::InvalidArgument, "profile sample count does not match grid");
  }
  if (tail_start > grid.size()) {
    throw Error(ErrorKind::InvalidArgument, "tail_start beyond grid");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(derivs[i])) {
      throw Error(ErrorKind::NonFinite, "profile sample " + std::to_string(i) + " is not finite");
    }
  }
}

RadialProfile RadialProfile::dilated(double factor) const {
  RadialProfile out{grid.dilated(factor), values, derivs, tail_start, tail_rate / factor};
  for (auto& d : out.derivs) d /= factor;
  return out;
}

double RadialProfile::value_at(double r) const {
  const std::size_t n = grid.size();
  r = std::abs(r);
  if (r <= grid.front()) {
    // Even extension: u(r) ~ u(0) + u''(0) r^2 / 2 with u''(0) ~ u'(r_0) / r_0.
    const double curvature = derivs.front() / grid.front();
    const double u0 = values.front() - 0.5 * curvature * grid.front() * grid.front();
    return u0 + 0.5 * curvature * r * r;
  }
  if (r >= grid.r_max()) {
    const double uR = values.back();
    const double R = grid.r_max();
    if (uR == 0.0) return 0.0;
    double rate = tail_rate;
    if (!(rate > 0.0)) rate = std::max(0.0, -derivs.back() / uR - 1.0 / R);
    return uR * (R / r) * std::exp(-rate * (r - R));
  }
  const double h = grid.spacing();
  auto i = static_cast<std::size_t>((r - grid.front()) / h);
  i = std::min(i, n - 2);
  const double t = (r - grid[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values[i] + h10 * h * derivs[i] + h01 * values[i + 1] + h11 * h * derivs[i + 1];
}

double RadialProfile::derivative_at(double r) const {
  const std::size_t n = grid.size();
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r <= grid.front()) return sign * derivs.front() * (r / grid.front());
  if (r >= grid.r_max()) {
    const double u = value_at(r);
    const double uR = values.back();
    if (uR == 0.0) return 0.0;
    double rate = tail_rate;
    if (!(rate > 0.0)) rate = std::max(0.0, -derivs.back() / uR - 1.0 / grid.r_max());
    return -sign * u * (rate + 1.0 / r);
  }
  const double h = grid.spacing();
  auto i = static_cast<std::size_t>((r - grid.front()) / h);
  i = std::min(i, n - 2);
  const double t = (r - grid[i]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return sign * (d00 * values[i] + d10 * derivs[i] + d01 * values[i + 1] + d11 * derivs[i + 1]);
}

RadialProfile zero_profile(const RadialGrid& grid) {
  return RadialProfile{grid, std::vector<double>(grid.size(), 0.0),
                       std::vector<double>(grid.size(), 0.0), grid.size(), 0.0};
}

}  // namespace kirchhoff
