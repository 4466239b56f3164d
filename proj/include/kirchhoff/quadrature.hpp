#pragma once

#include <span>

#include "kirchhoff/grid.hpp"

namespace kirchhoff::quadrature {

/// Composite Simpson rule over uniformly spaced samples. An odd number of
/// intervals is closed with Simpson's 3/8 rule on the last three.
double simpson(std::span<const double> f, double h);

/// 4*pi * int_{0}^{r_max} f(r) r^2 dr for samples f on the grid. The
/// segment [0, r_0] is added with f taken constant.
double ball_integral(const RadialGrid& grid, std::span<const double> f);

}  // namespace kirchhoff::quadrature
