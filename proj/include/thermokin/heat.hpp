#pragma once

#include <vector>

#include "thermokin/grid.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

/// Piecewise-constant profile: values[m] on [breaks[m], breaks[m+1]).
struct PiecewiseConstant {
  std::vector<double> breaks; // strictly increasing, size = values.size() + 1
  std::vector<double> values;
};

/// Dirichlet heat problem data on the two half-lines: d_t rho = D d_yy rho,
/// rho(t, 0+-) = temperature, initial profile rho0 (already at the bath
/// temperature outside its breaks, matching the kinetic solvers' outer
/// thermal bath).
struct HeatProfile {
  PiecewiseConstant rho0;
  double diffusion = 0.0;
  double temperature = 0.0;
};

/// k-average of a kinetic initial field (cells become profile pieces).
PiecewiseConstant rho0_from_w0(const Mat& w0, const SpatialGrid& grid);

/// Exact solution by the image (method-of-reflections) kernel: each piece
/// contributes (value - T)/2 times erf differences with its mirror image
/// subtracted, so rho(t, 0+-) = T identically.  Requires t > 0; the two
/// half-lines do not communicate.
double heat_dirichlet(const HeatProfile& profile, double t, double y);

/// Independent Crank-Nicolson solve (Rannacher-smoothed start, Thomas
/// tridiagonal) on [-L, L]; returns the sup-norm discrepancy against the
/// image-kernel evaluator on the cell-center grid at time t_end.
double heat_crosscheck(const HeatProfile& profile, double t_end,
                       const SpatialGrid& grid, double dt);

} // namespace thermokin
