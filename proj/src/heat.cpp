#include "thermokin/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermokin {

PiecewiseConstant rho0_from_w0(const Mat& w0, const SpatialGrid& grid) {
  if (w0.cols() != grid.n_y)
    throw std::invalid_argument("rho0_from_w0: field/grid size mismatch");
  const double dk = 1.0 / static_cast<double>(w0.rows());
  PiecewiseConstant p;
  p.breaks.resize(grid.n_y + 1);
  p.values.resize(grid.n_y);
  for (int i = 0; i <= grid.n_y; ++i)
    p.breaks[i] = -grid.half_width + i * grid.dy;
  for (int i = 0; i < grid.n_y; ++i) p.values[i] = w0.col(i).sum() * dk;
  return p;
}

double heat_dirichlet(const HeatProfile& profile, double t, double y) {
  if (!(t > 0.0)) throw std::domain_error("heat_dirichlet: requires t > 0");
  if (!(profile.diffusion > 0.0))
    throw std::domain_error("heat_dirichlet: requires positive diffusion");
  if (y == 0.0) return profile.temperature;

  // reflect everything onto the positive half-line the point lives on
  const double x = std::abs(y);
  const double s = std::sqrt(4.0 * profile.diffusion * t);
  const double tref = profile.temperature;
  double acc = tref;
  const auto& pc = profile.rho0;
  for (size_t m = 0; m < pc.values.size(); ++m) {
    double a = pc.breaks[m], b = pc.breaks[m + 1];
    if (y < 0.0) { // mirror the piece
      const double na = -b, nb = -a;
      a = na, b = nb;
    }
    a = std::max(a, 0.0);
    if (b <= a) continue; // piece lives on the other half-line
    const double direct =
        0.5 * (std::erf((x - a) / s) - std::erf((x - b) / s));
    const double image =
        0.5 * (std::erf((x + b) / s) - std::erf((x + a) / s));
    acc += (pc.values[m] - tref) * (direct - image);
  }
  return acc;
}

namespace {
// Thomas solve for a constant-coefficient tridiagonal (diag d, off o).
void tridiag_solve(double d, double o, Vec& rhs, Vec& cp) {
  const int n = static_cast<int>(rhs.size());
  cp[0] = o / d;
  rhs[0] /= d;
  for (int i = 1; i < n; ++i) {
    const double m = 1.0 / (d - o * cp[i - 1]);
    cp[i] = o * m;
    rhs[i] = (rhs[i] - o * rhs[i - 1]) * m;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
}

// Crank-Nicolson on one half-line segment with Dirichlet value tref at both
// segment ends (u holds interior nodes only, spacing dy); four backward-Euler
// half-steps first to damp the rough data.
void evolve_segment(Vec& u, double tref, double mu, int steps) {
  const int n = static_cast<int>(u.size());
  if (n == 0) return;
  Vec rhs(n), cp(n);
  auto step = [&](double theta, double m) {
    // (I - theta m A) u_new = (I + (1-theta) m A) u_old + boundary terms
    const double a = 1.0 - theta;
    for (int i = 0; i < n; ++i) {
      const double left = i > 0 ? u[i - 1] : tref;
      const double right = i < n - 1 ? u[i + 1] : tref;
      rhs[i] = u[i] + a * m * (left - 2.0 * u[i] + right);
    }
    rhs[0] += theta * m * tref;
    rhs[n - 1] += theta * m * tref;
    tridiag_solve(1.0 + 2.0 * theta * m, -theta * m, rhs, cp);
    u = rhs;
  };
  for (int r = 0; r < 4; ++r) step(1.0, 0.5 * mu); // Rannacher start-up
  for (int s = 2; s < steps; ++s) step(0.5, mu);
}

double node_value(const PiecewiseConstant& pc, double y, double tref) {
  const size_t np = pc.values.size();
  if (np == 0) return tref;
  // the profile edges jump against the bath value, so they are jump nodes too
  if (std::abs(y - pc.breaks.front()) < 1e-12)
    return 0.5 * (tref + pc.values.front());
  if (std::abs(y - pc.breaks.back()) < 1e-12)
    return 0.5 * (pc.values.back() + tref);
  for (size_t m = 0; m + 1 < np; ++m)
    if (std::abs(y - pc.breaks[m + 1]) < 1e-12)
      return 0.5 * (pc.values[m] + pc.values[m + 1]); // jump node: mean
  for (size_t m = 0; m < np; ++m)
    if (y >= pc.breaks[m] && y < pc.breaks[m + 1]) return pc.values[m];
  return tref; // outside the profile everything sits at the bath temperature
}
} // namespace

double heat_crosscheck(const HeatProfile& profile, double t_end,
                       const SpatialGrid& grid, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("heat_crosscheck: t_end and dt must be > 0");
  const int steps = std::max(4, static_cast<int>(std::ceil(t_end / dt)));
  const double dt_eff = t_end / steps;
  const double mu = profile.diffusion * dt_eff / (grid.dy * grid.dy);

  // node-centered so the interface y = 0 and the outer ends are grid nodes,
  // all pinned to the boundary temperature
  const int half = grid.n_y / 2; // interior nodes per segment: half - 1
  Vec left(half - 1), right(half - 1);
  for (int m = 1; m < half; ++m) {
    left[m - 1] = node_value(profile.rho0, -grid.half_width + m * grid.dy,
                             profile.temperature);
    right[m - 1] = node_value(profile.rho0, m * grid.dy, profile.temperature);
  }
  evolve_segment(left, profile.temperature, mu, steps);
  evolve_segment(right, profile.temperature, mu, steps);

  double sup = 0.0;
  for (int m = 1; m < half; ++m) {
    const double yl = -grid.half_width + m * grid.dy, yr = m * grid.dy;
    sup = std::max(sup, std::abs(left[m - 1] - heat_dirichlet(profile, t_end, yl)));
    sup = std::max(sup, std::abs(right[m - 1] - heat_dirichlet(profile, t_end, yr)));
  }
  return sup;
}

} // namespace thermokin
