#pragma once

#include "thermokin/dispersion.hpp"
#include "thermokin/scattering.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

/// Cell-profile correctors for the diffusive expansion:
///   (-L) x1 = omega_bar'            (odd),
///   (-L) x2 = omega_bar' x1 / gamma - D   (even, exactly mean-zero rhs),
/// both centered against the total-rate measure, and
///   D = (1/gamma) <omega_bar', x1>  > 0.
struct CorrectorSolution {
  Vec x1;
  Vec x2;
  double diffusion = 0.0;
  double gamma_scat = 0.0;
};

/// Solve (-L) x = rhs with the centering sum_j x_j R_j dk = 0 via a dense
/// factorization of the bordered (n+1) system.  Requires sum_j rhs_j dk = 0
/// (solvability against constants); residual is checked after the solve.
Vec solve_corrector(const DiscreteL& dl, const Vec& rhs);

/// D = (1/gamma) sum_j omega_bar'_j x1_j dk; throws if it fails to be > 0.
double diffusion_coefficient(const DispersionModel& model, const DiscreteL& dl,
                             double gamma_scat);

/// Second corrector for a caller-supplied diffusion value d; a d inconsistent
/// with the grid (mean of the rhs nonzero) is rejected.
Vec second_corrector(const DiscreteL& dl, const DispersionModel& model,
                     double gamma_scat, double d);

CorrectorSolution compute_corrector(const DispersionModel& model,
                                    const DiscreteL& dl, double gamma_scat);

/// Smooth compactly supported mollifier B(u) = exp(1 - 1/(1-u^2)) on (-1,1),
/// with derivatives through third order.
struct Bump {
  double value(double u) const;
  double d1(double u) const;
  double d2(double u) const;
  double d3(double u) const;
};

/// B((x - center)/width): translated/dilated bump, support
/// (center - width, center + width).
struct ScaledBump {
  double center = 0.0;
  double width = 1.0;
  double value(double x) const;
  double deriv(double x) const;
};

/// phi(t, y) = exp(-decay t) * B((y - center)/width), with the y-partials
/// through third order and the mixed t-partials the residual evaluation needs.
/// Support must not contain y = 0.
struct SpaceTimeTestFn {
  double center = 0.0;
  double width = 1.0;
  double decay = 1.0;
  double t_max = 1.0;

  double support_lo() const { return center - width; }
  double support_hi() const { return center + width; }

  double value(double t, double y) const;
  double dt(double t, double y) const;
  double dy(double t, double y) const;
  double dyy(double t, double y) const;
  double dyyy(double t, double y) const;
  double dty(double t, double y) const;
  double dtyy(double t, double y) const;
};

/// Sup over a (t, y, k) sample grid of
///   (d_t + eps^-1 omega_bar' d_y + eps^-2 gamma L) phi_eps - (d_t + D d_yy) phi
/// with phi_eps = phi + eps chi1 + eps^2 chi2 built from the correctors.  The
/// generator is applied literally (discrete L included), so the O(1) and
/// O(1/eps) cancellations happen numerically; the result is O(eps).
double perturbed_test_residual(const SpaceTimeTestFn& phi,
                               const CorrectorSolution& corr,
                               const DiscreteL& dl,
                               const DispersionModel& model, double eps);

} // namespace thermokin
