#pragma once

#include <functional>
#include <string>

#include "thermokin/dispersion.hpp"
#include "thermokin/grid.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

/// Symmetric nonnegative collision kernel r(k, k') on the torus.
/// beta is the total-rate vanishing order near k = 0 (R(k) ~ r0 |sin pi k|^beta).
struct ScatteringKernel {
  std::string name;
  double beta = 0.0;
  double r0 = 1.0;
  std::function<double(double, double)> r;
};

/// r == 1: total rate 1, post-collision law uniform.
ScatteringKernel make_uniform_kernel();

/// r(k, k') = r0 sin^2(pi k) sin^2(pi k'); vanishes quadratically at the kink,
/// so it violates the diffusive condition for kappa < 1/2.
ScatteringKernel make_product_sine2_kernel(double r0 = 8.0);

/// Continuum total rate R(k) = int r(k, k') dk' by adaptive quadrature.
double total_rate(const ScatteringKernel& kernel, double k);

/// Midpoint discretization of L f(k) = int r(k,k') [f(k') - f(k)] dk'.
/// matrix is symmetric with rows summing to zero exactly (diagonal assembled
/// as the negated off-diagonal sum); total_rates holds the grid quadrature of
/// R at each midpoint.
struct DiscreteL {
  WavenumberGrid grid;
  Mat matrix;
  Vec total_rates;
};

DiscreteL assemble_discrete_l(const ScatteringKernel& kernel,
                              const WavenumberGrid& grid);

/// matrix * f with a size check.
Vec apply_L(const DiscreteL& dl, const Vec& f);

/// Direct double-sum Dirichlet form sum_{j,j'} r (f_j - f_j')^2 dk^2.
/// (Nonnegative bit for bit; equals -2 dk f.(matrix f) up to roundoff.)
double dirichlet_form(const DiscreteL& dl, const Vec& f);

struct DiffusiveCheck {
  bool admissible = false;        // beta < 1 + 2 kappa
  double integral_estimate = 0.0; // grid quadrature of int omega'^2 / R dk
  bool divergence_warning = false;
};

DiffusiveCheck check_diffusive_condition(const DispersionModel& model,
                                         const ScatteringKernel& kernel,
                                         const WavenumberGrid& grid);

} // namespace thermokin
