#pragma once

#include <functional>
#include <string>

#include "thermokin/grid.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

/// Dispersion relation omega on the torus: even, continuous, unimodal
/// (increasing on [0, 1/2]), with omega' odd and undefined at k = 0.
/// omega_max = omega(1/2); vel_max = sup |omega'| / (2 pi), kept explicit so
/// CFL computations never scan a grid.
struct DispersionModel {
  std::string name;
  double kappa = 0.0;
  double omega_max = 0.0;
  double vel_max = 0.0;
  std::function<double(double)> omega;
  std::function<double(double)> omega_prime;
};

/// Nearest-integer wrap of k into [-1/2, 1/2].
double wrap_torus(double k);

/// omega(k) = |sin(pi k)|.
DispersionModel make_default_model();

/// omega'(k) = pi sign(k) |sin(pi k)|^kappa, omega its cumulative integral
/// from 0 (normalized so the small-k slope matches the default model at
/// kappa = 0).  kappa >= 0.
DispersionModel make_powerlaw_model(double kappa);

/// Normalized group velocity omega'(k) / (2 pi); throws std::domain_error at
/// the k = 0 kink.
double omega_bar_prime(const DispersionModel& model, double k);

/// Per-cell samples of omega_bar_prime on a midpoint grid (never hits k = 0).
Vec omega_bar_prime_samples(const DispersionModel& model,
                            const WavenumberGrid& grid);

} // namespace thermokin
