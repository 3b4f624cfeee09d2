#pragma once

#include <utility>
#include <vector>

#include "thermokin/dispersion.hpp"
#include "thermokin/grid.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

/// Per-cell thermostat scattering data: reflection p_minus, transmission
/// p_plus and absorption g_abs = 1 - p_plus - p_minus (deficit by
/// construction, so normalization is exact).
struct InterfaceCoefficients {
  WavenumberGrid grid;
  CVec nu;
  Vec p_plus;
  Vec p_minus;
  Vec g_abs;
  double gamma_therm = 0.0;
  double temperature = 0.0;
};

enum class CoefficientPath { Auto, ClosedForm, Quadrature };

/// Laplace-transform factor (1 + gamma int lambda / (lambda^2 + omega^2) dk)^-1
/// for Re lambda > 0, evaluated by adaptive quadrature.  |g_tilde| <= 1.
Cplx g_tilde(const DispersionModel& model, double gamma_therm, Cplx lambda);

/// Closed form of g_tilde for the sine model (test oracle / fast path):
/// 1 / (1 + gamma / sqrt(lambda^2 + 1)), principal branch.
Cplx g_tilde_sine_closed_form(double gamma_therm, Cplx lambda);

struct NuResult {
  Cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  bool converged = false;
  int ladder_used = 0; // number of delta values actually evaluated
};

/// Boundary value nu(k) = lim_{delta->0+} g_tilde(delta - i omega(k)) by
/// resonance-split quadrature plus Neville extrapolation in delta.  The given
/// ladder (strictly decreasing, default {1e-2, 1e-3, 1e-4}) is extended
/// downward by factors of 10 until successive extrapolants differ by < 1e-6;
/// failure to stabilize is reported in `converged`, never silently accepted.
NuResult nu_boundary(const DispersionModel& model, double gamma_therm, double k,
                     const std::vector<double>& delta_sequence = {1e-2, 1e-3,
                                                                  1e-4});

/// nu for the sine model: |cos(pi k)| / (|cos(pi k)| + gamma), real.
Cplx nu_sine_closed_form(double gamma_therm, double k);

/// (nu, p_plus, p_minus, g_abs) at a single wavenumber.  p_plus = |1 - P|^2,
/// p_minus = |P|^2 with P = gamma nu / (2 |omega_bar'|), g_abs the deficit.
struct InterfaceTriple {
  Cplx nu;
  double p_plus;
  double p_minus;
  double g_abs;
};

InterfaceTriple interface_triple_at(const DispersionModel& model,
                                    double gamma_therm, double k,
                                    CoefficientPath path,
                                    const std::vector<double>& delta_sequence =
                                        {1e-2, 1e-3, 1e-4});

/// Per-cell table over a midpoint grid.  Auto path takes the closed form for
/// the sine model, quadrature otherwise.  Fails loudly on non-stabilized
/// extrapolation or g_abs <= 0 beyond tolerance.
InterfaceCoefficients build_interface_coefficients(
    const DispersionModel& model, double gamma_therm, double temperature,
    const WavenumberGrid& grid, CoefficientPath path = CoefficientPath::Auto,
    const std::vector<double>& delta_sequence = {1e-2, 1e-3, 1e-4});

/// Per-cell residual of Re nu = (1 + gamma / (2 |omega_bar'|)) |nu|^2.
Vec verify_thermostat_identity(const InterfaceCoefficients& coeffs,
                               const DispersionModel& model);

/// Independent absorption formula gamma |nu|^2 / |omega_bar'| (cross-check
/// against the deficit g_abs).
Vec g_abs_crosscheck(const InterfaceCoefficients& coeffs,
                     const DispersionModel& model);

/// Eigenvalues (lambda_plus, lambda_minus) of the interface energy quadratic
/// form: 1 - (p_plus -+ p_minus)^2.
std::pair<Vec, Vec> interface_form_eigenvalues(
    const InterfaceCoefficients& coeffs);

} // namespace thermokin
