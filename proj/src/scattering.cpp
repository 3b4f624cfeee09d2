#include "thermokin/scattering.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thermokin/quadrature.hpp"

namespace thermokin {

namespace {
constexpr double kPi = std::numbers::pi;
}

ScatteringKernel make_uniform_kernel() {
  ScatteringKernel k;
  k.name = "uniform";
  k.beta = 0.0;
  k.r0 = 1.0;
  k.r = [](double, double) { return 1.0; };
  return k;
}

ScatteringKernel make_product_sine2_kernel(double r0) {
  if (!(r0 > 0.0))
    throw std::invalid_argument("make_product_sine2_kernel: r0 must be > 0");
  ScatteringKernel k;
  k.name = "product_sine2";
  k.beta = 2.0;
  k.r0 = r0;
  k.r = [r0](double a, double b) {
    const double sa = std::sin(kPi * a), sb = std::sin(kPi * b);
    return r0 * (sa * sa) * (sb * sb);
  };
  return k;
}

double total_rate(const ScatteringKernel& kernel, double k) {
  return integrate_adaptive(
      [&](double kp) { return kernel.r(k, kp); }, -0.5, 0.5, 1e-13);
}

DiscreteL assemble_discrete_l(const ScatteringKernel& kernel,
                              const WavenumberGrid& grid) {
  const int n = grid.n_k;
  const double dk = grid.cell_width;
  DiscreteL dl;
  dl.grid = grid;
  dl.matrix.setZero(n, n);
  dl.total_rates.setZero(n);

  // upper triangle once, mirrored, so the matrix is symmetric bit for bit
  for (int j = 0; j < n; ++j) {
    for (int jp = j; jp < n; ++jp) {
      const double v = kernel.r(grid.midpoints[j], grid.midpoints[jp]) * dk;
      if (v < 0.0)
        throw std::invalid_argument("assemble_discrete_l: kernel is negative");
      if (jp != j) {
        dl.matrix(j, jp) = v;
        dl.matrix(jp, j) = v;
      }
      dl.total_rates[j] += v;
      if (jp != j) dl.total_rates[jp] += v;
    }
  }
  // diagonal = -(off-diagonal row sum), summed in column order; the same
  // entries in the same order make each row sum exactly zero
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int jp = 0; jp < n; ++jp) s += dl.matrix(j, jp);
    dl.matrix(j, j) = -s;
  }
  return dl;
}

Vec apply_L(const DiscreteL& dl, const Vec& f) {
  if (f.size() != dl.grid.n_k)
    throw std::invalid_argument("apply_L: size mismatch with grid");
  return dl.matrix * f;
}

double dirichlet_form(const DiscreteL& dl, const Vec& f) {
  if (f.size() != dl.grid.n_k)
    throw std::invalid_argument("dirichlet_form: size mismatch with grid");
  const int n = dl.grid.n_k;
  double acc = 0.0;
  for (int j = 0; j < n; ++j)
    for (int jp = j + 1; jp < n; ++jp) {
      const double d = f[j] - f[jp];
      acc += 2.0 * dl.matrix(j, jp) * d * d; // matrix(j,jp) = r dk off diagonal
    }
  return acc * dl.grid.cell_width; // r dk * d^2 * dk over ordered pairs
}

DiffusiveCheck check_diffusive_condition(const DispersionModel& model,
                                         const ScatteringKernel& kernel,
                                         const WavenumberGrid& grid) {
  DiffusiveCheck out;
  out.admissible = kernel.beta < 1.0 + 2.0 * model.kappa;
  out.divergence_warning = !out.admissible;
  double acc = 0.0;
  for (int j = 0; j < grid.n_k; ++j) {
    const double k = grid.midpoints[j];
    const double wp = model.omega_prime(k);
    acc += wp * wp / total_rate(kernel, k) * grid.cell_width;
  }
  out.integral_estimate = acc;
  return out;
}

} // namespace thermokin
