#include "thermokin/corrector.hpp"

#include <cmath>
#include <stdexcept>

namespace thermokin {

Vec solve_corrector(const DiscreteL& dl, const Vec& rhs) {
  const int n = dl.grid.n_k;
  if (rhs.size() != n)
    throw std::invalid_argument("solve_corrector: rhs size mismatch");
  const double dk = dl.grid.cell_width;

  const double mean = rhs.sum() * dk;
  if (std::abs(mean) > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "solve_corrector: rhs is not orthogonal to constants (flat mean " +
        std::to_string(mean) + ")");

  // bordered system: [-L, w; w^T, 0] with w the total-rate measure weights
  Mat a(n + 1, n + 1);
  a.topLeftCorner(n, n) = -dl.matrix;
  const Vec w = dl.total_rates * dk;
  a.block(0, n, n, 1) = w;
  a.block(n, 0, 1, n) = w.transpose();
  a(n, n) = 0.0;

  Vec b(n + 1);
  b.head(n) = rhs;
  b[n] = 0.0;

  const Vec sol = Eigen::PartialPivLU<Mat>(a).solve(b);
  const Vec x = sol.head(n);

  const double resid = ((-dl.matrix) * x - rhs).cwiseAbs().maxCoeff();
  if (!(resid < 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff())))
    throw std::runtime_error(
        "solve_corrector: singular discrete generator (residual " +
        std::to_string(resid) + ")");
  return x;
}

double diffusion_coefficient(const DispersionModel& model, const DiscreteL& dl,
                             double gamma_scat) {
  if (!(gamma_scat > 0.0))
    throw std::invalid_argument("diffusion_coefficient: gamma_scat must be > 0");
  const Vec obp = omega_bar_prime_samples(model, dl.grid);
  const Vec x1 = solve_corrector(dl, obp);
  const double d = obp.dot(x1) * dl.grid.cell_width / gamma_scat;
  if (!(d > 0.0))
    throw std::runtime_error("diffusion_coefficient: nonpositive value");
  return d;
}

Vec second_corrector(const DiscreteL& dl, const DispersionModel& model,
                     double gamma_scat, double d) {
  const Vec obp = omega_bar_prime_samples(model, dl.grid);
  const Vec x1 = solve_corrector(dl, obp);
  const Vec rhs =
      (obp.cwiseProduct(x1) / gamma_scat).array() - d; // mean zero iff d = D
  const double mean = rhs.sum() * dl.grid.cell_width;
  if (std::abs(mean) > 1e-8)
    throw std::invalid_argument(
        "second_corrector: supplied diffusion value is inconsistent "
        "(rhs mean " + std::to_string(mean) + ")");
  return solve_corrector(dl, rhs);
}

CorrectorSolution compute_corrector(const DispersionModel& model,
                                    const DiscreteL& dl, double gamma_scat) {
  CorrectorSolution s;
  s.gamma_scat = gamma_scat;
  const Vec obp = omega_bar_prime_samples(model, dl.grid);
  s.x1 = solve_corrector(dl, obp);
  s.diffusion = obp.dot(s.x1) * dl.grid.cell_width / gamma_scat;
  if (!(s.diffusion > 0.0))
    throw std::runtime_error("compute_corrector: nonpositive diffusion");
  s.x2 = solve_corrector(
      dl, Vec((obp.cwiseProduct(s.x1) / gamma_scat).array() - s.diffusion));
  return s;
}

// B = e^g with g = 1 - 1/(1-u^2); derivatives via g' = -2u/s^2, s = 1-u^2.
double Bump::value(double u) const {
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return std::exp(1.0 - 1.0 / s);
}
double Bump::d1(double u) const {
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return -2.0 * u / (s * s) * value(u);
}
double Bump::d2(double u) const {
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  const double g1 = -2.0 * u / (s * s);
  const double g2 = -2.0 / (s * s) - 8.0 * u * u / (s * s * s);
  return (g2 + g1 * g1) * value(u);
}
double Bump::d3(double u) const {
  if (std::abs(u) >= 1.0) return 0.0;
  const double s = 1.0 - u * u;
  const double g1 = -2.0 * u / (s * s);
  const double g2 = -2.0 / (s * s) - 8.0 * u * u / (s * s * s);
  const double g3 =
      -24.0 * u / (s * s * s) - 48.0 * u * u * u / (s * s * s * s);
  return (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * value(u);
}

namespace {
const Bump kBump;
}

double ScaledBump::value(double x) const {
  return kBump.value((x - center) / width);
}
double ScaledBump::deriv(double x) const {
  return kBump.d1((x - center) / width) / width;
}

double SpaceTimeTestFn::value(double t, double y) const {
  return std::exp(-decay * t) * kBump.value((y - center) / width);
}
double SpaceTimeTestFn::dt(double t, double y) const {
  return -decay * value(t, y);
}
double SpaceTimeTestFn::dy(double t, double y) const {
  return std::exp(-decay * t) * kBump.d1((y - center) / width) / width;
}
double SpaceTimeTestFn::dyy(double t, double y) const {
  return std::exp(-decay * t) * kBump.d2((y - center) / width) /
         (width * width);
}
double SpaceTimeTestFn::dyyy(double t, double y) const {
  return std::exp(-decay * t) * kBump.d3((y - center) / width) /
         (width * width * width);
}
double SpaceTimeTestFn::dty(double t, double y) const {
  return -decay * dy(t, y);
}
double SpaceTimeTestFn::dtyy(double t, double y) const {
  return -decay * dyy(t, y);
}

double perturbed_test_residual(const SpaceTimeTestFn& phi,
                               const CorrectorSolution& corr,
                               const DiscreteL& dl,
                               const DispersionModel& model, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("perturbed_test_residual: eps must be > 0");
  if (phi.support_lo() <= 0.0 && phi.support_hi() >= 0.0)
    throw std::invalid_argument(
        "perturbed_test_residual: phi support must avoid the interface y = 0");

  const int n = dl.grid.n_k;
  const Vec obp = omega_bar_prime_samples(model, dl.grid);
  const double g = corr.gamma_scat;
  const Vec ones = Vec::Ones(n);

  const int nt = 9, ny = 48;
  double sup = 0.0;
  for (int it = 0; it < nt; ++it) {
    const double t = phi.t_max * it / (nt - 1);
    for (int iy = 0; iy <= ny; ++iy) {
      const double y =
          phi.support_lo() + (phi.support_hi() - phi.support_lo()) * iy / ny;
      const double f = phi.value(t, y), ft = phi.dt(t, y), fy = phi.dy(t, y),
                   fyy = phi.dyy(t, y), fyyy = phi.dyyy(t, y),
                   fty = phi.dty(t, y), ftyy = phi.dtyy(t, y);

      // phi_eps k-profile and its partials at (t, y)
      const Vec prof = f * ones + (eps / g) * fy * corr.x1 +
                       (eps * eps / g) * fyy * corr.x2;
      const Vec prof_t = ft * ones + (eps / g) * fty * corr.x1 +
                         (eps * eps / g) * ftyy * corr.x2;
      const Vec prof_y = fy * ones + (eps / g) * fyy * corr.x1 +
                         (eps * eps / g) * fyyy * corr.x2;

      const Vec gen = prof_t + obp.cwiseProduct(prof_y) / eps +
                      (g / (eps * eps)) * (dl.matrix * prof);
      const double target = ft + corr.diffusion * fyy;
      sup = std::max(sup, (gen.array() - target).abs().maxCoeff());
    }
  }
  return sup;
}

} // namespace thermokin
