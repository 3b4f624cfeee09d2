#include "thermokin/dispersion.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "thermokin/quadrature.hpp"

namespace thermokin {

namespace {
constexpr double kPi = std::numbers::pi;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Cumulative table for omega(k) = int_0^|k| pi |sin(pi u)|^kappa du.
// Panel edges on [0, 1/2]; partial panels finished with a 5-point Gauss rule.
// The integrand behaves like u^kappa at the origin, so the panel touching
// u = 0 goes through the adaptive rule instead (a fixed rule there leaves a
// constant ~1e-8 offset in the whole table for fractional kappa).
struct CumulativeOmega {
  double kappa;
  int panels;
  double du;
  std::vector<double> cum; // cum[m] = omega at edge m

  explicit CumulativeOmega(double kappa_, int panels_ = 2048)
      : kappa(kappa_), panels(panels_), du(0.5 / panels_), cum(panels_ + 1) {
    cum[0] = 0.0;
    cum[1] = first_panel(du);
    for (int m = 1; m < panels; ++m)
      cum[m + 1] = cum[m] + gauss5([this](double u) { return speed(u); },
                                   m * du, (m + 1) * du);
  }

  double speed(double u) const { return kPi * std::pow(std::sin(kPi * u), kappa); }

  double first_panel(double a) const {
    return integrate_adaptive([this](double u) { return speed(u); }, 0.0, a,
                              1e-14);
  }

  double eval(double a) const { // a in [0, 1/2]
    int m = std::min(static_cast<int>(a / du), panels - 1);
    if (m == 0) return first_panel(a);
    return cum[m] + gauss5([this](double u) { return speed(u); }, m * du, a);
  }
};
} // namespace

double wrap_torus(double k) {
  double w = k - std::nearbyint(k);
  // nearbyint ties-to-even can leave +-1/2 on either sign; both are the same
  // torus point and all evaluators are even or odd, so no further fixup.
  return w;
}

DispersionModel make_default_model() {
  DispersionModel m;
  m.name = "sine";
  m.kappa = 0.0;
  m.omega_max = 1.0;
  m.vel_max = 0.5;
  m.omega = [](double k) { return std::abs(std::sin(kPi * wrap_torus(k))); };
  m.omega_prime = [](double k) {
    const double w = wrap_torus(k);
    if (w == 0.0)
      throw std::domain_error("omega_prime: undefined at k = 0");
    return kPi * sign(w) * std::cos(kPi * w);
  };
  return m;
}

DispersionModel make_powerlaw_model(double kappa) {
  if (!(kappa >= 0.0))
    throw std::invalid_argument("make_powerlaw_model: kappa must be >= 0");
  DispersionModel m;
  m.name = "powerlaw";
  m.kappa = kappa;
  m.vel_max = 0.5; // sup |omega'| = pi for every kappa
  auto table = std::make_shared<CumulativeOmega>(kappa);
  m.omega_max = table->cum.back();
  m.omega = [table](double k) { return table->eval(std::abs(wrap_torus(k))); };
  m.omega_prime = [kappa](double k) {
    const double w = wrap_torus(k);
    if (w == 0.0)
      throw std::domain_error("omega_prime: undefined at k = 0");
    return kPi * sign(w) * std::pow(std::abs(std::sin(kPi * w)), kappa);
  };
  return m;
}

double omega_bar_prime(const DispersionModel& model, double k) {
  return model.omega_prime(k) / (2.0 * kPi);
}

Vec omega_bar_prime_samples(const DispersionModel& model,
                            const WavenumberGrid& grid) {
  Vec v(grid.n_k);
  for (int j = 0; j < grid.n_k; ++j)
    v[j] = omega_bar_prime(model, grid.midpoints[j]);
  return v;
}

} // namespace thermokin
