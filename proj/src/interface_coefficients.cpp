#include "thermokin/interface_coefficients.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "thermokin/quadrature.hpp"

namespace thermokin {

namespace {
constexpr double kPi = std::numbers::pi;

Cplx resolvent_integral(const DispersionModel& model, Cplx lambda,
                        double split_at) {
  // int_T lambda / (lambda^2 + omega^2) dk for even omega, reduced to twice
  // the [0, 1/2] integral.  When the level set omega(u) = |Im lambda| cuts
  // the interior, the integrand develops a peak of width Re(lambda) there;
  // the pole factor is subtracted and integrated exactly (a log), so the
  // quadrature cost stays flat as Re(lambda) -> 0+.
  auto f = [&](double u) {
    const double w = model.omega(u);
    return lambda / (lambda * lambda + w * w);
  };
  const bool interior = split_at > 0.0 && split_at < 0.5;
  const double slope = interior ? model.omega_prime(split_at) : 0.0;
  if (!interior || std::abs(slope) < 1e-8) {
    Cplx acc{0.0, 0.0};
    if (interior) {
      acc += integrate_adaptive(f, 0.0, split_at, 1e-11);
      acc += integrate_adaptive(f, split_at, 0.5, 1e-11);
    } else {
      acc = integrate_adaptive(f, 0.0, 0.5, 1e-11);
    }
    return 2.0 * acc;
  }
  // lambda^2 + w^2 = (w - r)(w + r) with r^2 = -lambda^2, Re r >= 0; the
  // (w - r) factor degenerates at the resonance.  Im(w - r) is a nonzero
  // constant along the real path, so the principal log never crosses its cut.
  const Cplx r = std::sqrt(-lambda * lambda);
  const Cplx c_res = lambda / ((model.omega(split_at) + r) * slope);
  auto reg = [&](double u) {
    const double w = model.omega(u);
    return (lambda / (w + r) - c_res * model.omega_prime(u)) / (w - r);
  };
  Cplx acc = integrate_adaptive(reg, 0.0, split_at, 1e-11) +
             integrate_adaptive(reg, split_at, 0.5, 1e-11);
  acc += c_res *
         (std::log(model.omega(0.5) - r) - std::log(model.omega(0.0) - r));
  return 2.0 * acc;
}

// omega restricted to [0, 1/2] is increasing (unimodality); locate the level
// set omega(u) = s by bisection.
double resonance_point(const DispersionModel& model, double s) {
  if (s <= 0.0) return 0.0;
  if (s >= model.omega_max) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (model.omega(mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Cplx g_of_delta(const DispersionModel& model, double gamma_therm, double s,
                double delta, double split_at) {
  const Cplx lambda{delta, -s};
  return 1.0 / (1.0 + gamma_therm * resolvent_integral(model, lambda, split_at));
}
} // namespace

Cplx g_tilde(const DispersionModel& model, double gamma_therm, Cplx lambda) {
  if (!(lambda.real() > 0.0))
    throw std::domain_error("g_tilde: requires Re lambda > 0");
  if (!(gamma_therm > 0.0))
    throw std::invalid_argument("g_tilde: gamma_therm must be > 0");
  const double split = resonance_point(model, std::abs(lambda.imag()));
  return 1.0 / (1.0 + gamma_therm * resolvent_integral(model, lambda, split));
}

Cplx g_tilde_sine_closed_form(double gamma_therm, Cplx lambda) {
  return 1.0 / (1.0 + gamma_therm / std::sqrt(lambda * lambda + 1.0));
}

NuResult nu_boundary(const DispersionModel& model, double gamma_therm, double k,
                     const std::vector<double>& delta_sequence) {
  if (wrap_torus(k) == 0.0)
    throw std::domain_error("nu_boundary: k = 0 is outside the domain");
  if (delta_sequence.empty())
    throw std::invalid_argument("nu_boundary: empty delta sequence");
  for (size_t i = 0; i < delta_sequence.size(); ++i) {
    if (!(delta_sequence[i] > 0.0) ||
        (i > 0 && !(delta_sequence[i] < delta_sequence[i - 1])))
      throw std::invalid_argument(
          "nu_boundary: delta sequence must be strictly decreasing and > 0");
  }

  const double s = model.omega(k);
  const double split = resonance_point(model, s);
  constexpr double kStabilTol = 1e-6;
  constexpr double kDeltaFloor = 1e-9;
  constexpr int kMaxLadder = 10;
  constexpr int kMaxOrder = 3; // cap the Neville column to keep noise down

  std::vector<double> deltas;
  std::vector<std::vector<Cplx>> tab; // tab[i][q], Neville at delta = 0
  NuResult out;
  Cplx prev_diag{0.0, 0.0};

  for (int i = 0; i < kMaxLadder; ++i) {
    double d;
    if (i < static_cast<int>(delta_sequence.size()))
      d = delta_sequence[i];
    else
      d = deltas.back() / 10.0;
    if (d < kDeltaFloor) break;
    deltas.push_back(d);
    tab.emplace_back(1, g_of_delta(model, gamma_therm, s, d, split));
    for (int q = 1; q <= std::min<int>(i, kMaxOrder); ++q) {
      const Cplx a = tab[i][q - 1], b = tab[i - 1][q - 1];
      const double xi = deltas[i], xq = deltas[i - q];
      tab[i].push_back((xq * a - xi * b) / (xq - xi));
    }
    const Cplx diag = tab[i].back();
    out.value = diag;
    out.ladder_used = i + 1;
    if (i > 0) {
      out.error_estimate = std::abs(diag - prev_diag);
      if (out.error_estimate < kStabilTol) {
        out.converged = true;
        return out;
      }
    }
    prev_diag = diag;
  }
  return out; // converged stays false; caller decides how loudly to fail
}

Cplx nu_sine_closed_form(double gamma_therm, double k) {
  const double c = std::abs(std::cos(kPi * wrap_torus(k)));
  return Cplx{c / (c + gamma_therm), 0.0};
}

InterfaceTriple interface_triple_at(const DispersionModel& model,
                                    double gamma_therm, double k,
                                    CoefficientPath path,
                                    const std::vector<double>& delta_sequence) {
  if (path == CoefficientPath::Auto)
    path = model.name == "sine" ? CoefficientPath::ClosedForm
                                : CoefficientPath::Quadrature;
  InterfaceTriple t;
  if (path == CoefficientPath::ClosedForm) {
    if (model.name != "sine")
      throw std::invalid_argument(
          "interface_triple_at: closed form only covers the sine model");
    t.nu = nu_sine_closed_form(gamma_therm, k);
  } else {
    const NuResult r = nu_boundary(model, gamma_therm, k, delta_sequence);
    if (!r.converged) {
      std::ostringstream msg;
      msg << "interface_triple_at: delta extrapolation did not stabilize at k="
          << k << " (estimate " << r.error_estimate << ")";
      throw std::runtime_error(msg.str());
    }
    t.nu = r.value;
  }
  const double speed = std::abs(omega_bar_prime(model, k));
  const Cplx scatter = gamma_therm * t.nu / (2.0 * speed);
  t.p_plus = std::norm(1.0 - scatter);
  t.p_minus = std::norm(scatter);
  t.g_abs = 1.0 - t.p_plus - t.p_minus;
  return t;
}

InterfaceCoefficients build_interface_coefficients(
    const DispersionModel& model, double gamma_therm, double temperature,
    const WavenumberGrid& grid, CoefficientPath path,
    const std::vector<double>& delta_sequence) {
  if (!(gamma_therm > 0.0))
    throw std::invalid_argument(
        "build_interface_coefficients: gamma_therm must be > 0");
  if (temperature < 0.0)
    throw std::invalid_argument(
        "build_interface_coefficients: temperature must be >= 0");
  InterfaceCoefficients c;
  c.grid = grid;
  c.gamma_therm = gamma_therm;
  c.temperature = temperature;
  c.nu.resize(grid.n_k);
  c.p_plus.resize(grid.n_k);
  c.p_minus.resize(grid.n_k);
  c.g_abs.resize(grid.n_k);
  for (int j = 0; j < grid.n_k; ++j) {
    const InterfaceTriple t = interface_triple_at(
        model, gamma_therm, grid.midpoints[j], path, delta_sequence);
    if (t.g_abs <= -1e-9) {
      std::ostringstream msg;
      msg << "build_interface_coefficients: nonpositive absorption g_abs="
          << t.g_abs << " at k=" << grid.midpoints[j];
      throw std::runtime_error(msg.str());
    }
    c.nu[j] = t.nu;
    c.p_plus[j] = t.p_plus;
    c.p_minus[j] = t.p_minus;
    c.g_abs[j] = t.g_abs;
  }
  return c;
}

Vec verify_thermostat_identity(const InterfaceCoefficients& coeffs,
                               const DispersionModel& model) {
  const int n = coeffs.grid.n_k;
  Vec res(n);
  for (int j = 0; j < n; ++j) {
    const double speed =
        std::abs(omega_bar_prime(model, coeffs.grid.midpoints[j]));
    res[j] = std::abs(coeffs.nu[j].real() -
                      (1.0 + coeffs.gamma_therm / (2.0 * speed)) *
                          std::norm(coeffs.nu[j]));
  }
  return res;
}

Vec g_abs_crosscheck(const InterfaceCoefficients& coeffs,
                     const DispersionModel& model) {
  const int n = coeffs.grid.n_k;
  Vec g(n);
  for (int j = 0; j < n; ++j) {
    const double speed =
        std::abs(omega_bar_prime(model, coeffs.grid.midpoints[j]));
    g[j] = coeffs.gamma_therm * std::norm(coeffs.nu[j]) / speed;
  }
  return g;
}

std::pair<Vec, Vec> interface_form_eigenvalues(
    const InterfaceCoefficients& coeffs) {
  const Vec diff = coeffs.p_plus - coeffs.p_minus;
  const Vec sum = coeffs.p_plus + coeffs.p_minus;
  Vec lp = Vec::Ones(coeffs.grid.n_k) - diff.cwiseProduct(diff);
  Vec lm = Vec::Ones(coeffs.grid.n_k) - sum.cwiseProduct(sum);
  return {lp, lm};
}

} // namespace thermokin
