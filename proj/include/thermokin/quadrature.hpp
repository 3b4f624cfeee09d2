#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace thermokin {

// Gauss-Kronrod 7-15 pair on [-1,1] (QUADPACK constants).  The embedded
// Gauss rule supplies the error estimate; the panel with the worst estimate
// is bisected until the summed estimate meets the requested tolerance.
namespace detail {
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const std::complex<double>& x) { return std::abs(x); }

template <class F, class R = decltype(std::declval<F&>()(0.0))>
void gk15_panel(F& f, double a, double b, R& integral, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  R sum_k = kGK15Weights[7] * f(c);
  R sum_g = kG7Weights[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const R pair = f(c - dx) + f(c + dx);
    sum_k += kGK15Weights[i] * pair;
    if (i % 2 == 1) sum_g += kG7Weights[i / 2] * pair;
  }
  integral = h * sum_k;
  error = abs_value(h * (sum_k - sum_g));
}

} // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b].  Works for real- and
/// complex-valued integrands.  Globally adaptive: the panel with the largest
/// error estimate is bisected first, so sharp local features don't starve the
/// rest of the domain of tolerance budget.
template <class F, class R = decltype(std::declval<F&>()(0.0))>
R integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                     int max_depth = 45, double* error_estimate = nullptr) {
  struct Panel {
    double a, b, error;
    R value;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make_panel = [&](double lo, double hi, int depth) {
    Panel p{lo, hi, 0.0, R{}, depth};
    detail::gk15_panel(f, lo, hi, p.value, p.error);
    return p;
  };

  std::vector<Panel> open;   // max-heap on the error estimate
  std::vector<Panel> frozen; // panels already at max_depth
  double open_err = 0.0, frozen_err = 0.0;

  open.push_back(make_panel(a, b, 0));
  open_err = open.front().error;

  constexpr int kMaxPanels = 20000;
  int splits = 0;
  while (frozen_err + open_err > abs_tol && !open.empty() &&
         splits < kMaxPanels) {
    std::pop_heap(open.begin(), open.end());
    Panel worst = std::move(open.back());
    open.pop_back();
    open_err -= worst.error;
    if (worst.depth >= max_depth) {
      frozen_err += worst.error;
      frozen.push_back(std::move(worst));
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    for (Panel child : {make_panel(worst.a, mid, worst.depth + 1),
                        make_panel(mid, worst.b, worst.depth + 1)}) {
      open_err += child.error;
      open.push_back(std::move(child));
      std::push_heap(open.begin(), open.end());
    }
    ++splits;
  }
  // fresh summation: the incremental error bookkeeping above only steers the
  // refinement, it never touches the returned value
  R acc{};
  double err = 0.0;
  for (const Panel& p : open) {
    acc += p.value;
    err += p.error;
  }
  for (const Panel& p : frozen) {
    acc += p.value;
    err += p.error;
  }
  if (error_estimate) *error_estimate = err;
  return acc;
}

/// Fixed 5-point Gauss-Legendre panel (used for cumulative dispersion tables).
template <class F>
double gauss5(F&& f, double a, double b) {
  static constexpr double x[2] = {0.538469310105683, 0.906179845938664};
  static constexpr double w[3] = {0.568888888888889, 0.478628670499366,
                                  0.236926885056189};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = w[0] * f(c);
  s += w[1] * (f(c - h * x[0]) + f(c + h * x[0]));
  s += w[2] * (f(c - h * x[1]) + f(c + h * x[1]));
  return h * s;
}

} // namespace thermokin
