#pragma once

#include <cstdint>
#include <vector>

#include "thermokin/corrector.hpp"
#include "thermokin/dispersion.hpp"
#include "thermokin/grid.hpp"
#include "thermokin/interface_coefficients.hpp"
#include "thermokin/scattering.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

struct SimConfig {
  double eps = 0.1;              // diffusive scaling parameter
  double gamma_scat = 1.0;       // scattering strength
  double gamma_therm = 1.0;      // thermostat coupling
  double temperature = 1.0;      // interface temperature T
  double domain_half_width = 4.0; // y in [-L, L]
  int n_y = 400;                 // even, face at y = 0
  int n_k = 64;                  // even
  double t_end = 0.5;
  double cfl = 1.0;              // advective CFL factor in (0, 1]
  std::uint64_t seed = 20240901ull;
  long n_particles = 100000;

  void validate() const; // throws std::invalid_argument
};

// Cell-average density on the (k, y) grid. Rows index wavenumber cells,
// columns index space cells.  boundary_traces holds per-k one-sided interface
// values (column 0: y = 0-, column 1: y = 0+); the outgoing side is
// reconstructed from the interface rule, the incoming side is the adjacent
// upwind cell average.
struct KineticField {
  Mat values;
  Mat boundary_traces;
  double time = 0.0;
};

// Time series of the energy diagnostics together with their a priori bounds.
// l2_sq is ||W - T||^2 in L^2(dy dk); dirichlet_cum integrates the total
// Dirichlet form in time; trace_cum integrates the |velocity|-weighted
// absorbed-trace functional.
struct DiagnosticsSeries {
  std::vector<double> t;
  std::vector<double> l2_sq;
  std::vector<double> dirichlet_cum;
  std::vector<double> trace_cum;
  double l2_bound = 0.0;        // ||W0 - T||^2
  double dirichlet_bound = 0.0; // (eps^2/gamma) * l2_bound
  double trace_bound = 0.0;     // 2 eps * l2_bound
};

struct AprioriReport {
  bool l2_nonincreasing = false;
  double l2_rel_slack = 0.0;        // worst (l2(t) - l2(0)) / l2(0)
  double dirichlet_rel_slack = 0.0; // worst (cum - bound) / bound
  double trace_rel_slack = 0.0;
  bool all_pass = false;
};

struct FvResult {
  WavenumberGrid kgrid;
  SpatialGrid ygrid;
  double dt = 0.0; // nominal advective step
  std::vector<KineticField> snapshots;
  DiagnosticsSeries diagnostics;
  // full trajectory (every record_stride-th step) when requested
  std::vector<Mat> trajectory;
  std::vector<double> trajectory_times;
};

struct BoxSpec {
  double lo = 0.0;
  double hi = 0.0;
  double amplitude = 0.0;
};

// k-independent initial condition: sum of box indicators evaluated at the
// cell centers.
Mat initial_box_field(const WavenumberGrid& kgrid, const SpatialGrid& ygrid,
                      const std::vector<BoxSpec>& boxes);

// One-sided interface values for the current field: incoming sides are the
// cell averages adjacent to the y=0 face, outgoing sides follow the
// reflection/transmission/absorption rule with thermostat injection T*g.
Mat interface_traces(const Mat& values, const InterfaceCoefficients& coeffs,
                     const Vec& obp, const SpatialGrid& ygrid,
                     double temperature);

// Operator-split finite-volume solve: upwind advection at speed obp/eps with
// interface ghost values, then implicit relaxation (I - dt*gamma/eps^2 L)^-1
// shared across y-cells.  record_stride > 0 stores the full field every that
// many steps (plus t = 0 and t_end) for weak-form residual evaluation.
FvResult solve_fv(const SimConfig& cfg, const DispersionModel& model,
                  const InterfaceCoefficients& coeffs, const DiscreteL& dl,
                  const Mat& w0, const std::vector<double>& snapshot_times,
                  int record_stride = 0);

AprioriReport apriori_diagnostics(const DiagnosticsSeries& d,
                                  double rel_tol = 1e-6);

// Separable space-time-wavenumber test function
//   phi(t, y, k_j) = psi(t) * B(y) * k_values[j]
// with psi, B scaled bumps; the y-support must avoid the interface and the
// t-support must close before the last recorded time.
struct WeakTestFn {
  ScaledBump time_profile;
  ScaledBump space_profile;
  Vec k_values;
};

// Quadrature of the weak-form pairing of the recorded trajectory (W - T)
// against phi: time integral of <W-T, (d_t + obp/eps d_y + gamma/eps^2 L)phi>
// plus the initial term <W0 - T, phi(0)>.  Vanishes for exact solutions.
double weak_residual(const FvResult& run, const DispersionModel& model,
                     const DiscreteL& dl, const SimConfig& cfg,
                     const WeakTestFn& phi);

} // namespace thermokin
