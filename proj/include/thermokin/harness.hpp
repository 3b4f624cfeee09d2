#pragma once

#include <string>
#include <vector>

#include "thermokin/heat.hpp"
#include "thermokin/kinetic.hpp"
#include "thermokin/mc.hpp"

namespace thermokin {

// mollifier-in-y times k-mode observables; supports stay clear of both the
// interface and the outer boundary
std::vector<Observable> default_observable_bank();

struct ObservationEntry {
  double eps = 0.0;
  std::string phi_id;
  double t = 0.0;
  double kinetic = 0.0;
  double heat = 0.0;
  double abs_error = 0.0;
};

struct EpsRunReport {
  double eps = 0.0;
  double max_weak_error = 0.0;
  double rel_error = 0.0;       // max_weak_error / heat normalization
  double equilibration = 0.0;   // sum_y Dirichlet form at the final snapshot
  double near_interface = 0.0;  // distance of the interface cell averages to T
  AprioriReport apriori;
  double wall_seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<double> eps_values;
  std::vector<EpsRunReport> runs;
  std::vector<ObservationEntry> table;
  double diffusion = 0.0;
  double heat_normalization = 0.0;
  bool errors_decreasing = false;        // within the monotonicity slack
  bool equilibration_decreasing = false;
  bool near_interface_decreasing = false;
  bool diagnostics_pass = false;
  bool all_pass = false;
};

// sum over y-cells of the per-cell Dirichlet form (direct double sum, so the
// value is nonnegative bit for bit)
double local_equilibration_check(const KineticField& field, const DiscreteL& dl,
                                 double dy);

// The headline sweep: for each eps (concurrently), solve the kinetic equation
// by the FV scheme from the shared initial data, compare the observable bank
// against the image-kernel heat solution built with the corrector diffusion
// constant, and re-verify the energy diagnostics.  cfg.eps is ignored in
// favor of eps_list.
ConvergenceReport run_convergence(const SimConfig& cfg,
                                  const DispersionModel& model,
                                  const ScatteringKernel& kernel,
                                  const std::vector<BoxSpec>& boxes,
                                  const std::vector<double>& eps_list,
                                  const std::vector<double>& snapshot_times,
                                  double monotone_slack = 0.10);

void write_convergence_csv(const ConvergenceReport& report,
                           const std::string& path);
void write_summary_csv(const ConvergenceReport& report,
                       const std::string& path);
// one whitespace-separated block per observable, eps column + error column
void write_convergence_dat(const ConvergenceReport& report,
                           const std::string& path);

} // namespace thermokin
