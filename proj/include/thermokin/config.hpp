#pragma once

#include <string>
#include <vector>

#include "thermokin/dispersion.hpp"
#include "thermokin/kinetic.hpp"
#include "thermokin/scattering.hpp"
#include "thermokin/toml.hpp"

namespace thermokin {

// Everything a run needs, with the headline defaults baked in.  Shared keys
// (gamma_scat, gamma_therm, temperature, n_k) may sit at the top level of the
// config; values under [sim] win when both are present.
struct ProblemConfig {
  std::string dispersion_kind = "sine";
  double kappa = 0.0; // powerlaw exponent
  std::string kernel_kind = "uniform";
  double r0 = 8.0;
  std::vector<double> delta_seq; // empty: builder default ladder

  SimConfig sim;
  std::vector<double> snapshot_times = {0.25, 0.5};
  std::vector<BoxSpec> boxes = {{-2.0, -1.0, 2.0}, {1.0, 2.0, 2.0}};
};

ProblemConfig config_from_doc(const TomlDoc& doc);
ProblemConfig load_problem_config(const std::string& path);

DispersionModel model_from_config(const ProblemConfig& pc);
ScatteringKernel kernel_from_config(const ProblemConfig& pc);

} // namespace thermokin
