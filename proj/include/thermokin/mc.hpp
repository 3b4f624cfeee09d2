#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "thermokin/interface_coefficients.hpp"
#include "thermokin/kinetic.hpp"
#include "thermokin/scattering.hpp"
#include "thermokin/types.hpp"

namespace thermokin {

struct Observable {
  std::string id;
  std::function<double(double, double)> fn; // (y, k)
};

struct Particle {
  double y = 0.0;
  int k_index = 0;
  double weight = 0.0;
  bool alive = true;
};

// Per-particle stream: the engine is seeded from (run seed, particle index)
// through the splitmix64 finalizer, so particle i's draws never depend on how
// many draws other particles consumed.  Uniforms and exponentials are built
// from raw 64-bit words directly (not std::distributions) to keep runs
// bit-reproducible across standard libraries.
struct RandomStream {
  std::mt19937_64 eng;
  explicit RandomStream(std::uint64_t s) : eng(s) {}
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
};

std::uint64_t particle_stream_seed(std::uint64_t seed, std::uint64_t index);

// Free flight through at most one interface crossing.  The Bernoulli draw u
// resolves the crossing: transmit (u < p+), reflect (k mirrored, velocity
// sign flips), or absorb (dead at the crossing time).
struct CrossingOutcome {
  Particle state;
  bool crossed = false;
  int action = 0; // 0 none, 1 transmit, 2 reflect, 3 absorb
  double t_cross = 0.0;
};

CrossingOutcome exact_crossing_step(const Particle& p, double velocity,
                                    double dt_free,
                                    const InterfaceCoefficients& coeffs,
                                    const WavenumberGrid& grid, double u);

struct McResult {
  std::vector<double> times;
  std::vector<std::string> ids;
  Mat estimates; // n_obs x n_times
  Mat stderrs;
  double initial_abs_weight = 0.0; // ||W0 - T||_{L^1(dy dk)}
  long alive_end = 0;              // alive particles at t_end
};

// Event-driven particle solve of the T=0 field W - T (signed weights), with
// the T part restored by superposition: estimate = T <1, phi> + mean(w phi).
// Exponential scattering clocks at the grid rates of dl, jumps from the
// discrete row law, exact crossing times; no time-discretization bias.
// Particles crossing the outer edges at +-L are absorbed, mirroring the grid
// solver's thermal inflow there.
McResult solve_mc(const SimConfig& cfg, const DispersionModel& model,
                  const InterfaceCoefficients& coeffs, const DiscreteL& dl,
                  const Mat& w0, const std::vector<double>& snapshot_times,
                  const std::vector<Observable>& observables);

} // namespace thermokin
