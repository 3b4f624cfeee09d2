#include "thermokin/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thermokin {

namespace {

std::uint64_t splitmix64_fin(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// 1 transmit, 2 reflect, 3 absorb
int interface_action(const InterfaceCoefficients& coeffs, int j, double u) {
  if (u < coeffs.p_plus[j]) return 1;
  if (u < coeffs.p_plus[j] + coeffs.p_minus[j]) return 2;
  return 3;
}

} // namespace

std::uint64_t particle_stream_seed(std::uint64_t seed, std::uint64_t index) {
  // the (index+1)-th output of the splitmix64 sequence started at seed
  return splitmix64_fin(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

CrossingOutcome exact_crossing_step(const Particle& p, double velocity,
                                    double dt_free,
                                    const InterfaceCoefficients& coeffs,
                                    const WavenumberGrid& grid, double u) {
  if (velocity == 0.0)
    throw std::invalid_argument("exact_crossing_step: zero velocity");
  if (!(dt_free >= 0.0))
    throw std::invalid_argument("exact_crossing_step: negative flight time");
  CrossingOutcome out;
  out.state = p;
  if (!p.alive) return out;
  double tc = std::numeric_limits<double>::infinity();
  if (p.y != 0.0) {
    const double cand = -p.y / velocity;
    if (cand > 0.0) tc = cand;
  }
  if (tc > dt_free) { // no crossing in this flight
    out.state.y = p.y + velocity * dt_free;
    return out;
  }
  out.crossed = true;
  out.t_cross = tc;
  out.action = interface_action(coeffs, p.k_index, u);
  const double rest = dt_free - tc;
  switch (out.action) {
    case 1:
      out.state.y = velocity * rest;
      break;
    case 2:
      out.state.k_index = grid.mirror_index(p.k_index);
      out.state.y = -velocity * rest;
      break;
    default:
      out.state.y = 0.0;
      out.state.alive = false;
      break;
  }
  return out;
}

McResult solve_mc(const SimConfig& cfg, const DispersionModel& model,
                  const InterfaceCoefficients& coeffs, const DiscreteL& dl,
                  const Mat& w0, const std::vector<double>& snapshot_times,
                  const std::vector<Observable>& observables) {
  cfg.validate();
  if (coeffs.grid.n_k != cfg.n_k || dl.grid.n_k != cfg.n_k)
    throw std::invalid_argument("solve_mc: coefficient tables do not match n_k");
  if (w0.rows() != cfg.n_k || w0.cols() != cfg.n_y)
    throw std::invalid_argument("solve_mc: initial field has wrong shape");
  if (observables.empty())
    throw std::invalid_argument("solve_mc: no observables registered");

  const WavenumberGrid& kg = dl.grid;
  const SpatialGrid yg = SpatialGrid::make(cfg.n_y, cfg.domain_half_width);
  const int n_k = cfg.n_k, n_y = cfg.n_y;
  const double T = cfg.temperature, eps = cfg.eps;
  const double dk = kg.cell_width, dy = yg.dy;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end(),
                          [](double a, double b) {
                            return std::abs(a - b) < 1e-12;
                          }),
              snaps.end());
  for (double s : snaps)
    if (!(s >= 0.0) || s > cfg.t_end + 1e-9)
      throw std::invalid_argument("solve_mc: snapshot time outside [0, t_end]");
  const size_t n_s = snaps.size();
  const size_t n_o = observables.size();

  McResult out;
  out.times = snaps;
  for (const auto& o : observables) out.ids.push_back(o.id);
  out.estimates = Mat::Zero(n_o, n_s);
  out.stderrs = Mat::Zero(n_o, n_s);

  // thermal background restored by superposition, same-grid quadrature
  Vec base = Vec::Zero(n_o);
  for (size_t o = 0; o < n_o; ++o) {
    double acc = 0.0;
    for (int i = 0; i < n_y; ++i)
      for (int j = 0; j < n_k; ++j)
        acc += observables[o].fn(yg.centers[i], kg.midpoints[j]);
    base[o] = T * acc * dy * dk;
  }

  const Vec vel = omega_bar_prime_samples(model, kg) / eps;
  Vec rate(n_k);
  for (int j = 0; j < n_k; ++j)
    rate[j] = cfg.gamma_scat / (eps * eps) * (-dl.matrix(j, j));

  // jump law per source cell: column j holds the cumulative off-diagonal row
  Mat jump_cdf(n_k, n_k);
  for (int j = 0; j < n_k; ++j) {
    double acc = 0.0;
    for (int jp = 0; jp < n_k; ++jp) {
      if (jp != j) acc += dl.matrix(j, jp);
      jump_cdf(jp, j) = acc;
    }
  }

  // initial sampling law prop. to |W0 - T| over cells, signed weight +-C
  const Mat wt0 = w0.array() - T;
  std::vector<double> cell_cdf(static_cast<size_t>(n_k) * n_y);
  double c_total = 0.0;
  for (int i = 0; i < n_y; ++i)
    for (int j = 0; j < n_k; ++j) {
      c_total += std::abs(wt0(j, i)) * dy * dk;
      cell_cdf[static_cast<size_t>(i) * n_k + j] = c_total;
    }
  out.initial_abs_weight = c_total;
  if (c_total == 0.0) { // W0 == T: estimates are exact, no particles needed
    for (size_t s = 0; s < n_s; ++s) out.estimates.col(s) = base;
    out.alive_end = 0;
    return out;
  }

  const long n_p = cfg.n_particles;
  Mat acc1 = Mat::Zero(n_o, n_s), acc2 = Mat::Zero(n_o, n_s);
  long alive_end = 0;

  for (long idx = 0; idx < n_p; ++idx) {
    RandomStream rs(particle_stream_seed(cfg.seed, static_cast<std::uint64_t>(idx)));

    const double target = rs.uniform() * c_total;
    const size_t cell = static_cast<size_t>(
        std::upper_bound(cell_cdf.begin(), cell_cdf.end(), target) -
        cell_cdf.begin());
    const int ci = static_cast<int>(std::min(cell, cell_cdf.size() - 1));
    const int i0 = ci / n_k, j0 = ci % n_k;

    int j = j0;
    double y = yg.centers[i0] + (rs.uniform() - 0.5) * dy;
    const double w = (wt0(j0, i0) >= 0.0 ? c_total : -c_total);
    bool alive = true;

    double t = 0.0;
    double next_scatter =
        rate[j] > 0.0 ? t + rs.exponential(rate[j]) : inf;
    size_t s = 0;
    while (alive) {
      const double v = vel[j];
      const double t_stop = std::min(next_scatter, cfg.t_end);
      double t_cross = inf;
      if (y != 0.0 && v != 0.0) {
        const double tc = -y / v;
        if (tc > 0.0 && t + tc <= t_stop) t_cross = t + tc;
      }
      // beyond +-L the field is held at the bath temperature, so a particle
      // crossing the outer edge is absorbed (same convention as the grid
      // solver's thermal inflow ghost)
      double t_wall = inf;
      if (v != 0.0 && t_cross == inf) {
        const double wall = v > 0.0 ? yg.half_width : -yg.half_width;
        const double tw = (wall - y) / v;
        if (tw >= 0.0 && t + tw <= t_stop) t_wall = t + tw;
      }
      const double seg_end = std::min({t_stop, t_cross, t_wall});

      while (s < n_s && snaps[s] <= seg_end + 1e-12) {
        const double ys = y + v * std::max(0.0, snaps[s] - t);
        const double km = kg.midpoints[j];
        for (size_t o = 0; o < n_o; ++o) {
          const double val = w * observables[o].fn(ys, km);
          acc1(o, s) += val;
          acc2(o, s) += val * val;
        }
        ++s;
      }

      if (t_cross <= t_stop) {
        t = t_cross;
        y = 0.0;
        const int action = interface_action(coeffs, j, rs.uniform());
        if (action == 2) {
          j = kg.mirror_index(j); // velocity flips by oddness
          next_scatter = rate[j] > 0.0 ? t + rs.exponential(rate[j]) : inf;
        } else if (action == 3) {
          alive = false;
        } // transmit: same k, clock and direction carry across
        continue;
      }
      if (t_wall <= t_stop) {
        alive = false;
        continue;
      }
      if (cfg.t_end <= next_scatter) {
        y += v * (cfg.t_end - t);
        t = cfg.t_end;
        break;
      }
      y += v * (next_scatter - t);
      t = next_scatter;
      const double* col = jump_cdf.col(j).data();
      const double jt = rs.uniform() * col[n_k - 1];
      int jn = static_cast<int>(std::upper_bound(col, col + n_k, jt) - col);
      if (jn >= n_k) jn = n_k - 1;
      j = jn;
      next_scatter = rate[j] > 0.0 ? t + rs.exponential(rate[j]) : inf;
    }
    if (alive) ++alive_end;
  }

  const double n = static_cast<double>(n_p);
  for (size_t s = 0; s < n_s; ++s)
    for (size_t o = 0; o < n_o; ++o) {
      const double mean = acc1(o, s) / n;
      out.estimates(o, s) = base[o] + mean;
      double var = 0.0;
      if (n_p > 1) var = std::max(0.0, (acc2(o, s) / n - mean * mean) * n / (n - 1.0));
      out.stderrs(o, s) = std::sqrt(var / n);
    }
  out.alive_end = alive_end;
  if (!out.estimates.allFinite())
    throw std::runtime_error("solve_mc: non-finite estimate");
  return out;
}

} // namespace thermokin
