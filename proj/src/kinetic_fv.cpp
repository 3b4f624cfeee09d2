#include "thermokin/kinetic.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace thermokin {

void SimConfig::validate() const {
  auto fail = [](const char* what) {
    throw std::invalid_argument(std::string("SimConfig: ") + what);
  };
  if (!(eps > 0.0) || eps > 1.0) fail("eps must lie in (0, 1]");
  if (!(gamma_scat > 0.0)) fail("gamma_scat must be > 0");
  if (!(gamma_therm > 0.0)) fail("gamma_therm must be > 0");
  if (!(temperature >= 0.0)) fail("temperature must be >= 0");
  if (!(domain_half_width > 0.0)) fail("domain_half_width must be > 0");
  if (n_y < 4 || n_y % 2 != 0) fail("n_y must be even and >= 4");
  if (n_k < 2 || n_k % 2 != 0) fail("n_k must be even and >= 2");
  if (!(t_end > 0.0)) fail("t_end must be > 0");
  if (!(cfl > 0.0) || cfl > 1.0) fail("cfl must lie in (0, 1]");
  if (n_particles < 1) fail("n_particles must be >= 1");
}

Mat initial_box_field(const WavenumberGrid& kgrid, const SpatialGrid& ygrid,
                      const std::vector<BoxSpec>& boxes) {
  for (const auto& b : boxes)
    if (!(b.hi > b.lo))
      throw std::invalid_argument("initial_box_field: box needs hi > lo");
  Mat w = Mat::Zero(kgrid.n_k, ygrid.n_y);
  for (int i = 0; i < ygrid.n_y; ++i) {
    double v = 0.0;
    for (const auto& b : boxes)
      if (ygrid.centers[i] >= b.lo && ygrid.centers[i] <= b.hi)
        v += b.amplitude;
    if (v != 0.0) w.col(i).setConstant(v);
  }
  return w;
}

Mat interface_traces(const Mat& values, const InterfaceCoefficients& coeffs,
                     const Vec& obp, const SpatialGrid& ygrid,
                     double temperature) {
  const int n_k = coeffs.grid.n_k;
  if (values.rows() != n_k || values.cols() != ygrid.n_y)
    throw std::invalid_argument("interface_traces: field/grid shape mismatch");
  const int il = ygrid.left_of_interface();
  const int ir = ygrid.right_of_interface();
  Mat tr(n_k, 2);
  for (int j = 0; j < n_k; ++j) {
    const int jm = coeffs.grid.mirror_index(j);
    if (obp[j] > 0.0) {
      // rightward family: incoming 0- value is the left cell at k, the
      // outgoing 0+ value mixes it with the reflected right cell at -k
      const double in_l = values(j, il);
      const double refl = values(jm, ir);
      tr(j, 0) = in_l;
      tr(j, 1) = temperature + coeffs.p_minus[j] * (refl - temperature) +
                 coeffs.p_plus[j] * (in_l - temperature);
    } else {
      const double in_r = values(j, ir);
      const double refl = values(jm, il);
      tr(j, 0) = temperature + coeffs.p_minus[j] * (refl - temperature) +
                 coeffs.p_plus[j] * (in_r - temperature);
      tr(j, 1) = in_r;
    }
  }
  return tr;
}

namespace {

double weighted_trace_energy(const Mat& traces, const InterfaceCoefficients& c,
                             const Vec& obp, double temperature) {
  double acc = 0.0;
  for (int j = 0; j < c.grid.n_k; ++j) {
    const double a = traces(j, 0) - temperature;
    const double b = traces(j, 1) - temperature;
    acc += std::abs(obp[j]) * c.g_abs[j] * (a * a + b * b);
  }
  return acc * c.grid.cell_width;
}

} // namespace

FvResult solve_fv(const SimConfig& cfg, const DispersionModel& model,
                  const InterfaceCoefficients& coeffs, const DiscreteL& dl,
                  const Mat& w0, const std::vector<double>& snapshot_times,
                  int record_stride) {
  cfg.validate();
  if (coeffs.grid.n_k != cfg.n_k || dl.grid.n_k != cfg.n_k)
    throw std::invalid_argument("solve_fv: coefficient tables do not match n_k");
  if (w0.rows() != cfg.n_k || w0.cols() != cfg.n_y)
    throw std::invalid_argument("solve_fv: initial field has wrong shape");

  FvResult out;
  out.kgrid = dl.grid;
  out.ygrid = SpatialGrid::make(cfg.n_y, cfg.domain_half_width);
  const SpatialGrid& yg = out.ygrid;
  const int n_k = cfg.n_k, n_y = cfg.n_y;
  const int il = yg.left_of_interface(), ir = yg.right_of_interface();
  const double T = cfg.temperature, eps = cfg.eps, dy = yg.dy;
  const double dk = dl.grid.cell_width;

  const Vec obp = omega_bar_prime_samples(model, out.kgrid);
  const double dt_full = cfg.cfl * eps * dy / model.vel_max;
  out.dt = dt_full;

  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  for (double s : snaps)
    if (!(s >= 0.0) || s > cfg.t_end + 1e-9)
      throw std::invalid_argument("solve_fv: snapshot time outside [0, t_end]");

  // stepping lands exactly on every event time (snapshots and t_end)
  std::vector<double> events = snaps;
  events.push_back(cfg.t_end);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-12;
                           }),
               events.end());

  Mat w = w0;

  const double mu_full = dt_full * cfg.gamma_scat / (eps * eps);
  Eigen::PartialPivLU<Mat> lu_full(
      Mat(Mat::Identity(n_k, n_k) - mu_full * dl.matrix));
  Eigen::PartialPivLU<Mat> lu_short;
  double dt_cached = -1.0;

  auto l2_of = [&](const Mat& m) {
    return (m.array() - T).matrix().squaredNorm() * dy * dk;
  };
  auto dirichlet_total = [&](const Mat& m) {
    // sum over columns of the per-cell Dirichlet form, via D(f) = -2 dk f'Mf
    Mat wt = m.array() - T;
    return -2.0 * dk * (dl.matrix * wt).cwiseProduct(wt).sum() * dy;
  };

  DiagnosticsSeries& diag = out.diagnostics;
  const double l20 = l2_of(w);
  diag.l2_bound = l20;
  diag.dirichlet_bound = eps * eps / cfg.gamma_scat * l20;
  diag.trace_bound = 2.0 * eps * l20;
  double dir_cum = 0.0, trace_cum = 0.0;
  diag.t.push_back(0.0);
  diag.l2_sq.push_back(l20);
  diag.dirichlet_cum.push_back(0.0);
  diag.trace_cum.push_back(0.0);

  size_t sp = 0;
  auto capture_if_requested = [&](double t) {
    while (sp < snaps.size() && snaps[sp] <= t + 1e-12) {
      if (snaps[sp] >= t - 1e-12)
        out.snapshots.push_back(
            {w, interface_traces(w, coeffs, obp, yg, T), t});
      ++sp;
    }
  };
  capture_if_requested(0.0);
  if (record_stride > 0) {
    out.trajectory.push_back(w);
    out.trajectory_times.push_back(0.0);
  }

  double t = 0.0;
  long step = 0;
  const long max_steps =
      static_cast<long>(std::ceil(cfg.t_end / dt_full)) +
      static_cast<long>(events.size()) + 16;
  size_t ev = 0;
  while (ev < events.size() && events[ev] <= 1e-12) ++ev;

  while (t < cfg.t_end - 1e-12) {
    if (step >= max_steps)
      throw std::runtime_error("solve_fv: step budget exceeded");
    const double to_event = events[ev] - t;
    const bool land = to_event <= dt_full * (1.0 + 1e-9);
    const double dt_n = land ? to_event : dt_full;
    if (!(dt_n > 0.0))
      throw std::runtime_error("solve_fv: nonpositive step");

    // traces of the pre-step field; the absorbed-trace functional uses them
    const Mat tr = interface_traces(w, coeffs, obp, yg, T);
    trace_cum += dt_n * weighted_trace_energy(tr, coeffs, obp, T);

    // upwind advection in flux form; sweep order keeps the upwind neighbor
    // at its pre-step value
    for (int j = 0; j < n_k; ++j) {
      const double c = std::abs(obp[j]) * dt_n / (eps * dy);
      if (obp[j] > 0.0) {
        for (int i = n_y - 1; i > ir; --i) w(j, i) -= c * (w(j, i) - w(j, i - 1));
        w(j, ir) -= c * (w(j, ir) - tr(j, 1));
        for (int i = il; i > 0; --i) w(j, i) -= c * (w(j, i) - w(j, i - 1));
        w(j, 0) -= c * (w(j, 0) - T);
      } else {
        for (int i = 0; i < il; ++i) w(j, i) -= c * (w(j, i) - w(j, i + 1));
        w(j, il) -= c * (w(j, il) - tr(j, 0));
        for (int i = ir; i < n_y - 1; ++i) w(j, i) -= c * (w(j, i) - w(j, i + 1));
        w(j, n_y - 1) -= c * (w(j, n_y - 1) - T);
      }
    }

    // implicit relaxation, one factorization shared across y-cells
    const Eigen::PartialPivLU<Mat>* lu = &lu_full;
    if (std::abs(dt_n - dt_full) > 1e-12 * dt_full) {
      if (std::abs(dt_n - dt_cached) > 1e-12 * dt_full) {
        const double mu = dt_n * cfg.gamma_scat / (eps * eps);
        lu_short.compute(Mat::Identity(n_k, n_k) - mu * dl.matrix);
        dt_cached = dt_n;
      }
      lu = &lu_short;
    }
    Mat wt = w.array() - T;
    w = lu->solve(wt);
    w.array() += T;

    if (!w.allFinite()) {
      std::ostringstream msg;
      msg << "solve_fv: non-finite field after step " << step << " (t = " << t
          << ", dt = " << dt_n << ")";
      throw std::runtime_error(msg.str());
    }

    t = land ? events[ev] : t + dt_n;
    if (land) ++ev;
    ++step;

    dir_cum += dt_n * dirichlet_total(w);
    diag.t.push_back(t);
    diag.l2_sq.push_back(l2_of(w));
    diag.dirichlet_cum.push_back(dir_cum);
    diag.trace_cum.push_back(trace_cum);

    capture_if_requested(t);
    if (record_stride > 0 &&
        (step % record_stride == 0 || t >= cfg.t_end - 1e-12)) {
      out.trajectory.push_back(w);
      out.trajectory_times.push_back(t);
    }
  }
  return out;
}

AprioriReport apriori_diagnostics(const DiagnosticsSeries& d, double rel_tol) {
  AprioriReport r;
  if (d.t.empty()) return r;
  const double denom = d.l2_bound > 0.0 ? d.l2_bound : 1.0;
  const double mono_tol = 1e-10 * std::max(d.l2_bound, 1.0);
  r.l2_nonincreasing = true;
  for (size_t i = 1; i < d.l2_sq.size(); ++i)
    if (d.l2_sq[i] > d.l2_sq[i - 1] + mono_tol) r.l2_nonincreasing = false;
  double worst_l2 = 0.0, worst_dir = 0.0, worst_tr = 0.0;
  for (size_t i = 0; i < d.t.size(); ++i) {
    worst_l2 = std::max(worst_l2, (d.l2_sq[i] - d.l2_bound) / denom);
    const double dden = d.l2_bound > 0.0 ? d.dirichlet_bound : 1.0;
    const double tden = d.l2_bound > 0.0 ? d.trace_bound : 1.0;
    worst_dir = std::max(worst_dir, (d.dirichlet_cum[i] - d.dirichlet_bound) / dden);
    worst_tr = std::max(worst_tr, (d.trace_cum[i] - d.trace_bound) / tden);
  }
  r.l2_rel_slack = worst_l2;
  r.dirichlet_rel_slack = worst_dir;
  r.trace_rel_slack = worst_tr;
  r.all_pass = r.l2_nonincreasing && worst_l2 <= rel_tol &&
               worst_dir <= rel_tol && worst_tr <= rel_tol;
  return r;
}

double weak_residual(const FvResult& run, const DispersionModel& model,
                     const DiscreteL& dl, const SimConfig& cfg,
                     const WeakTestFn& phi) {
  if (run.trajectory.size() < 2 ||
      run.trajectory.size() != run.trajectory_times.size())
    throw std::invalid_argument(
        "weak_residual: run must carry a recorded trajectory");
  const int n_k = run.kgrid.n_k, n_y = run.ygrid.n_y;
  if (phi.k_values.size() != n_k)
    throw std::invalid_argument("weak_residual: k profile has wrong size");
  const ScaledBump& sb = phi.space_profile;
  const ScaledBump& tb = phi.time_profile;
  if (!(sb.width > 0.0) || !(tb.width > 0.0))
    throw std::invalid_argument("weak_residual: profile widths must be > 0");
  if (std::abs(sb.center) <= sb.width)
    throw std::invalid_argument(
        "weak_residual: y-support of the test function touches the interface");
  if (std::abs(sb.center) + sb.width > run.ygrid.half_width + 1e-12)
    throw std::invalid_argument(
        "weak_residual: y-support leaves the computational domain");
  if (tb.center + tb.width > run.trajectory_times.back() + 1e-9)
    throw std::invalid_argument(
        "weak_residual: time support must close before the final time");

  const double T = cfg.temperature, eps = cfg.eps;
  const Vec obp = omega_bar_prime_samples(model, run.kgrid);
  Vec by(n_y), bpy(n_y);
  for (int i = 0; i < n_y; ++i) {
    by[i] = sb.value(run.ygrid.centers[i]);
    bpy[i] = sb.deriv(run.ygrid.centers[i]);
  }
  const Vec u1 = phi.k_values;
  const Vec u2 = phi.k_values.cwiseProduct(obp) / eps;
  const Vec u3 = (cfg.gamma_scat / (eps * eps)) * (dl.matrix * phi.k_values);

  auto pairing = [&](size_t n) {
    const Mat wt = run.trajectory[n].array() - T;
    const double t = run.trajectory_times[n];
    const Vec wv = wt * by;
    const Vec wvp = wt * bpy;
    return tb.deriv(t) * u1.dot(wv) +
           tb.value(t) * (u2.dot(wvp) + u3.dot(wv));
  };

  double acc = 0.0;
  double prev = pairing(0);
  for (size_t n = 1; n < run.trajectory.size(); ++n) {
    const double cur = pairing(n);
    acc += 0.5 * (run.trajectory_times[n] - run.trajectory_times[n - 1]) *
           (prev + cur);
    prev = cur;
  }
  // initial pairing <W0 - T, phi(0, ., .)>
  const Mat wt0 = run.trajectory.front().array() - T;
  acc += tb.value(run.trajectory_times.front()) * u1.dot(Vec(wt0 * by));
  return acc * run.ygrid.dy * run.kgrid.cell_width;
}

} // namespace thermokin
