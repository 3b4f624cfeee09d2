// Command-line front end: coefficients | diffusion | solve | heat | converge.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "thermokin/config.hpp"
#include "thermokin/corrector.hpp"
#include "thermokin/csv.hpp"
#include "thermokin/harness.hpp"
#include "thermokin/heat.hpp"
#include "thermokin/interface_coefficients.hpp"
#include "thermokin/kinetic.hpp"
#include "thermokin/mc.hpp"

namespace tk = thermokin;

namespace {

tk::ProblemConfig load_or_default(const std::string& path) {
  if (path.empty()) return tk::ProblemConfig{};
  return tk::load_problem_config(path);
}

std::vector<double> ladder_or_default(const tk::ProblemConfig& pc) {
  if (pc.delta_seq.empty()) return {1e-2, 1e-3, 1e-4};
  return pc.delta_seq;
}

int cmd_coefficients(const std::string& config, int n_k_override,
                     const std::string& path_name, const std::string& out) {
  const tk::ProblemConfig pc = load_or_default(config);
  const tk::DispersionModel model = tk::model_from_config(pc);
  const int n_k = n_k_override > 0 ? n_k_override : pc.sim.n_k;
  const tk::WavenumberGrid grid = tk::WavenumberGrid::make(n_k);
  tk::CoefficientPath path = tk::CoefficientPath::Auto;
  if (path_name == "closed") path = tk::CoefficientPath::ClosedForm;
  else if (path_name == "quadrature") path = tk::CoefficientPath::Quadrature;
  else if (path_name != "auto")
    throw std::runtime_error("unknown --path (auto | closed | quadrature)");
  const tk::InterfaceCoefficients coeffs = tk::build_interface_coefficients(
      model, pc.sim.gamma_therm, pc.sim.temperature, grid, path,
      ladder_or_default(pc));
  const tk::Vec residual = tk::verify_thermostat_identity(coeffs, model);
  auto f = tk::open_output(out);
  f << "k,re_nu,im_nu,p_plus,p_minus,g_abs,identity_residual\n";
  for (int j = 0; j < n_k; ++j)
    f << tk::fmt(grid.midpoints[j]) << ',' << tk::fmt(coeffs.nu[j].real())
      << ',' << tk::fmt(coeffs.nu[j].imag()) << ','
      << tk::fmt(coeffs.p_plus[j]) << ',' << tk::fmt(coeffs.p_minus[j]) << ','
      << tk::fmt(coeffs.g_abs[j]) << ',' << tk::fmt(residual[j]) << '\n';
  std::cout << "wrote " << out << " (" << n_k << " cells, max identity residual "
            << tk::fmt(residual.cwiseAbs().maxCoeff()) << ")\n";
  return 0;
}

int cmd_diffusion(const std::string& config, const std::string& out) {
  const tk::ProblemConfig pc = load_or_default(config);
  const tk::DispersionModel model = tk::model_from_config(pc);
  const tk::ScatteringKernel kernel = tk::kernel_from_config(pc);
  const tk::WavenumberGrid grid = tk::WavenumberGrid::make(pc.sim.n_k);
  const tk::DiscreteL dl = tk::assemble_discrete_l(kernel, grid);
  const tk::DiffusiveCheck dc =
      tk::check_diffusive_condition(model, kernel, grid);
  if (dc.divergence_warning)
    std::cerr << "warning: diffusive condition violated "
                 "(int omega'^2/R diverges); D is grid-dependent\n";
  const tk::CorrectorSolution corr =
      tk::compute_corrector(model, dl, pc.sim.gamma_scat);
  std::cout << "D = " << tk::fmt(corr.diffusion) << "  (n_k = " << pc.sim.n_k
            << ", kernel = " << pc.kernel_kind << ")\n";
  auto f = tk::open_output(out);
  f << "k,x1,x2\n";
  for (int j = 0; j < pc.sim.n_k; ++j)
    f << tk::fmt(grid.midpoints[j]) << ',' << tk::fmt(corr.x1[j]) << ','
      << tk::fmt(corr.x2[j]) << '\n';
  std::cout << "wrote " << out << "\n";
  return 0;
}

void write_snapshot_csv(const tk::KineticField& snap, const tk::FvResult& run,
                        const std::string& path) {
  auto f = tk::open_output(path);
  f << "y,k,W\n";
  for (int i = 0; i < run.ygrid.n_y; ++i)
    for (int j = 0; j < run.kgrid.n_k; ++j)
      f << tk::fmt(run.ygrid.centers[i]) << ','
        << tk::fmt(run.kgrid.midpoints[j]) << ',' << tk::fmt(snap.values(j, i))
        << '\n';
}

int cmd_solve(const std::string& config, const std::string& solver,
              const std::string& outdir) {
  const tk::ProblemConfig pc = load_or_default(config);
  const tk::DispersionModel model = tk::model_from_config(pc);
  const tk::ScatteringKernel kernel = tk::kernel_from_config(pc);
  const tk::WavenumberGrid kgrid = tk::WavenumberGrid::make(pc.sim.n_k);
  const tk::SpatialGrid ygrid =
      tk::SpatialGrid::make(pc.sim.n_y, pc.sim.domain_half_width);
  const tk::DiscreteL dl = tk::assemble_discrete_l(kernel, kgrid);
  const tk::InterfaceCoefficients coeffs = tk::build_interface_coefficients(
      model, pc.sim.gamma_therm, pc.sim.temperature, kgrid,
      tk::CoefficientPath::Auto, ladder_or_default(pc));
  const tk::Mat w0 = tk::initial_box_field(kgrid, ygrid, pc.boxes);
  std::filesystem::create_directories(outdir);
  const std::vector<tk::Observable> bank = tk::default_observable_bank();

  if (solver == "fv") {
    const tk::FvResult run =
        tk::solve_fv(pc.sim, model, coeffs, dl, w0, pc.snapshot_times, 0);
    for (const auto& snap : run.snapshots) {
      char tag[32];
      std::snprintf(tag, sizeof tag, "%g", snap.time);
      write_snapshot_csv(snap, run,
                         outdir + "/snapshot_" + tag + ".csv");
    }
    {
      auto f = tk::open_output(outdir + "/diagnostics.csv");
      f << "t,l2,dirichlet_cum,trace_cum,l2_bound,dirichlet_bound,"
           "trace_bound\n";
      const auto& d = run.diagnostics;
      for (size_t n = 0; n < d.t.size(); ++n)
        f << tk::fmt(d.t[n]) << ',' << tk::fmt(d.l2_sq[n]) << ','
          << tk::fmt(d.dirichlet_cum[n]) << ',' << tk::fmt(d.trace_cum[n])
          << ',' << tk::fmt(d.l2_bound) << ',' << tk::fmt(d.dirichlet_bound)
          << ',' << tk::fmt(d.trace_bound) << '\n';
    }
    {
      auto f = tk::open_output(outdir + "/observables.csv");
      f << "t,phi_id,estimate,stderr\n";
      const double dydk = ygrid.dy * kgrid.cell_width;
      for (const auto& snap : run.snapshots)
        for (const auto& obs : bank) {
          double acc = 0.0;
          for (int i = 0; i < ygrid.n_y; ++i)
            for (int j = 0; j < kgrid.n_k; ++j)
              acc += snap.values(j, i) *
                     obs.fn(ygrid.centers[i], kgrid.midpoints[j]);
          f << tk::fmt(snap.time) << ',' << obs.id << ',' << tk::fmt(acc * dydk)
            << ",0\n";
        }
    }
    const tk::AprioriReport rep = tk::apriori_diagnostics(run.diagnostics);
    std::cout << "fv solve done: " << run.snapshots.size() << " snapshots, "
              << "a priori bounds " << (rep.all_pass ? "pass" : "FAIL") << "\n";
    return rep.all_pass ? 0 : 1;
  }
  if (solver == "mc") {
    const tk::McResult res =
        tk::solve_mc(pc.sim, model, coeffs, dl, w0, pc.snapshot_times, bank);
    auto f = tk::open_output(outdir + "/observables.csv");
    f << "t,phi_id,estimate,stderr\n";
    for (size_t s = 0; s < res.times.size(); ++s)
      for (size_t o = 0; o < res.ids.size(); ++o)
        f << tk::fmt(res.times[s]) << ',' << res.ids[o] << ','
          << tk::fmt(res.estimates(o, s)) << ',' << tk::fmt(res.stderrs(o, s))
          << '\n';
    std::cout << "mc solve done: " << res.ids.size() << " observables at "
              << res.times.size() << " times, " << res.alive_end << "/"
              << pc.sim.n_particles << " particles alive at t_end\n";
    return 0;
  }
  throw std::runtime_error("unknown --solver (fv | mc)");
}

int cmd_heat(const std::string& config, std::vector<double> times,
             const std::string& out) {
  const tk::ProblemConfig pc = load_or_default(config);
  const tk::DispersionModel model = tk::model_from_config(pc);
  const tk::ScatteringKernel kernel = tk::kernel_from_config(pc);
  const tk::WavenumberGrid kgrid = tk::WavenumberGrid::make(pc.sim.n_k);
  const tk::SpatialGrid ygrid =
      tk::SpatialGrid::make(pc.sim.n_y, pc.sim.domain_half_width);
  const tk::DiscreteL dl = tk::assemble_discrete_l(kernel, kgrid);
  const double d = tk::diffusion_coefficient(model, dl, pc.sim.gamma_scat);
  const tk::Mat w0 = tk::initial_box_field(kgrid, ygrid, pc.boxes);
  const tk::HeatProfile hp{tk::rho0_from_w0(w0, ygrid), d,
                           pc.sim.temperature};
  if (times.empty()) times = pc.snapshot_times;
  auto f = tk::open_output(out);
  f << "t,y,rho\n";
  for (double t : times)
    for (int i = 0; i < ygrid.n_y; ++i)
      f << tk::fmt(t) << ',' << tk::fmt(ygrid.centers[i]) << ','
        << tk::fmt(tk::heat_dirichlet(hp, t, ygrid.centers[i])) << '\n';
  std::cout << "wrote " << out << " (D = " << tk::fmt(d) << ")\n";
  return 0;
}

int cmd_converge(const std::string& config, std::vector<double> eps_list,
                 const std::string& outdir) {
  const tk::ProblemConfig pc = load_or_default(config);
  const tk::DispersionModel model = tk::model_from_config(pc);
  const tk::ScatteringKernel kernel = tk::kernel_from_config(pc);
  if (eps_list.empty()) eps_list = {0.4, 0.2, 0.1};
  const tk::ConvergenceReport report = tk::run_convergence(
      pc.sim, model, kernel, pc.boxes, eps_list, pc.snapshot_times);
  std::filesystem::create_directories(outdir);
  tk::write_convergence_csv(report, outdir + "/convergence.csv");
  tk::write_summary_csv(report, outdir + "/summary.csv");
  tk::write_convergence_dat(report, outdir + "/convergence.dat");
  std::printf("D = %.12g, heat normalization = %.6g\n", report.diffusion,
              report.heat_normalization);
  std::printf("%8s %14s %12s %14s %14s %6s\n", "eps", "max_err", "rel_err",
              "equilibration", "near_iface", "diag");
  for (const auto& r : report.runs)
    std::printf("%8.3g %14.6e %12.4f %14.6e %14.6e %6s\n", r.eps,
                r.max_weak_error, r.rel_error, r.equilibration,
                r.near_interface, r.apriori.all_pass ? "ok" : "FAIL");
  std::printf("errors decreasing: %s | equilibration decreasing: %s | "
              "near-interface decreasing: %s | diagnostics: %s\n",
              report.errors_decreasing ? "yes" : "NO",
              report.equilibration_decreasing ? "yes" : "NO",
              report.near_interface_decreasing ? "yes" : "NO",
              report.diagnostics_pass ? "pass" : "FAIL");
  return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear phonon Boltzmann equation with a thermostatted "
               "interface: coefficients, solvers, heat reference, convergence"};
  app.require_subcommand(1);

  std::string config, out, path_name = "auto", solver = "fv";
  int n_k_override = 0;
  std::vector<double> times, eps_list;

  auto* c_coeff = app.add_subcommand(
      "coefficients", "interface coefficient table (nu, p+, p-, g)");
  c_coeff->add_option("--config", config, "TOML config file");
  c_coeff->add_option("--n-k", n_k_override, "override wavenumber cell count");
  c_coeff->add_option("--path", path_name, "auto | closed | quadrature");
  c_coeff->add_option("--out", out, "output CSV")->default_val("coeffs.csv");

  auto* c_diff = app.add_subcommand(
      "diffusion", "corrector solve and diffusion constant");
  c_diff->add_option("--config", config, "TOML config file");
  c_diff->add_option("--out", out, "corrector CSV")
      ->default_val("corrector.csv");

  auto* c_solve =
      app.add_subcommand("solve", "kinetic solve (finite volume or particles)");
  c_solve->add_option("--config", config, "TOML config file");
  c_solve->add_option("--solver", solver, "fv | mc")->default_val("fv");
  c_solve->add_option("--out", out, "output directory")->default_val("run");

  auto* c_heat =
      app.add_subcommand("heat", "image-kernel Dirichlet heat reference");
  c_heat->add_option("--config", config, "TOML config file");
  c_heat->add_option("--times", times, "evaluation times")->delimiter(',');
  c_heat->add_option("--out", out, "output CSV")->default_val("heat.csv");

  auto* c_conv =
      app.add_subcommand("converge", "diffusive-limit convergence sweep");
  c_conv->add_option("--config", config, "TOML config file");
  c_conv->add_option("--eps", eps_list, "epsilon list")->delimiter(',');
  c_conv->add_option("--out", out, "report directory")->default_val("report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_coeff->parsed())
      return cmd_coefficients(config, n_k_override, path_name, out);
    if (c_diff->parsed()) return cmd_diffusion(config, out);
    if (c_solve->parsed()) return cmd_solve(config, solver, out);
    if (c_heat->parsed()) return cmd_heat(config, times, out);
    if (c_conv->parsed()) return cmd_converge(config, eps_list, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
