#include "thermokin/config.hpp"

#include <stdexcept>

namespace thermokin {

namespace {

// sim.<name>, falling back to a top-level <name>, falling back to the default
double shared_number(const TomlDoc& doc, const std::string& name,
                     double fallback) {
  return doc.get_number("sim." + name, doc.get_number(name, fallback));
}

long long shared_int(const TomlDoc& doc, const std::string& name,
                     long long fallback) {
  return doc.get_int("sim." + name, doc.get_int(name, fallback));
}

} // namespace

ProblemConfig config_from_doc(const TomlDoc& doc) {
  ProblemConfig pc;

  pc.dispersion_kind = doc.get_string("dispersion.kind", pc.dispersion_kind);
  pc.kappa = doc.get_number("dispersion.kappa", pc.kappa);
  if (pc.dispersion_kind != "sine" && pc.dispersion_kind != "powerlaw")
    throw std::runtime_error("config: unknown dispersion.kind '" +
                             pc.dispersion_kind + "' (sine | powerlaw)");

  pc.kernel_kind = doc.get_string("kernel.kind", pc.kernel_kind);
  pc.r0 = doc.get_number("kernel.r0", pc.r0);
  if (pc.kernel_kind != "uniform" && pc.kernel_kind != "product_sine2")
    throw std::runtime_error("config: unknown kernel.kind '" + pc.kernel_kind +
                             "' (uniform | product_sine2)");

  pc.delta_seq = doc.get_number_array("delta_seq", {});

  SimConfig& s = pc.sim;
  s.eps = doc.get_number("sim.eps", s.eps);
  s.gamma_scat = shared_number(doc, "gamma_scat", s.gamma_scat);
  s.gamma_therm = shared_number(doc, "gamma_therm", s.gamma_therm);
  s.temperature = shared_number(doc, "temperature", s.temperature);
  s.domain_half_width =
      doc.get_number("sim.domain_half_width", s.domain_half_width);
  s.n_y = static_cast<int>(doc.get_int("sim.n_y", s.n_y));
  s.n_k = static_cast<int>(shared_int(doc, "n_k", s.n_k));
  s.t_end = doc.get_number("sim.t_end", s.t_end);
  s.cfl = doc.get_number("sim.cfl", s.cfl);
  s.seed = static_cast<std::uint64_t>(
      doc.get_int("sim.seed", static_cast<long long>(s.seed)));
  s.n_particles =
      static_cast<long>(doc.get_int("sim.n_particles", s.n_particles));

  pc.snapshot_times = doc.get_number_array("sim.snapshot_times",
                                           pc.snapshot_times);

  if (const TomlValue* bv = doc.find("initial.boxes")) {
    if (bv->kind != TomlValue::Kind::Array)
      throw std::runtime_error("config: initial.boxes must be an array");
    pc.boxes.clear();
    for (const auto& item : bv->items) {
      if (item.kind != TomlValue::Kind::Array || item.items.size() != 3 ||
          !item.items[0].is_number() || !item.items[1].is_number() ||
          !item.items[2].is_number())
        throw std::runtime_error(
            "config: each entry of initial.boxes must be [lo, hi, amplitude]");
      pc.boxes.push_back({item.items[0].number(), item.items[1].number(),
                          item.items[2].number()});
    }
  }
  return pc;
}

ProblemConfig load_problem_config(const std::string& path) {
  return config_from_doc(parse_toml_file(path));
}

DispersionModel model_from_config(const ProblemConfig& pc) {
  if (pc.dispersion_kind == "powerlaw") return make_powerlaw_model(pc.kappa);
  return make_default_model();
}

ScatteringKernel kernel_from_config(const ProblemConfig& pc) {
  if (pc.kernel_kind == "product_sine2")
    return make_product_sine2_kernel(pc.r0);
  return make_uniform_kernel();
}

} // namespace thermokin
