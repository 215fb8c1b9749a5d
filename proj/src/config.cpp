#include "lyapinf/config.hpp"

#include "lyapinf/errors.hpp"
#include "lyapinf/rng.hpp"

namespace lyapinf {

namespace {

std::string scheme_name(IcScheme::Kind kind) {
  switch (kind) {
    case IcScheme::Kind::Circle: return "circle";
    case IcScheme::Kind::Sphere: return "sphere";
    case IcScheme::Kind::BoxBoundary: return "box_boundary";
    case IcScheme::Kind::Uniform: return "uniform";
    case IcScheme::Kind::PerSubsystemCircle: return "per_subsystem_circle";
    case IcScheme::Kind::SubsystemCircleSolo: return "subsystem_circle_solo";
  }
  return "uniform";
}

IcScheme::Kind scheme_from_name(const std::string& name) {
  if (name == "circle") return IcScheme::Kind::Circle;
  if (name == "sphere") return IcScheme::Kind::Sphere;
  if (name == "box_boundary") return IcScheme::Kind::BoxBoundary;
  if (name == "uniform") return IcScheme::Kind::Uniform;
  if (name == "per_subsystem_circle") return IcScheme::Kind::PerSubsystemCircle;
  if (name == "subsystem_circle_solo") return IcScheme::Kind::SubsystemCircleSolo;
  throw config_error("unknown IC scheme: " + name);
}

}  // namespace

std::vector<std::pair<int, int>> RunConfig::subsystem_planes() const {
  std::vector<std::pair<int, int>> planes;
  for (int i = 0; i + 1 < dim(); i += 2) planes.emplace_back(i, i + 1);
  return planes;
}

int RunConfig::roa_resolution() const {
  if (roa.resolution > 0) return roa.resolution;
  if (dim() == 2) return 201;
  if (dim() == 3) return 61;
  return 0;
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"quadratic2d", "vanderpol", "pendulum",
                                                 "trigexp",     "cubic3d",   "networked_vdp"};
  return names;
}

RunConfig benchmark_preset(const std::string& name) {
  RunConfig c;
  c.system = name;
  if (name == "quadratic2d") {
    c.region = Region::centered_box(2, 5.0);
    c.tf = 5.0;
    c.dt = 0.01;
    c.gamma = 1.0;
    c.num_ics = 16;
    c.ic = IcScheme::circle(5.0);
  } else if (name == "vanderpol") {
    c.region = Region::centered_box(2, 3.0);
    c.tf = 5.0;
    c.dt = 0.01;
    c.gamma = 2.0;
    c.num_ics = 10;
    c.ic = IcScheme::circle(1.5);
  } else if (name == "pendulum") {
    c.region = Region::centered_box(2, 4.0);
    c.tf = 10.0;
    c.dt = 0.001;
    c.gamma = 0.2;
    c.num_ics = 20;
    c.ic = IcScheme::box_boundary();
  } else if (name == "trigexp") {
    c.region = Region::centered_box(2, 3.0);
    c.tf = 10.0;
    c.dt = 0.01;
    c.gamma = 0.01;
    c.num_ics = 30;
    c.ic = IcScheme::uniform();
  } else if (name == "cubic3d") {
    c.region = Region::centered_box(3, 3.0);
    c.tf = 5.0;
    c.dt = 0.01;
    c.gamma = 1.0;
    c.num_ics = 25;
    c.ic = IcScheme::sphere(3.0);
  } else if (name == "networked_vdp") {
    c.region = Region::centered_box(20, 4.0);
    c.tf = 10.0;
    c.dt = 0.01;
    c.gamma = 0.1;
    c.num_ics = 80;
    c.ic = IcScheme::subsystem_circle_solo(1.0);
    c.mc.num_samples = 100000;  // per subsystem plane
    c.validation.num_boundary = 500;
  } else {
    throw config_error("unknown benchmark system: " + name);
  }
  return c;
}

void finalize_seeds(RunConfig& config) {
  if (config.mc.seed == 0) config.mc.seed = fork_seed(config.seed, 2);
  if (config.validation.seed == 0) config.validation.seed = fork_seed(config.seed, 4);
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["system"] = c.system;
  j["seed"] = c.seed;
  j["region"]["lower"] = std::vector<double>(c.region.lower.begin(), c.region.lower.end());
  j["region"]["upper"] = std::vector<double>(c.region.upper.begin(), c.region.upper.end());
  j["dt"] = c.dt;
  j["tf"] = c.tf;
  j["gamma"] = c.gamma;
  if (!c.gammas.empty()) j["gammas"] = c.gammas;
  j["ic"]["scheme"] = scheme_name(c.ic.kind);
  j["ic"]["radius"] = c.ic.radius;
  j["ic"]["count"] = c.num_ics;
  j["use_fd"] = c.use_fd;
  j["solver"] = {{"max_iters", c.solver.max_iters}, {"tol", c.solver.tol},
                 {"eps_diag", c.solver.eps_diag},   {"accel", c.solver.accel},
                 {"step_safety", c.solver.step_safety}};
  j["mc"] = {{"num_samples", c.mc.num_samples},
             {"seed", c.mc.seed},
             {"origin_exclusion", c.mc.origin_exclusion},
             {"boundary_samples", c.mc.boundary_samples}};
  j["roa"] = {{"resolution", c.roa.resolution},
              {"t_final", c.roa.t_final},
              {"conv_tol", c.roa.conv_tol},
              {"dt", c.roa.dt}};
  j["validation"] = {{"num_boundary", c.validation.num_boundary},
                     {"t_final", c.validation.t_final},
                     {"conv_tol", c.validation.conv_tol},
                     {"dt", c.validation.dt},
                     {"seed", c.validation.seed}};
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
  try {
    if (j.contains("system")) c.system = j["system"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("region")) {
      const auto lo = j["region"]["lower"].get<std::vector<double>>();
      const auto hi = j["region"]["upper"].get<std::vector<double>>();
      c.region = Region(Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size()),
                        Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size()));
    }
    if (j.contains("dt")) c.dt = j["dt"].get<double>();
    if (j.contains("tf")) c.tf = j["tf"].get<double>();
    if (j.contains("gamma")) c.gamma = j["gamma"].get<double>();
    if (j.contains("gammas")) c.gammas = j["gammas"].get<std::vector<double>>();
    if (j.contains("ic")) {
      const auto& ic = j["ic"];
      if (ic.contains("scheme")) c.ic.kind = scheme_from_name(ic["scheme"].get<std::string>());
      if (ic.contains("radius")) c.ic.radius = ic["radius"].get<double>();
      if (ic.contains("count")) c.num_ics = ic["count"].get<int>();
    }
    if (j.contains("use_fd")) c.use_fd = j["use_fd"].get<bool>();
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      if (s.contains("max_iters")) c.solver.max_iters = s["max_iters"].get<int>();
      if (s.contains("tol")) c.solver.tol = s["tol"].get<double>();
      if (s.contains("eps_diag")) c.solver.eps_diag = s["eps_diag"].get<double>();
      if (s.contains("accel")) c.solver.accel = s["accel"].get<bool>();
      if (s.contains("step_safety")) c.solver.step_safety = s["step_safety"].get<double>();
    }
    if (j.contains("mc")) {
      const auto& m = j["mc"];
      if (m.contains("num_samples")) c.mc.num_samples = m["num_samples"].get<Eigen::Index>();
      if (m.contains("seed")) c.mc.seed = m["seed"].get<std::uint64_t>();
      if (m.contains("origin_exclusion")) c.mc.origin_exclusion = m["origin_exclusion"].get<double>();
      if (m.contains("boundary_samples")) {
        c.mc.boundary_samples = m["boundary_samples"].get<Eigen::Index>();
      }
    }
    if (j.contains("roa")) {
      const auto& r = j["roa"];
      if (r.contains("resolution")) c.roa.resolution = r["resolution"].get<int>();
      if (r.contains("t_final")) c.roa.t_final = r["t_final"].get<double>();
      if (r.contains("conv_tol")) c.roa.conv_tol = r["conv_tol"].get<double>();
      if (r.contains("dt")) c.roa.dt = r["dt"].get<double>();
    }
    if (j.contains("validation")) {
      const auto& v = j["validation"];
      if (v.contains("num_boundary")) {
        c.validation.num_boundary = v["num_boundary"].get<Eigen::Index>();
      }
      if (v.contains("t_final")) c.validation.t_final = v["t_final"].get<double>();
      if (v.contains("conv_tol")) c.validation.conv_tol = v["conv_tol"].get<double>();
      if (v.contains("dt")) c.validation.dt = v["dt"].get<double>();
      if (v.contains("seed")) c.validation.seed = v["seed"].get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("malformed config JSON: ") + e.what());
  }
  return c;
}

}  // namespace lyapinf
