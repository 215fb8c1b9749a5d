#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lyapinf/data.hpp"
#include "lyapinf/dynamics.hpp"
#include "lyapinf/region.hpp"
#include "lyapinf/solver.hpp"

namespace lyapinf {

struct RoaOracleConfig {
  int resolution = 0;     // 0 = auto (201 for n=2, 61 for n=3)
  double t_final = 0.0;   // 0 = auto (3 * tf)
  double conv_tol = 1e-2;
  double dt = 0.01;
};

struct ValidationConfig {
  Eigen::Index num_boundary = 1000;
  double t_final = 0.0;  // 0 = auto (3 * tf)
  double conv_tol = 1e-2;
  double dt = 0.01;
  std::uint64_t seed = 0;  // 0 = derive from the run seed
};

/// Resolved run configuration: benchmark presets overridden by a config file,
/// overridden by CLI flags. Serialized into every manifest so a run can be
/// reproduced from its outputs.
struct RunConfig {
  std::string system;
  std::uint64_t seed = 1;
  Region region;
  double dt = 0.01;
  double tf = 5.0;
  double gamma = 1.0;
  std::vector<double> gammas;  // sweep grid; empty = default grid
  IcScheme ic = IcScheme::uniform();
  int num_ics = 10;
  bool use_fd = false;
  SolverConfig solver;
  MCConfig mc;
  RoaOracleConfig roa;
  ValidationConfig validation;

  int dim() const { return region.dim(); }
  bool is_networked() const { return system == "networked_vdp"; }
  std::vector<std::pair<int, int>> subsystem_planes() const;

  double roa_t_final() const { return roa.t_final > 0.0 ? roa.t_final : 3.0 * tf; }
  double validation_t_final() const {
    return validation.t_final > 0.0 ? validation.t_final : 3.0 * tf;
  }
  int roa_resolution() const;
};

/// Table-of-benchmarks defaults for the six named systems.
RunConfig benchmark_preset(const std::string& name);

/// Known benchmark names in presentation order.
const std::vector<std::string>& benchmark_names();

nlohmann::json config_to_json(const RunConfig& config);

/// Reads a config/manifest JSON; fields missing from the JSON keep the values
/// already present in `base`.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base);

/// Fills seed-derived fields (mc.seed, validation.seed) that were left at
/// their derive-me defaults.
void finalize_seeds(RunConfig& config);

}  // namespace lyapinf
