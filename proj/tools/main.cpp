// Command-line front end: reproduces the benchmark pipelines and exposes each
// stage (simulate | infer | region | sweep | validate | benchmark) on files.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lyapinf/config.hpp"
#include "lyapinf/errors.hpp"
#include "lyapinf/io.hpp"
#include "lyapinf/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lyapinf;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitValidation = 5;

struct Flags {
  std::string system;
  std::string config_path;
  std::string out_dir;
  std::string data_dir;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double tf = 0.0;
  double gamma = 0.0;
  double box = 0.0;
  int ics = 0;
  std::vector<double> gammas;
  bool fd = false;
  long long samples = 0;
  int resolution = 0;
  long long boundary = 0;
  bool dump_problem = false;
};

void add_common_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--system", f.system, "benchmark system name");
  cmd->add_option("--config", f.config_path, "config or manifest JSON");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--seed", f.seed, "master RNG seed");
  cmd->add_option("--dt", f.dt, "integration timestep");
  cmd->add_option("--tf", f.tf, "trajectory final time");
  cmd->add_option("--gamma", f.gamma, "auxiliary-function scale (Q = gamma I)");
  cmd->add_option("--box", f.box, "operating region half-width (symmetric box)");
  cmd->add_option("--ics", f.ics, "number of initial conditions");
  cmd->add_option("--samples", f.samples, "Monte-Carlo sample count");
  cmd->add_option("--resolution", f.resolution, "ROA oracle grid resolution per axis");
  cmd->add_option("--boundary", f.boundary, "containment boundary-sample count");
  cmd->add_flag("--fd", f.fd, "use finite-difference derivatives instead of solver output");
}

RunConfig resolve_config(const Flags& f, const CLI::App* cmd) {
  nlohmann::json file_json;
  if (!f.config_path.empty()) {
    const nlohmann::json j = read_json_file(f.config_path);
    file_json = j.contains("config") ? j["config"] : j;  // accept manifests directly
  }

  std::string system = f.system;
  if (system.empty() && file_json.contains("system")) {
    system = file_json["system"].get<std::string>();
  }
  if (system.empty()) throw config_error("no system given (use --system or --config)");

  RunConfig cfg;
  const auto& names = benchmark_names();
  if (std::find(names.begin(), names.end(), system) != names.end()) {
    cfg = benchmark_preset(system);
  } else if (file_json.contains("region")) {
    // external-data mode: region comes from the config, stages that need the
    // black-box evaluator will reject the unknown name themselves
    cfg.system = system;
  } else {
    throw config_error("unknown system '" + system + "' and no region in config");
  }
  cfg = config_from_json(file_json, cfg);

  auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (passed("--seed")) {
    cfg.seed = f.seed;
    cfg.mc.seed = 0;          // re-derive from the new master seed
    cfg.validation.seed = 0;
  }
  if (passed("--dt")) cfg.dt = f.dt;
  if (passed("--tf")) cfg.tf = f.tf;
  if (passed("--gamma")) cfg.gamma = f.gamma;
  if (passed("--box")) cfg.region = Region::centered_box(cfg.dim(), f.box);
  if (passed("--ics")) cfg.num_ics = f.ics;
  if (passed("--fd")) cfg.use_fd = f.fd;
  if (passed("--samples")) cfg.mc.num_samples = f.samples;
  if (passed("--resolution")) cfg.roa.resolution = f.resolution;
  if (passed("--boundary")) cfg.validation.num_boundary = f.boundary;

  finalize_seeds(cfg);
  return cfg;
}

fs::path out_dir(const Flags& f, const RunConfig& cfg) {
  return f.out_dir.empty() ? fs::path("out_" + cfg.system) : fs::path(f.out_dir);
}

// ---- stages -----------------------------------------------------------

void run_simulate(const RunConfig& cfg, const fs::path& dir) {
  const SystemModel model = benchmark_model(cfg.system, cfg.seed);
  const auto trajectories = simulate_trajectories(cfg, model);

  nlohmann::json manifest;
  manifest["config"] = config_to_json(cfg);
  Eigen::Index raw = 0;
  nlohmann::json traj_list = nlohmann::json::array();
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "trajectories/traj_%03zu.csv", i);
    write_trajectory_csv(dir / name, trajectories[i]);
    traj_list.push_back({{"file", name}, {"points", trajectories[i].count()}});
    raw += trajectories[i].count();
  }
  manifest["trajectories"] = traj_list;
  manifest["raw_snapshots"] = raw;
  manifest["filtered_snapshots"] = collect_snapshots(trajectories, cfg.region, cfg.use_fd).count();
  write_json_file(dir / "manifest.json", manifest);
  std::cout << cfg.system << ": " << trajectories.size() << " trajectories, " << raw
            << " raw snapshots, " << manifest["filtered_snapshots"] << " in region\n";
}

SnapshotSet load_snapshots(const RunConfig& cfg, const fs::path& dir, const Flags& f) {
  std::vector<fs::path> files;
  const fs::path data_dir = f.data_dir.empty() ? dir / "trajectories" : fs::path(f.data_dir);
  if (!fs::is_directory(data_dir)) {
    throw data_error("no trajectory directory: " + data_dir.string());
  }
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw data_error("no snapshot CSVs in " + data_dir.string());

  std::vector<Trajectory> trajectories;
  trajectories.reserve(files.size());
  for (const auto& file : files) trajectories.push_back(read_trajectory_csv(file));
  return collect_snapshots(trajectories, cfg.region, cfg.use_fd);
}

void run_infer(const RunConfig& cfg, const fs::path& dir, const Flags& f) {
  const SnapshotSet data = load_snapshots(cfg, dir, f);
  if (f.dump_problem) {
    const QuadraticForm Q = QuadraticForm::scaled_identity(data.dim(), cfg.gamma);
    write_json_file(dir / "problem.json", problem_to_json(assemble(data, Q)));
  }
  const InferenceResult result = infer_lyapunov(data, cfg.gamma, cfg.solver);
  write_json_file(dir / "P.json", quadratic_form_to_json(result.P));
  write_json_file(dir / "solve_report.json", report_to_json(result.report));
  std::printf("inferred P from %lld snapshots: objective %.6e, min eigenvalue %.6e\n",
              static_cast<long long>(data.count()), result.report.final_objective,
              result.report.min_eigenvalue);
}

void run_region(const RunConfig& cfg, const fs::path& dir) {
  const QuadraticForm P = quadratic_form_from_json(read_json_file(dir / "P.json"));
  if (P.min_eigenvalue() <= 0.0) throw numeric_error("stored P is not positive definite");
  const SystemModel model = benchmark_model(cfg.system, cfg.seed);
  const RegionEstimate result = estimate_stability_region(P, cfg.gamma, model, cfg);

  write_json_file(dir / "estimate.json", estimate_to_json(result.estimate));
  if (cfg.dim() == 2) {
    write_ellipse_csv(dir / "ellipse.csv", P, result.estimate.c_star, 0, 1);
  } else if (cfg.dim() == 3) {
    write_ellipse_csv(dir / "ellipse_x1x2.csv", P, result.estimate.c_star, 0, 1);
    write_ellipse_csv(dir / "ellipse_x1x3.csv", P, result.estimate.c_star, 0, 2);
    write_ellipse_csv(dir / "ellipse_x2x3.csv", P, result.estimate.c_star, 1, 2);
  } else if (cfg.is_networked()) {
    write_subsystem_csv(dir / "subsystem_cstar.csv", result.per_plane);
    const auto planes = cfg.subsystem_planes();
    for (std::size_t i = 0; i < planes.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "ellipse_sub%02zu.csv", i + 1);
      write_ellipse_csv(dir / name, P, result.estimate.c_star, planes[i].first,
                        planes[i].second);
    }
  }
  std::printf("c* = %.6e (%s), ellipsoid volume %.6e\n", result.estimate.c_star,
              result.estimate.violations_found ? "violation-limited" : "region-capped",
              result.estimate.volume);
}

void run_sweep(const RunConfig& cfg, const fs::path& dir) {
  const SystemModel model = benchmark_model(cfg.system, cfg.seed);
  const auto trajectories = simulate_trajectories(cfg, model);
  const SnapshotSet data = collect_snapshots(trajectories, cfg.region, cfg.use_fd);
  const std::vector<double> gammas = cfg.gammas.empty() ? default_gamma_grid() : cfg.gammas;
  const auto planes = cfg.is_networked() ? cfg.subsystem_planes()
                                         : std::vector<std::pair<int, int>>{};
  const SweepResult result = sweep_gamma(data, model, cfg.region, gammas, cfg.solver, cfg.mc,
                                         planes);
  write_sweep_csv(dir / "sweep.csv", result.rows);
  write_json_file(dir / "estimate.json", estimate_to_json(result.best));
  write_json_file(dir / "P.json", quadratic_form_to_json(result.best.P));
  nlohmann::json manifest;
  manifest["config"] = config_to_json(cfg);
  manifest["gammas"] = gammas;
  write_json_file(dir / "manifest.json", manifest);
  std::printf("best gamma %.6g: c* = %.6e, volume %.6e\n", result.best.gamma, result.best.c_star,
              result.best.volume);
}

int run_validate(const RunConfig& cfg, const fs::path& dir) {
  const StabilityEstimate est = estimate_from_json(read_json_file(dir / "estimate.json"));
  const SystemModel model = benchmark_model(cfg.system, cfg.seed);

  const double fraction =
      validate_containment(est, model, cfg.validation.num_boundary, cfg.validation_t_final(),
                           cfg.validation.conv_tol, cfg.validation.seed, cfg.validation.dt);

  nlohmann::json report;
  report["containment_fraction"] = fraction;
  report["num_boundary"] = cfg.validation.num_boundary;

  if (cfg.dim() <= 3) {
    const ROAGrid grid = true_roa_grid(model, cfg.region, cfg.roa_resolution(),
                                       cfg.roa_t_final(), cfg.roa.conv_tol, cfg.roa.dt);
    write_roa_grid_csv(dir / "roa_grid.csv", grid);
    std::size_t inside_not_converged = 0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      const Eigen::VectorXd x = grid.node(i);
      if (est.P.value(x) <= est.c_star && !grid.converged[i]) ++inside_not_converged;
    }
    report["grid_resolution"] = grid.resolution;
    report["grid_converged_nodes"] = grid.converged_count();
    report["grid_nodes_inside_ellipsoid_not_converged"] = inside_not_converged;
  }

  nlohmann::json est_json = estimate_to_json(est);
  est_json["containment_fraction"] = fraction;
  write_json_file(dir / "estimate.json", est_json);
  write_json_file(dir / "validation.json", report);
  std::printf("containment fraction %.4f over %lld boundary samples\n", fraction,
              static_cast<long long>(cfg.validation.num_boundary));
  return fraction < 1.0 ? kExitValidation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic Lyapunov function inference from trajectory data"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* cmd_simulate = app.add_subcommand("simulate", "generate trajectory data");
  CLI::App* cmd_infer = app.add_subcommand("infer", "fit P to snapshot data");
  CLI::App* cmd_region = app.add_subcommand("region", "estimate the sublevel constant c*");
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "select gamma by largest estimated region");
  CLI::App* cmd_validate = app.add_subcommand("validate", "check containment in the true ROA");
  CLI::App* cmd_benchmark = app.add_subcommand("benchmark", "full pipeline with presets");

  for (CLI::App* cmd : {cmd_simulate, cmd_infer, cmd_region, cmd_sweep, cmd_validate,
                        cmd_benchmark}) {
    add_common_options(cmd, flags);
  }
  cmd_infer->add_option("--data", flags.data_dir, "external snapshot CSV directory");
  cmd_infer->add_flag("--dump-problem", flags.dump_problem, "also write the factored problem");
  cmd_sweep->add_option("--gammas", flags.gammas, "explicit gamma grid");
  std::string benchmark_name;
  cmd_benchmark->add_option("name", benchmark_name, "benchmark system")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    if (active == cmd_benchmark) flags.system = benchmark_name;

    RunConfig cfg = resolve_config(flags, active);
    if (!flags.gammas.empty()) cfg.gammas = flags.gammas;
    const fs::path dir = out_dir(flags, cfg);
    fs::create_directories(dir);

    if (active == cmd_simulate) {
      run_simulate(cfg, dir);
    } else if (active == cmd_infer) {
      run_infer(cfg, dir, flags);
    } else if (active == cmd_region) {
      run_region(cfg, dir);
    } else if (active == cmd_sweep) {
      run_sweep(cfg, dir);
    } else if (active == cmd_validate) {
      return run_validate(cfg, dir);
    } else if (active == cmd_benchmark) {
      run_simulate(cfg, dir);
      run_infer(cfg, dir, flags);
      run_region(cfg, dir);
      return run_validate(cfg, dir);
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
