#include "lyapinf/pipeline.hpp"

#include "lyapinf/errors.hpp"
#include "lyapinf/parallel.hpp"

namespace lyapinf {

std::vector<Trajectory> simulate_trajectories(const RunConfig& config, const SystemModel& model) {
  const auto ics = initial_conditions(config.ic, config.num_ics, config.region, config.seed);
  std::vector<Trajectory> trajectories(ics.size());
  parallel_for(ics.size(), [&](std::size_t i) {
    trajectories[i] = simulate(model, ics[i], config.dt, config.tf);
  });
  return trajectories;
}

SnapshotSet collect_snapshots(const std::vector<Trajectory>& trajectories, const Region& region,
                              bool use_fd) {
  std::vector<SnapshotSet> sets;
  sets.reserve(trajectories.size());
  for (const auto& traj : trajectories) {
    if (traj.count() == 0) continue;
    if (use_fd && traj.count() >= 2) {
      Trajectory fd = traj;
      fd.derivs = finite_difference(traj.times, traj.states);
      sets.push_back(filter_to_region(fd, region));
    } else {
      sets.push_back(filter_to_region(traj, region));
    }
  }
  if (sets.empty()) throw data_error("no trajectories produced any snapshots");
  SnapshotSet all = concat(sets);
  if (all.count() == 0) throw data_error("no snapshots inside the operating region");
  return all;
}

InferenceResult infer_lyapunov(const SnapshotSet& data, double gamma,
                               const SolverConfig& solver_cfg) {
  const QuadraticForm Q = QuadraticForm::scaled_identity(data.dim(), gamma);
  const ZubovProblem prob = assemble(data, Q);
  auto [P, report] = solve(prob, solver_cfg);
  return {std::move(P), std::move(report)};
}

RegionEstimate estimate_stability_region(const QuadraticForm& P, double gamma,
                                         const SystemModel& model, const RunConfig& config) {
  RegionEstimate out;
  out.estimate.P = P;
  out.estimate.gamma = gamma;
  if (config.is_networked()) {
    const SubsystemCStar sub =
        estimate_c_star_subsystems(P, model, config.region, config.subsystem_planes(), config.mc);
    out.estimate.c_star = sub.c_star;
    out.estimate.violations_found = sub.violations_found;
    out.estimate.capped_by_region = sub.capped_by_region;
    out.per_plane = sub.per_plane;
  } else {
    const CStarResult cs = estimate_c_star(P, model, config.region, config.mc);
    out.estimate.c_star = cs.c_star;
    out.estimate.violations_found = cs.violations_found;
    out.estimate.capped_by_region = cs.capped_by_region;
  }
  out.estimate.volume = ellipsoid_volume(P, out.estimate.c_star);
  return out;
}

}  // namespace lyapinf
