#pragma once

#include <vector>

#include "lyapinf/config.hpp"
#include "lyapinf/data.hpp"
#include "lyapinf/dynamics.hpp"
#include "lyapinf/region.hpp"
#include "lyapinf/solver.hpp"
#include "lyapinf/zubov.hpp"

namespace lyapinf {

/// Simulates the configured initial conditions, one trajectory per IC, in IC
/// order (parallel under the hood, order-deterministic output).
std::vector<Trajectory> simulate_trajectories(const RunConfig& config, const SystemModel& model);

/// Region-filters trajectories and concatenates them into one training set.
/// With use_fd, derivatives are replaced by finite differences of the states
/// before filtering. Throws data_error if nothing survives.
SnapshotSet collect_snapshots(const std::vector<Trajectory>& trajectories, const Region& region,
                              bool use_fd);

struct InferenceResult {
  QuadraticForm P;
  SolveReport report;
};

/// Assemble with Q = gamma I and solve for P.
InferenceResult infer_lyapunov(const SnapshotSet& data, double gamma,
                               const SolverConfig& solver_cfg);

struct RegionEstimate {
  StabilityEstimate estimate;
  std::vector<CStarResult> per_plane;  // subsystem mode only
};

/// c* + ellipsoid volume; networked systems use the per-subsystem-plane
/// procedure, everything else the full-dimensional sampler.
RegionEstimate estimate_stability_region(const QuadraticForm& P, double gamma,
                                         const SystemModel& model, const RunConfig& config);

}  // namespace lyapinf
