#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "lyapinf/data.hpp"
#include "lyapinf/dynamics.hpp"
#include "lyapinf/solver.hpp"
#include "lyapinf/zubov.hpp"

namespace lyapinf {

struct MCConfig {
  Eigen::Index num_samples = 200000;   // per plane in subsystem mode
  std::uint64_t seed = 0;
  double origin_exclusion = 1e-8;      // V'(0) = 0 exactly; keep it out of the pool
  Eigen::Index boundary_samples = 10000;
};

struct CStarResult {
  double c_star = 0.0;
  bool violations_found = false;
  bool capped_by_region = false;
};

struct StabilityEstimate {
  QuadraticForm P;
  double gamma = 0.0;
  double c_star = 0.0;
  double volume = 0.0;
  bool violations_found = false;
  bool capped_by_region = false;
};

/// Brute-force grid oracle for the true stability region.
struct ROAGrid {
  Region region;
  int resolution = 0;
  std::vector<std::uint8_t> converged;  // lexicographic, last axis fastest
  double t_final = 0.0;
  double conv_tol = 0.0;

  std::size_t node_count() const { return converged.size(); }
  Eigen::VectorXd node(std::size_t index) const;
  std::size_t converged_count() const;
};

struct SweepRow {
  double gamma = 0.0;
  double objective = 0.0;
  double c_star = 0.0;
  double volume = 0.0;
  bool converged = false;
};

struct SweepResult {
  StabilityEstimate best;
  std::vector<SweepRow> rows;
};

struct SubsystemCStar {
  double c_star = 0.0;                  // min over planes
  std::vector<CStarResult> per_plane;
  bool violations_found = false;        // flags of the minimizing plane
  bool capped_by_region = false;
};

/// Lyapunov derivative along the field: 2 x'P f(x).
double vdot(const QuadraticForm& P, const Eigen::VectorXd& x, const SystemModel& model);

/// Monte-Carlo estimate of the largest sublevel constant. Uniform seeded
/// samples in the region (origin ball excluded); if violating samples
/// (vdot >= 0) exist, c* is the shrunk minimum of V over them, otherwise c*
/// is capped by the minimum of V over sampled region-boundary points.
CStarResult estimate_c_star(const QuadraticForm& P, const SystemModel& model,
                            const Region& region, const MCConfig& mc);

/// Per-subsystem-plane c*: each plane is sampled with all off-plane
/// coordinates fixed at zero; returns the most conservative plane result.
SubsystemCStar estimate_c_star_subsystems(const QuadraticForm& P, const SystemModel& model,
                                          const Region& region,
                                          const std::vector<std::pair<int, int>>& planes,
                                          const MCConfig& mc);

/// Volume of {x : x'Px <= c}: V_n c^{n/2} / sqrt(det P).
double ellipsoid_volume(const QuadraticForm& P, double c);

/// 20 log-spaced values covering [1e-3, 10].
std::vector<double> default_gamma_grid();

/// Full pipeline per gamma (assemble with Q = gamma I, solve, c*, volume);
/// returns the estimate of maximal volume, ties broken by smaller gamma.
/// Pass subsystem planes for the networked benchmark, empty otherwise.
SweepResult sweep_gamma(const SnapshotSet& data, const SystemModel& model, const Region& region,
                        const std::vector<double>& gammas, const SolverConfig& solver_cfg,
                        const MCConfig& mc,
                        const std::vector<std::pair<int, int>>& planes = {});

/// Simulates every grid node for t_final and marks it converged iff the
/// final state norm is below conv_tol and the trajectory stayed finite.
/// Only for n <= 3.
ROAGrid true_roa_grid(const SystemModel& model, const Region& region, int resolution,
                      double t_final, double conv_tol, double dt = 0.01);

/// Samples points on the ellipsoid surface {V = c*} (seeded Gaussian
/// directions mapped through P^{-1/2}), simulates each, and returns the
/// fraction converging to the origin.
double validate_containment(const StabilityEstimate& est, const SystemModel& model,
                            Eigen::Index num_boundary, double t_final, double conv_tol,
                            std::uint64_t seed, double dt = 0.01);

}  // namespace lyapinf
