#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lyapinf/dynamics.hpp"
#include "lyapinf/region.hpp"
#include "lyapinf/solver.hpp"
#include "lyapinf/zubov.hpp"

namespace lyapinf {

/// Snapshot CSV schema: header `t,x1..xn,dx1..dxn`, one row per snapshot,
/// 17 significant digits (round-trips 64-bit floats).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// P as a row-major numeric array plus its dimension.
nlohmann::json quadratic_form_to_json(const QuadraticForm& P);
QuadraticForm quadratic_form_from_json(const nlohmann::json& j);

/// iterations, final_objective, converged, min_eigenvalue, history
/// downsampled to at most 1000 entries.
nlohmann::json report_to_json(const SolveReport& report);

/// Diagnostics-only export of the factored problem (row-major G).
nlohmann::json problem_to_json(const ZubovProblem& prob);

nlohmann::json estimate_to_json(const StabilityEstimate& est);
StabilityEstimate estimate_from_json(const nlohmann::json& j);

/// Grid CSV: columns x1..xn, converged(0/1).
void write_roa_grid_csv(const std::filesystem::path& path, const ROAGrid& grid);

/// 720 boundary points of {x' P_sub x = c} on the (i, j) coordinate plane.
void write_ellipse_csv(const std::filesystem::path& path, const QuadraticForm& P, double c,
                       int coord_i, int coord_j);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

void write_subsystem_csv(const std::filesystem::path& path,
                         const std::vector<CStarResult>& per_plane);

}  // namespace lyapinf
