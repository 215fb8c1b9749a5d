#include "lyapinf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lyapinf/errors.hpp"

namespace lyapinf {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  const int n = traj.dim();
  out << "t";
  for (int d = 1; d <= n; ++d) out << ",x" << d;
  for (int d = 1; d <= n; ++d) out << ",dx" << d;
  out << "\n";
  for (Eigen::Index i = 0; i < traj.count(); ++i) {
    out << fmt_double(traj.times[i]);
    for (int d = 0; d < n; ++d) out << "," << fmt_double(traj.states(d, i));
    for (int d = 0; d < n; ++d) out << "," << fmt_double(traj.derivs(d, i));
    out << "\n";
  }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open for reading: " + path.string());

  std::string header;
  if (!std::getline(in, header)) throw data_error("empty CSV: " + path.string());
  // Columns: t, x1..xn, dx1..dxn -> n from the column count.
  const auto columns = static_cast<int>(std::count(header.begin(), header.end(), ',')) + 1;
  if (columns < 3 || (columns - 1) % 2 != 0) {
    throw data_error("snapshot CSV must have columns t,x1..xn,dx1..dxn: " + path.string());
  }
  const int n = (columns - 1) / 2;

  std::vector<double> times;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int col = 0;
    while (std::getline(row, cell, ',')) {
      const double v = std::strtod(cell.c_str(), nullptr);
      if (col == 0) times.push_back(v); else values.push_back(v);
      ++col;
    }
    if (col != columns) throw data_error("ragged CSV row in " + path.string());
  }

  Trajectory traj;
  const auto count = static_cast<Eigen::Index>(times.size());
  traj.times = std::move(times);
  traj.states.resize(n, count);
  traj.derivs.resize(n, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (int d = 0; d < n; ++d) {
      traj.states(d, i) = values[i * 2 * n + d];
      traj.derivs(d, i) = values[i * 2 * n + n + d];
    }
  }
  return traj;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open for reading: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw data_error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

nlohmann::json quadratic_form_to_json(const QuadraticForm& P) {
  const int n = P.dim();
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) entries.push_back(P.mat()(i, j));
  }
  return {{"dim", n}, {"P", entries}};
}

QuadraticForm quadratic_form_from_json(const nlohmann::json& j) {
  const int n = j.at("dim").get<int>();
  const auto entries = j.at("P").get<std::vector<double>>();
  if (static_cast<int>(entries.size()) != n * n) throw data_error("P array size mismatch");
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) M(i, k) = entries[static_cast<std::size_t>(i) * n + k];
  }
  return QuadraticForm(M);
}

nlohmann::json report_to_json(const SolveReport& report) {
  std::vector<double> history;
  const std::size_t len = report.objective_history.size();
  if (len <= 1000) {
    history = report.objective_history;
  } else {
    const std::size_t stride = (len + 999) / 1000;
    for (std::size_t i = 0; i < len; i += stride) history.push_back(report.objective_history[i]);
    if (history.back() != report.objective_history.back()) {
      history.push_back(report.objective_history.back());
    }
  }
  return {{"iterations", report.iterations},
          {"final_objective", report.final_objective},
          {"converged", report.converged},
          {"stagnated", report.stagnated},
          {"min_eigenvalue", report.min_eigenvalue},
          {"objective_history", history}};
}

nlohmann::json problem_to_json(const ZubovProblem& prob) {
  std::vector<double> G;
  G.reserve(static_cast<std::size_t>(prob.G.size()));
  for (Eigen::Index i = 0; i < prob.G.rows(); ++i) {
    for (Eigen::Index j = 0; j < prob.G.cols(); ++j) G.push_back(prob.G(i, j));
  }
  return {{"dim", prob.dim()},
          {"snapshot_count", prob.snapshot_count},
          {"G", G},
          {"g", std::vector<double>(prob.g.begin(), prob.g.end())},
          {"c0", prob.c0}};
}

nlohmann::json estimate_to_json(const StabilityEstimate& est) {
  nlohmann::json j = quadratic_form_to_json(est.P);
  j["gamma"] = est.gamma;
  j["c_star"] = est.c_star;
  j["volume"] = est.volume;
  j["violations_found"] = est.violations_found;
  j["capped_by_region"] = est.capped_by_region;
  j["containment_fraction"] = nullptr;  // filled by validation
  return j;
}

StabilityEstimate estimate_from_json(const nlohmann::json& j) {
  StabilityEstimate est;
  est.P = quadratic_form_from_json(j);
  est.gamma = j.at("gamma").get<double>();
  est.c_star = j.at("c_star").get<double>();
  est.volume = j.at("volume").get<double>();
  est.violations_found = j.at("violations_found").get<bool>();
  est.capped_by_region = j.at("capped_by_region").get<bool>();
  return est;
}

void write_roa_grid_csv(const std::filesystem::path& path, const ROAGrid& grid) {
  std::ofstream out = open_out(path);
  const int n = grid.region.dim();
  for (int d = 1; d <= n; ++d) out << "x" << d << ",";
  out << "converged\n";
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const Eigen::VectorXd x = grid.node(i);
    for (int d = 0; d < n; ++d) out << fmt_double(x(d)) << ",";
    out << static_cast<int>(grid.converged[i]) << "\n";
  }
}

void write_ellipse_csv(const std::filesystem::path& path, const QuadraticForm& P, double c,
                       int coord_i, int coord_j) {
  // Plane slice: off-plane coordinates at zero leave the 2x2 sub-block form.
  Eigen::Matrix2d sub;
  sub << P.mat()(coord_i, coord_i), P.mat()(coord_i, coord_j),
         P.mat()(coord_j, coord_i), P.mat()(coord_j, coord_j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sub);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw numeric_error("write_ellipse_csv: plane sub-block not positive definite");
  }
  const Eigen::Matrix2d inv_sqrt = es.eigenvectors() *
                                   es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().transpose();
  std::ofstream out = open_out(path);
  out << "x" << coord_i + 1 << ",x" << coord_j + 1 << "\n";
  constexpr int kPoints = 720;
  for (int k = 0; k < kPoints; ++k) {
    const double theta = 2.0 * M_PI * k / kPoints;
    const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
    const Eigen::Vector2d p = std::sqrt(c) * (inv_sqrt * u);
    out << fmt_double(p(0)) << "," << fmt_double(p(1)) << "\n";
  }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out = open_out(path);
  out << "gamma,objective,c_star,volume,converged\n";
  for (const auto& r : rows) {
    out << fmt_double(r.gamma) << "," << fmt_double(r.objective) << "," << fmt_double(r.c_star)
        << "," << fmt_double(r.volume) << "," << (r.converged ? 1 : 0) << "\n";
  }
}

void write_subsystem_csv(const std::filesystem::path& path,
                         const std::vector<CStarResult>& per_plane) {
  std::ofstream out = open_out(path);
  out << "subsystem,c_star,violations_found,capped_by_region\n";
  for (std::size_t i = 0; i < per_plane.size(); ++i) {
    out << i + 1 << "," << fmt_double(per_plane[i].c_star) << ","
        << (per_plane[i].violations_found ? 1 : 0) << ","
        << (per_plane[i].capped_by_region ? 1 : 0) << "\n";
  }
}

}  // namespace lyapinf
