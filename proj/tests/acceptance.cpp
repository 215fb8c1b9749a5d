// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lyapinf/config.hpp"
#include "lyapinf/io.hpp"
#include "lyapinf/pipeline.hpp"
#include "lyapinf/rng.hpp"
#include "oracles.hpp"

using namespace lyapinf;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// ---- shared benchmark pipeline products -------------------------------

struct BenchmarkRun {
  RunConfig cfg;
  SystemModel model;
  StabilityEstimate estimate;
  std::vector<CStarResult> per_plane;
  double containment = 0.0;
  std::optional<ROAGrid> grid;
  double pipeline_seconds = 0.0;
};

const BenchmarkRun& run_benchmark(const std::string& name) {
  static std::map<std::string, BenchmarkRun> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;

  const auto start = Clock::now();
  BenchmarkRun run;
  run.cfg = benchmark_preset(name);
  finalize_seeds(run.cfg);
  run.model = benchmark_model(name, run.cfg.seed);

  const auto trajectories = simulate_trajectories(run.cfg, run.model);
  const SnapshotSet data = collect_snapshots(trajectories, run.cfg.region, false);
  const InferenceResult inferred = infer_lyapunov(data, run.cfg.gamma, run.cfg.solver);
  const RegionEstimate re = estimate_stability_region(inferred.P, run.cfg.gamma, run.model,
                                                      run.cfg);
  run.estimate = re.estimate;
  run.per_plane = re.per_plane;
  run.containment = validate_containment(
      run.estimate, run.model, run.cfg.validation.num_boundary, run.cfg.validation_t_final(),
      run.cfg.validation.conv_tol, run.cfg.validation.seed, run.cfg.validation.dt);
  if (run.cfg.dim() <= 3) {
    run.grid = true_roa_grid(run.model, run.cfg.region, run.cfg.roa_resolution(),
                             run.cfg.roa_t_final(), run.cfg.roa.conv_tol, run.cfg.roa.dt);
  }
  run.pipeline_seconds = seconds_since(start);
  return cache.emplace(name, std::move(run)).first->second;
}

double grid_cell_volume(const ROAGrid& grid) {
  double cell = 1.0;
  for (int d = 0; d < grid.region.dim(); ++d) {
    cell *= (grid.region.upper(d) - grid.region.lower(d)) / (grid.resolution - 1);
  }
  return cell;
}

std::size_t nodes_inside_ellipsoid_not_converged(const ROAGrid& grid,
                                                 const StabilityEstimate& est) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (est.P.value(grid.node(i)) <= est.c_star && !grid.converged[i]) ++bad;
  }
  return bad;
}

// ---- criteria ----------------------------------------------------------

void criterion_1_data_protocol() {
  const auto start = Clock::now();
  auto total_points = [](const std::string& name) {
    RunConfig cfg = benchmark_preset(name);
    finalize_seeds(cfg);
    const SystemModel model = benchmark_model(name, cfg.seed);
    Eigen::Index total = 0;
    for (const auto& traj : simulate_trajectories(cfg, model)) total += traj.count();
    return total;
  };
  const Eigen::Index vdp = total_points("vanderpol");
  const Eigen::Index net = total_points("networked_vdp");
  const double elapsed = seconds_since(start);
  std::ostringstream msg;
  msg << "data protocol: vanderpol " << vdp << "/5010, networked " << net << "/80080 snapshots ["
      << elapsed << " s]";
  report(1, vdp == 5010 && net == 80080 && elapsed < 10.0, msg.str());
}

void criterion_2_factored_objective() {
  const auto start = Clock::now();
  Rng rng(2025);
  double worst = 0.0;
  for (int set = 0; set < 50; ++set) {
    SnapshotSet s;
    s.states.resize(3, 200);
    s.derivs.resize(3, 200);
    for (int k = 0; k < 200; ++k) {
      for (int d = 0; d < 3; ++d) {
        s.states(d, k) = rng.uniform(-1.5, 1.5);
        s.derivs(d, k) = rng.uniform(-1.5, 1.5);
      }
    }
    const double gamma = rng.uniform(0.1, 2.0);
    const QuadraticForm Q = QuadraticForm::scaled_identity(3, gamma);
    const ZubovProblem prob = assemble(s, Q);
    const Eigen::MatrixXd Pm = oracles::random_symmetric(3, rng);

    // direct route: residuals in Kronecker form with x^(4) materialized
    double direct = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double r = oracles::kron4_residual(Pm, Q.mat(), s.states.col(k), s.derivs.col(k));
      direct += r * r;
    }
    direct /= 200.0;
    const double factored = objective(prob, QuadraticForm(Pm));
    worst = std::max(worst, std::abs(factored - direct) / std::max(std::abs(direct), 1e-300));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream msg;
  msg << "factored objective vs materialized x^(4): worst rel err " << worst << " (tol 1e-10) ["
      << elapsed << " s]";
  report(2, worst <= 1e-10 && elapsed < 5.0, msg.str());
}

void criterion_3_synthetic_recovery() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream msg;
  msg << "synthetic exact-Zubov recovery:";
  for (int n : {2, 3, 5}) {
    Rng rng(3000 + n);
    const Eigen::MatrixXd Pstar = oracles::random_spd(n, 1e-5, 1.0, rng);
    const auto data = oracles::make_exact_zubov_data(Pstar, 1.2, 10 * n * n + 100, rng);
    SnapshotSet s{data.states, data.derivs};
    const ZubovProblem prob = assemble(s, QuadraticForm::scaled_identity(n, 1.2));
    auto [P, rep] = solve(prob);
    const double rel = (P.mat() - Pstar).norm() / Pstar.norm();
    msg << " n=" << n << " rel " << rel << " obj " << rep.final_objective << ";";
    pass = pass && rel <= 1e-3 && rep.final_objective <= 1e-8;
  }
  const double elapsed = seconds_since(start);
  msg << " [" << elapsed << " s]";
  report(3, pass && elapsed < 30.0, msg.str());
}

void criterion_4_scalar_closed_form() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream msg;
  msg << "scalar Zubov closed form:";
  for (double gamma : {0.5, 1.0, 2.0}) {
    Rng rng(static_cast<std::uint64_t>(4000 + 10 * gamma));
    SnapshotSet s;
    s.states.resize(1, 500);
    s.derivs.resize(1, 500);
    for (int k = 0; k < 500; ++k) {
      const double x = rng.uniform(-0.1, 0.1);
      s.states(0, k) = x;
      s.derivs(0, k) = -x;
    }
    auto [P, rep] = solve(assemble(s, QuadraticForm::scaled_identity(1, gamma)));
    const double p = P.mat()(0, 0);
    const double rel = std::abs(p - gamma / 2.0) / (gamma / 2.0);
    msg << " gamma=" << gamma << " p=" << p << " rel " << rel << ";";
    pass = pass && rel <= 0.05;
  }
  const double elapsed = seconds_since(start);
  msg << " [" << elapsed << " s]";
  report(4, pass && elapsed < 5.0, msg.str());
}

void criterion_5_gradient() {
  Rng rng(5001);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SnapshotSet s;
    s.states.resize(2, 80);
    s.derivs.resize(2, 80);
    for (int k = 0; k < 80; ++k) {
      for (int d = 0; d < 2; ++d) {
        s.states(d, k) = rng.uniform(-1.0, 1.0);
        s.derivs(d, k) = rng.uniform(-1.0, 1.0);
      }
    }
    const ZubovProblem prob = assemble(s, QuadraticForm::scaled_identity(2, 0.8));
    const Eigen::MatrixXd Pm = oracles::random_symmetric(2, rng);
    const Eigen::VectorXd grad = gradient(prob, QuadraticForm(Pm));

    const double h = 1e-5;
    const Eigen::VectorXd p = flatten(Pm);
    Eigen::VectorXd fd(4);
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd hi = p, lo = p;
      hi(i) += h;
      lo(i) -= h;
      fd(i) = ((hi.dot(prob.G * hi) + 2.0 * prob.g.dot(hi)) -
               (lo.dot(prob.G * lo) + 2.0 * prob.g.dot(lo))) /
              (2.0 * h);
    }
    worst = std::max(worst, (grad - fd).norm() / std::max(fd.norm(), 1e-300));
  }
  std::ostringstream msg;
  msg << "analytic gradient vs central differences: worst rel err " << worst << " (tol 1e-6)";
  report(5, worst <= 1e-6, msg.str());
}

void criterion_6_projection() {
  Rng rng(6001);
  double worst_floor = 1e300, worst_idem = 0.0, worst_oracle = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const Eigen::MatrixXd S = 2.0 * oracles::random_symmetric(n, rng);
    const QuadraticForm proj = project_psd_floor(S, 1e-6);
    worst_floor = std::min(worst_floor, proj.min_eigenvalue());
    worst_idem = std::max(
        worst_idem, (project_psd_floor(proj.mat(), 1e-6).mat() - proj.mat()).cwiseAbs().maxCoeff());
    worst_oracle = std::max(
        worst_oracle, (proj.mat() - oracles::denman_beavers_project(S, 1e-6)).cwiseAbs().maxCoeff());
  }
  std::ostringstream msg;
  msg << "projection: min eig " << worst_floor << " (floor 1e-6-1e-12), idempotency "
      << worst_idem << " (tol 1e-12), oracle gap " << worst_oracle << " (tol 1e-8)";
  report(6, worst_floor >= 1e-6 - 1e-12 && worst_idem <= 1e-12 && worst_oracle <= 1e-8,
         msg.str());
}

void criterion_7_mc_calibration() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream msg;
  msg << "Monte-Carlo c* calibration:";
  for (double r : {0.5, 1.0, 2.0}) {
    SystemModel sys{"radial", 2, [r](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
                      dx = (x.squaredNorm() - r * r) * x;
                    }};
    MCConfig mc;
    mc.num_samples = 200000;
    mc.seed = static_cast<std::uint64_t>(7000 + 10 * r);
    const auto res = estimate_c_star(QuadraticForm::scaled_identity(2, 1.0), sys,
                                     Region::centered_box(2, 2.0 * r), mc);
    const double rel = std::abs(res.c_star - r * r) / (r * r);
    msg << " r=" << r << " c*=" << res.c_star << " rel " << rel << ";";
    pass = pass && rel <= 0.02 && res.violations_found;
  }
  const double elapsed = seconds_since(start);
  msg << " [" << elapsed << " s]";
  report(7, pass && elapsed < 20.0, msg.str());
}

const std::vector<std::string> kLowDim = {"quadratic2d", "vanderpol", "pendulum", "trigexp",
                                          "cubic3d"};

void criterion_8_containment() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream msg;
  msg << "containment:";
  for (const auto& name : kLowDim) {
    const BenchmarkRun& run = run_benchmark(name);
    const std::size_t bad = nodes_inside_ellipsoid_not_converged(*run.grid, run.estimate);
    msg << " " << name << " fraction " << run.containment << " bad-nodes " << bad << ";";
    pass = pass && run.containment == 1.0 && bad == 0;
  }
  const double elapsed = seconds_since(start);
  msg << " [" << elapsed << " s]";
  report(8, pass && elapsed < 600.0, msg.str());
}

void criterion_9_non_triviality() {
  bool pass = true;
  std::ostringstream msg;
  msg << "ellipsoid area >= 10% of true ROA:";
  for (const auto& name : {"quadratic2d", "vanderpol", "pendulum", "trigexp"}) {
    const BenchmarkRun& run = run_benchmark(name);
    const double roa_area = run.grid->converged_count() * grid_cell_volume(*run.grid);
    const double ratio = run.estimate.volume / roa_area;
    msg << " " << name << " " << ratio << ";";
    pass = pass && ratio >= 0.10;
  }
  report(9, pass, msg.str());
}

void criterion_10_networked() {
  const BenchmarkRun& run = run_benchmark("networked_vdp");
  bool planes_ok = run.per_plane.size() == 10;
  for (const auto& plane : run.per_plane) planes_ok = planes_ok && plane.c_star > 0.0;
  const double min_eig = run.estimate.P.min_eigenvalue();
  std::ostringstream msg;
  msg << "20D pipeline: " << run.pipeline_seconds << " s, min eig " << min_eig << ", c* "
      << run.estimate.c_star << ", containment " << run.containment << " at "
      << run.cfg.validation.num_boundary << " samples";
  report(10,
         run.pipeline_seconds < 900.0 && min_eig >= run.cfg.solver.eps_diag - 1e-12 &&
             planes_ok && run.containment == 1.0,
         msg.str());
}

void criterion_11_boundary_equilibrium() {
  const BenchmarkRun& run = run_benchmark("quadratic2d");
  Eigen::VectorXd eq(2);
  eq << 1.0, 2.0;
  const double v = run.estimate.P.value(eq);
  std::ostringstream msg;
  msg << "boundary equilibrium exclusion: V(1,2) = " << v << " vs c* = " << run.estimate.c_star;
  report(11, v > run.estimate.c_star, msg.str());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_12_determinism() {
  const std::string cli = LYAPINF_CLI_PATH;
  const fs::path a = fs::temp_directory_path() / "lyapinf_accept_det_a";
  const fs::path b = fs::temp_directory_path() / "lyapinf_accept_det_b";
  bool pass = true;
  for (const fs::path& dir : {a, b}) {
    fs::remove_all(dir);
    const std::string cmd = "\"" + cli + "\" benchmark vanderpol --seed 1 --out " + dir.string() +
                            " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    pass = pass && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
  }
  bool identical = true;
  for (const char* file : {"P.json", "estimate.json", "validation.json", "solve_report.json"}) {
    identical = identical && !slurp(a / file).empty() && slurp(a / file) == slurp(b / file);
  }
  std::ostringstream msg;
  msg << "determinism: repeated benchmark runs byte-identical = " << (identical ? "yes" : "no");
  report(12, pass && identical, msg.str());
}

}  // namespace

int main() {
  criterion_1_data_protocol();
  criterion_2_factored_objective();
  criterion_3_synthetic_recovery();
  criterion_4_scalar_closed_form();
  criterion_5_gradient();
  criterion_6_projection();
  criterion_7_mc_calibration();
  criterion_8_containment();
  criterion_9_non_triviality();
  criterion_10_networked();
  criterion_11_boundary_equilibrium();
  criterion_12_determinism();

  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures;
}
