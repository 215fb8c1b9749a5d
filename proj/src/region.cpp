#include "lyapinf/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lyapinf/errors.hpp"
#include "lyapinf/parallel.hpp"
#include "lyapinf/rng.hpp"

namespace lyapinf {

namespace {

constexpr Eigen::Index kSampleChunk = 8192;
constexpr std::uint64_t kInteriorStream = 0;
constexpr std::uint64_t kBoundaryStream = 1u << 30;

// Divergence cutoff for the forward-simulation oracles; the benchmark fields
// blow up far past this, so states beyond it never return to the origin ball.
constexpr double kDivergenceNorm = 1e12;

void require_strictly_pd(const QuadraticForm& P) {
  if (P.min_eigenvalue() <= 0.0) throw numeric_error("P must be strictly positive definite");
}

// Forward-simulates x for `steps` RK4 steps; returns true when the trajectory
// stayed finite and ended inside the conv_tol ball.
bool converges_to_origin(const SystemModel& model, Eigen::VectorXd x, double dt,
                         Eigen::Index steps, double conv_tol) {
  const auto n = x.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), scratch(n), next(n);
  for (Eigen::Index s = 0; s < steps; ++s) {
    model.rhs(x, k1);
    scratch = x + (0.5 * dt) * k1;
    model.rhs(scratch, k2);
    scratch = x + (0.5 * dt) * k2;
    model.rhs(scratch, k3);
    scratch = x + dt * k3;
    model.rhs(scratch, k4);
    next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite() || next.norm() > kDivergenceNorm) return false;
    x = next;
  }
  return x.norm() < conv_tol;
}

Eigen::Index step_count(double t_final, double dt) {
  return static_cast<Eigen::Index>(std::floor(t_final / dt + 1e-9));
}

// Minimum of V over violating samples (vdot >= 0) drawn uniformly in the box
// spanned by `coords` (other coordinates zero). Chunked with per-chunk seeds:
// the sample sequence is a fixed function of (seed, index), so results do not
// depend on the worker count and sample prefixes are stable when num_samples
// grows.
struct ViolationScan {
  bool found = false;
  double min_v = std::numeric_limits<double>::infinity();
};

ViolationScan scan_violations(const QuadraticForm& P, const SystemModel& model,
                              const Region& region, const std::vector<int>& coords,
                              const MCConfig& mc) {
  const int n = region.dim();
  const Eigen::Index num_chunks = (mc.num_samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<ViolationScan> partials(static_cast<std::size_t>(num_chunks));

  parallel_for(static_cast<std::size_t>(num_chunks), [&](std::size_t c) {
    Rng rng(fork_seed(mc.seed, kInteriorStream + c));
    const Eigen::Index begin = static_cast<Eigen::Index>(c) * kSampleChunk;
    const Eigen::Index m = std::min(kSampleChunk, mc.num_samples - begin);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd fx(n);
    ViolationScan local;
    for (Eigen::Index j = 0; j < m; ++j) {
      for (int d : coords) x(d) = rng.uniform(region.lower(d), region.upper(d));
      if (x.norm() < mc.origin_exclusion) continue;
      model.rhs(x, fx);
      const double vd = 2.0 * x.dot(P.mat() * fx);
      if (vd >= 0.0) {
        local.found = true;
        local.min_v = std::min(local.min_v, P.value(x));
      }
    }
    partials[c] = local;
  });

  ViolationScan total;
  for (const auto& part : partials) {
    if (part.found) {
      total.found = true;
      total.min_v = std::min(total.min_v, part.min_v);
    }
  }
  return total;
}

// Minimum of V over seeded samples of the boundary of the box restricted to
// `coords` (faces weighted by their measure), all other coordinates zero.
double boundary_min_v(const QuadraticForm& P, const Region& region,
                      const std::vector<int>& coords, const MCConfig& mc) {
  const int n = region.dim();
  const int k = static_cast<int>(coords.size());

  // Face weights: each of the 2k faces has measure prod_{i != d} width_i.
  std::vector<double> cumulative(k);
  double total = 0.0;
  for (int d = 0; d < k; ++d) {
    double area = 1.0;
    for (int i = 0; i < k; ++i) {
      if (i != d) area *= region.upper(coords[i]) - region.lower(coords[i]);
    }
    total += 2.0 * area;
    cumulative[d] = total;
  }

  const Eigen::Index num_chunks = (mc.boundary_samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<double> partial_min(static_cast<std::size_t>(num_chunks),
                                  std::numeric_limits<double>::infinity());

  parallel_for(static_cast<std::size_t>(num_chunks), [&](std::size_t c) {
    Rng rng(fork_seed(mc.seed, kBoundaryStream + c));
    const Eigen::Index begin = static_cast<Eigen::Index>(c) * kSampleChunk;
    const Eigen::Index m = std::min(kSampleChunk, mc.boundary_samples - begin);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    double local = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j) {
      const double pick = rng.uniform(0.0, total);
      int face = 0;
      while (face + 1 < k && pick > cumulative[face]) ++face;
      const bool high_side = rng.uniform01() < 0.5;
      for (int i = 0; i < k; ++i) {
        const int d = coords[i];
        x(d) = i == face ? (high_side ? region.upper(d) : region.lower(d))
                         : rng.uniform(region.lower(d), region.upper(d));
      }
      local = std::min(local, P.value(x));
    }
    partial_min[c] = local;
  });

  return *std::min_element(partial_min.begin(), partial_min.end());
}

CStarResult estimate_on_coords(const QuadraticForm& P, const SystemModel& model,
                               const Region& region, const std::vector<int>& coords,
                               const MCConfig& mc) {
  if (mc.num_samples < 1000) throw config_error("estimate_c_star: num_samples must be >= 1000");
  if (mc.origin_exclusion <= 0.0) throw config_error("estimate_c_star: origin_exclusion must be > 0");
  require_strictly_pd(P);

  CStarResult result;
  const ViolationScan scan = scan_violations(P, model, region, coords, mc);
  if (scan.found) {
    // Shrink keeps the sublevel inequality strict against floating-point ties.
    result.c_star = (1.0 - 1e-6) * scan.min_v;
    result.violations_found = true;
  } else {
    result.c_star = boundary_min_v(P, region, coords, mc);
    result.capped_by_region = true;
  }
  return result;
}

}  // namespace

double vdot(const QuadraticForm& P, const Eigen::VectorXd& x, const SystemModel& model) {
  Eigen::VectorXd fx(x.size());
  model.rhs(x, fx);
  return 2.0 * x.dot(P.mat() * fx);
}

CStarResult estimate_c_star(const QuadraticForm& P, const SystemModel& model,
                            const Region& region, const MCConfig& mc) {
  std::vector<int> coords(region.dim());
  std::iota(coords.begin(), coords.end(), 0);
  return estimate_on_coords(P, model, region, coords, mc);
}

SubsystemCStar estimate_c_star_subsystems(const QuadraticForm& P, const SystemModel& model,
                                          const Region& region,
                                          const std::vector<std::pair<int, int>>& planes,
                                          const MCConfig& mc) {
  if (planes.empty()) throw config_error("estimate_c_star_subsystems: no planes given");
  std::vector<bool> seen(region.dim(), false);
  for (const auto& [a, b] : planes) {
    if (a < 0 || b < 0 || a >= region.dim() || b >= region.dim() || a == b || seen[a] || seen[b]) {
      throw config_error("estimate_c_star_subsystems: planes must be disjoint coordinate pairs");
    }
    seen[a] = seen[b] = true;
  }

  SubsystemCStar out;
  out.c_star = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < planes.size(); ++idx) {
    MCConfig plane_mc = mc;
    // Plane 0 keeps the parent seed so a single all-coordinate plane
    // degenerates exactly to estimate_c_star.
    if (idx > 0) plane_mc.seed = fork_seed(mc.seed, 0x706c616e /* plane salt */ + idx);
    const std::vector<int> coords = {planes[idx].first, planes[idx].second};
    const CStarResult r = estimate_on_coords(P, model, region, coords, plane_mc);
    out.per_plane.push_back(r);
    if (r.c_star < out.c_star) {
      out.c_star = r.c_star;
      out.violations_found = r.violations_found;
      out.capped_by_region = r.capped_by_region;
    }
  }
  return out;
}

double ellipsoid_volume(const QuadraticForm& P, double c) {
  if (c <= 0.0) throw numeric_error("ellipsoid_volume: c must be positive");
  const int n = P.dim();
  const double det = P.mat().determinant();
  if (det <= 0.0) throw numeric_error("ellipsoid_volume: det P must be positive");
  const double unit_ball = std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  return unit_ball * std::pow(c, 0.5 * n) / std::sqrt(det);
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  grid.reserve(20);
  for (int k = 0; k < 20; ++k) {
    grid.push_back(std::pow(10.0, -3.0 + 4.0 * k / 19.0));
  }
  return grid;
}

SweepResult sweep_gamma(const SnapshotSet& data, const SystemModel& model, const Region& region,
                        const std::vector<double>& gammas, const SolverConfig& solver_cfg,
                        const MCConfig& mc, const std::vector<std::pair<int, int>>& planes) {
  if (gammas.empty()) throw config_error("sweep_gamma: empty gamma list");

  SweepResult result;
  bool have_best = false;
  for (double gamma : gammas) {
    if (!(gamma > 0.0)) throw config_error("sweep_gamma: gamma must be positive");
    const QuadraticForm Q = QuadraticForm::scaled_identity(data.dim(), gamma);
    const ZubovProblem prob = assemble(data, Q);
    auto [P, report] = solve(prob, solver_cfg);

    CStarResult cs;
    if (planes.empty()) {
      cs = estimate_c_star(P, model, region, mc);
    } else {
      const SubsystemCStar sub = estimate_c_star_subsystems(P, model, region, planes, mc);
      cs.c_star = sub.c_star;
      cs.violations_found = sub.violations_found;
      cs.capped_by_region = sub.capped_by_region;
    }
    const double volume = ellipsoid_volume(P, cs.c_star);

    result.rows.push_back({gamma, report.final_objective, cs.c_star, volume, report.converged});
    const bool better = !have_best || volume > result.best.volume ||
                        (volume == result.best.volume && gamma < result.best.gamma);
    if (better) {
      result.best = {P, gamma, cs.c_star, volume, cs.violations_found, cs.capped_by_region};
      have_best = true;
    }
  }
  return result;
}

Eigen::VectorXd ROAGrid::node(std::size_t index) const {
  const int n = region.dim();
  Eigen::VectorXd x(n);
  std::size_t rest = index;
  for (int d = n - 1; d >= 0; --d) {
    const std::size_t i = rest % resolution;
    rest /= resolution;
    x(d) = region.lower(d) + (region.upper(d) - region.lower(d)) * static_cast<double>(i) /
                                 (resolution - 1);
  }
  return x;
}

std::size_t ROAGrid::converged_count() const {
  return static_cast<std::size_t>(std::count(converged.begin(), converged.end(), std::uint8_t{1}));
}

ROAGrid true_roa_grid(const SystemModel& model, const Region& region, int resolution,
                      double t_final, double conv_tol, double dt) {
  if (region.dim() > 3) throw config_error("true_roa_grid: grid oracle only for n <= 3");
  if (resolution < 11) throw config_error("true_roa_grid: resolution must be >= 11");

  ROAGrid grid;
  grid.region = region;
  grid.resolution = resolution;
  grid.t_final = t_final;
  grid.conv_tol = conv_tol;

  std::size_t total = 1;
  for (int d = 0; d < region.dim(); ++d) total *= static_cast<std::size_t>(resolution);
  grid.converged.assign(total, 0);

  const Eigen::Index steps = step_count(t_final, dt);
  const std::size_t chunk = 1024;
  const std::size_t num_chunks = (total + chunk - 1) / chunk;
  parallel_for(num_chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(begin + chunk, total);
    for (std::size_t i = begin; i < end; ++i) {
      grid.converged[i] =
          converges_to_origin(model, grid.node(i), dt, steps, conv_tol) ? 1 : 0;
    }
  });
  return grid;
}

double validate_containment(const StabilityEstimate& est, const SystemModel& model,
                            Eigen::Index num_boundary, double t_final, double conv_tol,
                            std::uint64_t seed, double dt) {
  if (est.c_star <= 0.0) throw numeric_error("validate_containment: c_star must be positive");
  if (num_boundary < 1) throw config_error("validate_containment: need at least one sample");
  const int n = est.P.dim();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(est.P.mat());
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw numeric_error("validate_containment: P must be strictly positive definite");
  }
  const Eigen::MatrixXd inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  const double scale = std::sqrt(est.c_star);

  const Eigen::Index steps = step_count(t_final, dt);
  const Eigen::Index num_chunks = (num_boundary + kSampleChunk - 1) / kSampleChunk;
  std::vector<Eigen::Index> hits(static_cast<std::size_t>(num_chunks), 0);

  parallel_for(static_cast<std::size_t>(num_chunks), [&](std::size_t c) {
    Rng rng(fork_seed(seed, c));
    const Eigen::Index begin = static_cast<Eigen::Index>(c) * kSampleChunk;
    const Eigen::Index m = std::min(kSampleChunk, num_boundary - begin);
    Eigen::VectorXd u(n);
    Eigen::Index local = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      for (int d = 0; d < n; ++d) u(d) = rng.gaussian();
      const double norm = u.norm();
      if (norm < 1e-300) u.setUnit(0); else u /= norm;
      const Eigen::VectorXd x0 = scale * (inv_sqrt * u);
      if (converges_to_origin(model, x0, dt, steps, conv_tol)) ++local;
    }
    hits[c] = local;
  });

  Eigen::Index total = 0;
  for (Eigen::Index h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(num_boundary);
}

}  // namespace lyapinf
