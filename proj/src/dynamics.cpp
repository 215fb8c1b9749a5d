#include "lyapinf/dynamics.hpp"

#include <cmath>

#include "lyapinf/errors.hpp"
#include "lyapinf/rng.hpp"

namespace lyapinf {

namespace {

// Four-stage update into `out`; k1..k4 are caller scratch so the hot loop in
// simulate() does not allocate. Returns false on any non-finite stage.
bool rk4_step_into(const RhsFn& f, const Eigen::VectorXd& x, double dt,
                   Eigen::VectorXd& k1, Eigen::VectorXd& k2, Eigen::VectorXd& k3,
                   Eigen::VectorXd& k4, Eigen::VectorXd& scratch, Eigen::VectorXd& out) {
  f(x, k1);
  if (!k1.allFinite()) return false;
  scratch = x + (0.5 * dt) * k1;
  f(scratch, k2);
  if (!k2.allFinite()) return false;
  scratch = x + (0.5 * dt) * k2;
  f(scratch, k3);
  if (!k3.allFinite()) return false;
  scratch = x + dt * k3;
  f(scratch, k4);
  if (!k4.allFinite()) return false;
  out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return out.allFinite();
}

}  // namespace

std::optional<Eigen::VectorXd> rk4_step(const RhsFn& f, const Eigen::VectorXd& x, double dt) {
  if (dt <= 0.0) throw config_error("rk4_step: dt must be positive");
  const auto n = x.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), scratch(n), out(n);
  if (!x.allFinite() || !rk4_step_into(f, x, dt, k1, k2, k3, k4, scratch, out)) {
    return std::nullopt;
  }
  return out;
}

Trajectory simulate(const SystemModel& model, const Eigen::VectorXd& x0, double dt, double tf) {
  if (dt <= 0.0 || tf < dt) throw config_error("simulate: need dt > 0 and tf >= dt");
  if (!x0.allFinite()) throw data_error("simulate: non-finite initial state");

  const auto n = x0.size();
  // floor with a small slack so tf/dt values like 5/0.01 land on the grid.
  const auto steps = static_cast<Eigen::Index>(std::floor(tf / dt + 1e-9));
  const Eigen::Index capacity = steps + 1;

  Trajectory traj;
  traj.states.resize(n, capacity);
  traj.derivs.resize(n, capacity);
  traj.times.reserve(capacity);

  Eigen::VectorXd x = x0, k1(n), k2(n), k3(n), k4(n), scratch(n), next(n);
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i <= steps; ++i) {
    traj.states.col(kept) = x;
    traj.times.push_back(static_cast<double>(i) * dt);
    model.rhs(x, k1);  // k1 doubles as the stored derivative
    traj.derivs.col(kept) = k1;
    ++kept;
    if (i == steps) break;
    scratch = x + (0.5 * dt) * k1;
    model.rhs(scratch, k2);
    scratch = x + (0.5 * dt) * k2;
    model.rhs(scratch, k3);
    scratch = x + dt * k3;
    model.rhs(scratch, k4);
    next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!k2.allFinite() || !k3.allFinite() || !k4.allFinite() || !next.allFinite()) break;
    x = next;
  }
  traj.states.conservativeResize(n, kept);
  traj.derivs.conservativeResize(n, kept);
  return traj;
}

NetworkedVdpParams NetworkedVdpParams::sample(std::uint64_t seed) {
  constexpr int kSubsystems = 10;
  NetworkedVdpParams params;
  params.seed = seed;
  params.mu.resize(kSubsystems);
  params.zeta = Eigen::MatrixXd::Zero(kSubsystems, kSubsystems);

  Rng rng(fork_seed(seed, 0x6e76647 /* "nvdp" stream */));
  for (int i = 0; i < kSubsystems; ++i) params.mu(i) = rng.uniform(0.5, 2.5);
  for (int i = 0; i < kSubsystems; ++i) {
    for (int j = 0; j < kSubsystems; ++j) {
      if (i == j) continue;
      const bool connected = rng.uniform01() >= 0.5;
      if (connected) params.zeta(i, j) = rng.uniform(-0.1, 0.1);
    }
  }
  return params;
}

SystemModel benchmark_model(const std::string& name, std::uint64_t seed) {
  SystemModel model;
  model.name = name;
  if (name == "quadratic2d") {
    model.dim = 2;
    model.rhs = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx(0) = -2.0 * x(0) + x(0) * x(1);
      dx(1) = -x(1) + x(0) * x(1);
    };
  } else if (name == "vanderpol") {
    model.dim = 2;
    const double mu = 1.0;
    model.rhs = [mu](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx(0) = -x(1);
      dx(1) = x(0) - mu * (1.0 - x(0) * x(0)) * x(1);
    };
  } else if (name == "pendulum") {
    model.dim = 2;
    model.rhs = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx(0) = x(1);
      dx(1) = -std::sin(x(0)) - 0.5 * x(1);
    };
  } else if (name == "trigexp") {
    model.dim = 2;
    model.rhs = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx(0) = -x(0) + x(1) + 0.5 * (std::exp(x(0)) - 1.0);
      dx(1) = -x(0) - x(1) + x(0) * x(1) + x(0) * std::cos(x(0));
    };
  } else if (name == "cubic3d") {
    model.dim = 3;
    model.rhs = [](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      dx(0) = -x(0) + x(1) * x(2) * x(2);
      dx(1) = -x(1) - x(0) * x(1);
      dx(2) = -x(2);
    };
  } else if (name == "networked_vdp") {
    model.dim = 20;
    const NetworkedVdpParams params = NetworkedVdpParams::sample(seed);
    model.rhs = [params](const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      // Subsystem i occupies coordinates (2i, 2i+1).
      for (int i = 0; i < 10; ++i) {
        const double xi1 = x(2 * i);
        const double xi2 = x(2 * i + 1);
        double coupling = 0.0;
        for (int j = 0; j < 10; ++j) {
          if (j == i) continue;
          coupling += params.zeta(i, j) * xi1 * x(2 * j + 1);
        }
        dx(2 * i) = -xi2;
        dx(2 * i + 1) = xi1 - params.mu(i) * (1.0 - xi1 * xi1) * xi2 + coupling;
      }
    };
  } else {
    throw config_error("unknown benchmark system: " + name);
  }
  return model;
}

namespace {

std::vector<Eigen::VectorXd> circle_points(double r, int count) {
  std::vector<Eigen::VectorXd> points;
  points.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * M_PI * k / count;
    Eigen::VectorXd x(2);
    x << r * std::cos(theta), r * std::sin(theta);
    points.push_back(std::move(x));
  }
  return points;
}

// Fibonacci lattice: deterministic, near-uniform placement on the sphere.
std::vector<Eigen::VectorXd> sphere_points(double r, int count) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::VectorXd> points;
  points.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * M_PI * k / golden;
    Eigen::VectorXd x(3);
    x << r * rho * std::cos(phi), r * rho * std::sin(phi), r * z;
    points.push_back(std::move(x));
  }
  return points;
}

// Equal arc-length spacing along the 2D box perimeter, starting at the
// (lower, lower) corner and proceeding counterclockwise.
std::vector<Eigen::VectorXd> box_boundary_points(const Region& region, int count) {
  const double x0 = region.lower(0), x1 = region.upper(0);
  const double y0 = region.lower(1), y1 = region.upper(1);
  const double w = x1 - x0, h = y1 - y0;
  const double perimeter = 2.0 * (w + h);
  std::vector<Eigen::VectorXd> points;
  points.reserve(count);
  for (int k = 0; k < count; ++k) {
    double s = perimeter * k / count;
    Eigen::VectorXd p(2);
    if (s < w) {
      p << x0 + s, y0;
    } else if ((s -= w) < h) {
      p << x1, y0 + s;
    } else if ((s -= h) < w) {
      p << x1 - s, y1;
    } else {
      s -= w;
      p << x0, y1 - s;
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace

std::vector<Eigen::VectorXd> initial_conditions(const IcScheme& scheme, int count,
                                                const Region& region, std::uint64_t seed) {
  if (count < 1) throw config_error("initial_conditions: count must be >= 1");
  const int n = region.dim();
  std::vector<Eigen::VectorXd> points;

  switch (scheme.kind) {
    case IcScheme::Kind::Circle: {
      if (n != 2) throw config_error("circle scheme requires a 2D region");
      points = circle_points(scheme.radius, count);
      break;
    }
    case IcScheme::Kind::Sphere: {
      if (n != 3) throw config_error("sphere scheme requires a 3D region");
      points = sphere_points(scheme.radius, count);
      break;
    }
    case IcScheme::Kind::BoxBoundary: {
      if (n != 2) throw config_error("box_boundary scheme requires a 2D region");
      points = box_boundary_points(region, count);
      break;
    }
    case IcScheme::Kind::Uniform: {
      Rng rng(fork_seed(seed, 0x696373 /* "ics" stream */));
      points.reserve(count);
      for (int k = 0; k < count; ++k) {
        Eigen::VectorXd x(n);
        for (int d = 0; d < n; ++d) x(d) = rng.uniform(region.lower(d), region.upper(d));
        points.push_back(std::move(x));
      }
      break;
    }
    case IcScheme::Kind::PerSubsystemCircle: {
      if (n % 2 != 0) throw config_error("per_subsystem_circle requires an even dimension");
      Rng rng(fork_seed(seed, 0x696373));
      points.reserve(count);
      for (int k = 0; k < count; ++k) {
        Eigen::VectorXd x(n);
        for (int sub = 0; sub < n / 2; ++sub) {
          const double theta = rng.uniform(0.0, 2.0 * M_PI);
          x(2 * sub) = scheme.radius * std::cos(theta);
          x(2 * sub + 1) = scheme.radius * std::sin(theta);
        }
        points.push_back(std::move(x));
      }
      break;
    }
    case IcScheme::Kind::SubsystemCircleSolo: {
      // One subsystem excited per IC: count/(n/2) equally spaced points on
      // that subsystem's circle, every other coordinate zero. Keeps the
      // training data free of cross-subsystem correlations.
      if (n % 2 != 0) throw config_error("subsystem_circle_solo requires an even dimension");
      const int subsystems = n / 2;
      if (count % subsystems != 0) {
        throw config_error("subsystem_circle_solo: count must be a multiple of n/2");
      }
      const int per_sub = count / subsystems;
      points.reserve(count);
      for (int sub = 0; sub < subsystems; ++sub) {
        for (int k = 0; k < per_sub; ++k) {
          const double theta = 2.0 * M_PI * k / per_sub;
          Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
          x(2 * sub) = scheme.radius * std::cos(theta);
          x(2 * sub + 1) = scheme.radius * std::sin(theta);
          points.push_back(std::move(x));
        }
      }
      break;
    }
  }

  for (const auto& p : points) {
    if (!region.contains(p)) {
      throw config_error("initial_conditions: placement falls outside the region");
    }
  }
  return points;
}

}  // namespace lyapinf
