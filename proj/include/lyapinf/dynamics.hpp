#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyapinf/data.hpp"

namespace lyapinf {

/// Black-box right-hand side evaluator for an autonomous system xdot = f(x).
/// Evaluators are pure and stateless after construction.
struct SystemModel {
  std::string name;
  int dim = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> rhs;

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(dim);
    rhs(x, out);
    return out;
  }
};

/// Parameters of the 20D networked Van der Pol benchmark, drawn
/// deterministically from a seed: mu_i uniform on [0.5, 2.5]; zeta_ij zero
/// with probability 1/2, otherwise uniform on [-0.1, 0.1]; zero diagonal.
struct NetworkedVdpParams {
  Eigen::VectorXd mu;     // 10 damping parameters
  Eigen::MatrixXd zeta;   // 10x10 coupling, zero diagonal
  std::uint64_t seed = 0;

  static NetworkedVdpParams sample(std::uint64_t seed);
};

/// States and solver-extracted derivatives at t = 0, dt, 2dt, ...
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // n x N
  Eigen::MatrixXd derivs;  // n x N, derivs.col(i) = rhs(states.col(i))

  Eigen::Index count() const { return states.cols(); }
  int dim() const { return static_cast<int>(states.rows()); }
};

using RhsFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// One classical fourth-order Runge-Kutta step. Returns nullopt when any
/// stage or the update is non-finite (trajectory-divergence signal).
std::optional<Eigen::VectorXd> rk4_step(const RhsFn& f, const Eigen::VectorXd& x, double dt);

/// Fixed-step RK4 integration over [0, tf], recording the state and the exact
/// rhs evaluation at every step. Truncates at the first non-finite state.
/// Throws data_error if x0 itself is non-finite.
Trajectory simulate(const SystemModel& model, const Eigen::VectorXd& x0, double dt, double tf);

/// The six benchmark systems. `seed` only affects networked_vdp.
/// Throws config_error for an unknown name.
SystemModel benchmark_model(const std::string& name, std::uint64_t seed = 0);

/// Initial-condition placement schemes.
struct IcScheme {
  enum class Kind {
    Circle,
    Sphere,
    BoxBoundary,
    Uniform,
    PerSubsystemCircle,
    SubsystemCircleSolo,
  };
  Kind kind = Kind::Uniform;
  double radius = 0.0;

  static IcScheme circle(double r) { return {Kind::Circle, r}; }
  static IcScheme sphere(double r) { return {Kind::Sphere, r}; }
  static IcScheme box_boundary() { return {Kind::BoxBoundary, 0.0}; }
  static IcScheme uniform() { return {Kind::Uniform, 0.0}; }
  static IcScheme per_subsystem_circle(double r) { return {Kind::PerSubsystemCircle, r}; }
  static IcScheme subsystem_circle_solo(double r) { return {Kind::SubsystemCircleSolo, r}; }
};

/// Generates `count` initial conditions inside `region`. Deterministic given
/// the seed. Throws config_error when deterministic placements fall outside
/// the region or the scheme does not fit the region dimension.
std::vector<Eigen::VectorXd> initial_conditions(const IcScheme& scheme, int count,
                                                const Region& region, std::uint64_t seed);

}  // namespace lyapinf
