#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lyapinf {

struct Trajectory;

/// Axis-aligned operating box. Must contain the origin strictly in its
/// interior; membership tests use the closed box.
struct Region {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Region() = default;
  Region(Eigen::VectorXd lo, Eigen::VectorXd hi);

  /// Symmetric box [-half, half]^n.
  static Region centered_box(int dim, double half_width);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& x) const;
};

/// Paired state/derivative snapshot columns restricted to an operating region.
struct SnapshotSet {
  Eigen::MatrixXd states;  // n x N
  Eigen::MatrixXd derivs;  // n x N

  Eigen::Index count() const { return states.cols(); }
  int dim() const { return static_cast<int>(states.rows()); }
};

/// First-order difference quotients: backward differences, with the first
/// column taken forward so the output keeps all N columns.
Eigen::MatrixXd finite_difference(const std::vector<double>& times,
                                  const Eigen::MatrixXd& states);

/// Keeps the (state, derivative) pairs whose state lies in the closed box and
/// whose columns are both finite; order is preserved.
SnapshotSet filter_to_region(const Trajectory& traj, const Region& region);

/// Column-wise concatenation. Throws data_error on an empty list or on a
/// dimension mismatch.
SnapshotSet concat(const std::vector<SnapshotSet>& sets);

/// k-fold Kronecker power x^(k), entry (i1,...,ik) = prod_j x_{i_j} in
/// lexicographic order.
Eigen::VectorXd kron_pow(const Eigen::VectorXd& x, int k);

/// xdot (x) x + x (x) xdot, the vectorization of xdot x^T + x xdot^T.
Eigen::VectorXd x_circledast(const Eigen::VectorXd& x, const Eigen::VectorXd& xdot);

}  // namespace lyapinf
