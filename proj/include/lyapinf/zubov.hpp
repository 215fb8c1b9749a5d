#pragma once

#include <Eigen/Dense>

#include "lyapinf/data.hpp"

namespace lyapinf {

/// Row-major flatten of a square matrix; inverse of unflatten.
Eigen::VectorXd flatten(const Eigen::MatrixXd& M);

/// Reshapes a length-n^2 vector into a square matrix (row-major).
Eigen::MatrixXd unflatten(const Eigen::VectorXd& v);

/// Symmetric matrix housing a quadratic form x^T M x. Stored exactly
/// symmetric; construction symmetrizes its argument.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  explicit QuadraticForm(const Eigen::MatrixXd& m);

  static QuadraticForm scaled_identity(int n, double scale);
  static QuadraticForm from_vec(const Eigen::VectorXd& p);

  const Eigen::MatrixXd& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double value(const Eigen::VectorXd& x) const { return x.dot(mat_ * x); }
  Eigen::VectorXd vec() const { return flatten(mat_); }
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXd mat_;
};

/// Factored least-squares data of the Zubov-residual objective:
/// J(p) = p^T G p + 2 g^T p + c0, the mean squared residual over snapshots.
struct ZubovProblem {
  Eigen::MatrixXd G;  // n^2 x n^2, symmetric PSD
  Eigen::VectorXd g;  // n^2
  double c0 = 0.0;
  Eigen::Index snapshot_count = 0;

  int dim() const;  // state dimension n
};

/// Zubov-equation residual xdot'Px + x'Pxdot + x'Qx - (x'Qx)(x'Px).
double residual(const QuadraticForm& P, const QuadraticForm& Q, const Eigen::VectorXd& x,
                const Eigen::VectorXd& xdot);

/// Builds (G, g, c0) from per-snapshot factors
///   a_i = x^(*) - (x'Qx) x^(2),   b_i = x'Qx,
/// so that residual_i = p'a_i + b_i. The quartic Kronecker term is folded in
/// algebraically; nothing of size n^4 is ever materialized. Accumulation uses
/// fixed-shape pairwise block summation, so results do not depend on the
/// worker count.
ZubovProblem assemble(const SnapshotSet& data, const QuadraticForm& Q);

/// Mean squared residual at P.
double objective(const ZubovProblem& prob, const QuadraticForm& P);

/// Analytic gradient 2(Gp + g) with p = vec(P). The matricized gradient
/// should be symmetrized before use; the solver does.
Eigen::VectorXd gradient(const ZubovProblem& prob, const QuadraticForm& P);

}  // namespace lyapinf
