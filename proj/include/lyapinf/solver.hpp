#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lyapinf/zubov.hpp"

namespace lyapinf {

struct SolverConfig {
  int max_iters = 50000;
  double tol = 1e-10;          // relative objective-decrease tolerance
  double eps_diag = 1e-6;      // eigenvalue floor on P
  bool accel = true;           // Nesterov acceleration with restarts
  double step_safety = 1.0;    // multiplier on 1/L
};

struct SolveReport {
  int iterations = 0;
  double final_objective = 0.0;
  std::vector<double> objective_history;
  bool converged = false;
  bool stagnated = false;
  double min_eigenvalue = 0.0;
};

/// Frobenius projection onto {X symmetric : lambda_min(X) >= eps}:
/// symmetrize, eigendecompose, clamp eigenvalues below eps, reconstruct.
QuadraticForm project_psd_floor(const Eigen::MatrixXd& S, double eps);

/// lambda_max of a symmetric PSD matrix via power iteration (relative
/// tolerance 1e-8, deterministic seeded start vector).
double spectral_norm(const Eigen::MatrixXd& G);

/// Minimizes the convex quadratic objective over the eigenvalue-floored PSD
/// cone by projected gradient descent, warm-started from the regularized
/// normal-equation solution. Step size is step_safety / (2 lambda_max(G)).
std::pair<QuadraticForm, SolveReport> solve(const ZubovProblem& prob,
                                            const SolverConfig& config = {});

}  // namespace lyapinf
