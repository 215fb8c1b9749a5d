#include "lyapinf/solver.hpp"

#include <cmath>

#include "lyapinf/errors.hpp"
#include "lyapinf/rng.hpp"

namespace lyapinf {

QuadraticForm project_psd_floor(const Eigen::MatrixXd& S, double eps) {
  if (eps <= 0.0) throw config_error("project_psd_floor: eps must be positive");
  if (S.rows() != S.cols()) throw data_error("project_psd_floor: matrix must be square");
  if (!S.allFinite()) throw numeric_error("project_psd_floor: non-finite input");

  const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) {
    throw numeric_error("project_psd_floor: eigendecomposition failed");
  }
  const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(eps);
  return QuadraticForm(es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose());
}

double spectral_norm(const Eigen::MatrixXd& G) {
  if (G.rows() != G.cols()) throw data_error("spectral_norm: matrix must be square");
  const auto n = G.rows();
  if (n == 0) return 0.0;

  Rng rng(fork_seed(0x707769 /* fixed power-iteration stream */, static_cast<std::uint64_t>(n)));
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian();
  const double vnorm = v.norm();
  if (vnorm == 0.0) v.setOnes(); else v /= vnorm;

  double lambda_prev = 0.0;
  for (int iter = 0; iter < 20000; ++iter) {
    const Eigen::VectorXd w = G * v;
    const double lambda = v.dot(w);
    const double wnorm = w.norm();
    if (wnorm == 0.0) return 0.0;
    v = w / wnorm;
    if (iter > 0 && std::abs(lambda - lambda_prev) <= 1e-8 * std::max(std::abs(lambda), 1e-300)) {
      return std::abs(lambda);
    }
    lambda_prev = lambda;
  }
  return std::abs(lambda_prev);
}

std::pair<QuadraticForm, SolveReport> solve(const ZubovProblem& prob, const SolverConfig& config) {
  if (config.max_iters < 1 || config.tol <= 0.0 || config.eps_diag <= 0.0) {
    throw config_error("solve: max_iters >= 1, tol > 0, eps_diag > 0 required");
  }
  if (!prob.G.allFinite() || !prob.g.allFinite()) throw numeric_error("solve: non-finite problem");
  const auto n2 = prob.G.rows();

  // Warm start: regularized normal equations, then projection into the cone.
  const double reg = 1e-12 * prob.G.trace() / static_cast<double>(n2);
  Eigen::MatrixXd Greg = prob.G;
  Greg.diagonal().array() += reg;
  const Eigen::VectorXd p_ls = Greg.ldlt().solve(-prob.g);
  const QuadraticForm P0 = project_psd_floor(unflatten(p_ls), config.eps_diag);

  auto obj = [&](const Eigen::VectorXd& p) {
    return p.dot(prob.G * p) + 2.0 * prob.g.dot(p) + prob.c0;
  };
  auto grad = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    return 2.0 * (prob.G * p + prob.g);
  };
  auto project = [&](const Eigen::VectorXd& p) {
    return project_psd_floor(unflatten(p), config.eps_diag).vec();
  };

  SolveReport report;
  Eigen::VectorXd p = P0.vec();
  double J = obj(p);
  report.objective_history.push_back(J);

  const double L = 2.0 * spectral_norm(prob.G);
  if (L == 0.0) {
    report.final_objective = J;
    report.converged = true;
    report.min_eigenvalue = P0.min_eigenvalue();
    return {P0, report};
  }
  const double step = config.step_safety / L;

  Eigen::VectorXd p_prev = p;
  Eigen::VectorXd best_p = p;
  double best_J = J;
  double t = 1.0;
  int stall = 0;
  int non_decreasing = 0;

  int k = 0;
  for (k = 1; k <= config.max_iters; ++k) {
    Eigen::VectorXd cand;
    double Jc;
    if (config.accel) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      const Eigen::VectorXd y = p + beta * (p - p_prev);
      cand = project(y - step * grad(y));
      Jc = obj(cand);
      if (Jc > J) {
        // Function-value restart: fall back to a plain descent step from p.
        cand = project(p - step * grad(p));
        Jc = obj(cand);
        t = 1.0;
      } else {
        t = t_next;
      }
    } else {
      cand = project(p - step * grad(p));
      Jc = obj(cand);
    }

    p_prev = p;
    p = cand;
    report.objective_history.push_back(Jc);
    if (Jc < best_J) {
      best_J = Jc;
      best_p = p;
    }

    const double decrease = J - Jc;
    non_decreasing = decrease <= 0.0 ? non_decreasing + 1 : 0;
    const double rel = decrease / std::max(std::abs(J), 1e-300);
    stall = rel < config.tol ? stall + 1 : 0;
    J = Jc;

    if (stall >= 10) {
      report.converged = true;
      break;
    }
    if (non_decreasing >= 25) {
      report.stagnated = true;
      break;
    }
  }

  report.iterations = std::min(k, config.max_iters);
  report.final_objective = best_J;
  const QuadraticForm P = QuadraticForm::from_vec(best_p);
  report.min_eigenvalue = P.min_eigenvalue();
  return {P, report};
}

}  // namespace lyapinf
