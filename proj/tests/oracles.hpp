// Test-only oracles, deliberately independent of the library implementation:
// plain-loop residual evaluation, explicitly materialized Kronecker powers,
// and a Denman-Beavers projection that never eigendecomposes.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "lyapinf/dynamics.hpp"
#include "lyapinf/rng.hpp"

namespace oracles {

// x'Mx by explicit summation.
inline double quad(const Eigen::MatrixXd& M, const Eigen::VectorXd& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) acc += x(i) * M(i, j) * x(j);
  }
  return acc;
}

// Zubov residual evaluated termwise from its definition.
inline double direct_residual(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& xd) {
  double xd_P_x = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) xd_P_x += xd(i) * P(i, j) * x(j);
  }
  double x_P_xd = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) x_P_xd += x(i) * P(i, j) * xd(j);
  }
  const double h = quad(Q, x);
  return xd_P_x + x_P_xd + h - h * quad(P, x);
}

// Kronecker product by its index definition.
inline Eigen::VectorXd kron(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  }
  return out;
}

// Residual in the Kronecker form with x^(4) fully materialized:
// p'x^(*) + q'x^(2) - (q (x) p)' x^(4), row-major vec.
inline double kron4_residual(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& xd) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd p(n * n), q(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      p(i * n + j) = P(i, j);
      q(i * n + j) = Q(i, j);
    }
  }
  const Eigen::VectorXd x2 = kron(x, x);
  const Eigen::VectorXd x4 = kron(x2, x2);
  const Eigen::VectorXd xs = kron(xd, x) + kron(x, xd);
  return p.dot(xs) + q.dot(x2) - kron(q, p).dot(x4);
}

// Mean squared residual by direct summation over snapshots.
inline double direct_objective(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                               const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xd) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    const double r = direct_residual(P, Q, X.col(i), Xd.col(i));
    acc += r * r;
  }
  return acc / static_cast<double>(X.cols());
}

// Random symmetric matrix with entries uniform in [-1, 1].
inline Eigen::MatrixXd random_symmetric(int n, lyapinf::Rng& rng) {
  Eigen::MatrixXd S(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      S(i, j) = rng.uniform(-1.0, 1.0);
      S(j, i) = S(i, j);
    }
  }
  return S;
}

// Random SPD matrix with eigenvalues in [lo, hi]: random rotation applied to a
// uniform diagonal spectrum.
inline Eigen::MatrixXd random_spd(int n, double lo, double hi, lyapinf::Rng& rng) {
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = rng.gaussian();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::MatrixXd U = qr.householderQ();
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag(i) = rng.uniform(lo, hi);
  return U * diag.asDiagonal() * U.transpose();
}

// Snapshots that satisfy the Zubov equation exactly for a known P*:
// xdot = h (v - 1) / (2 v) x with v = x'P*x, h = x'Qx makes the residual
// vanish identically. States are kept away from the origin so the scaling
// stays bounded.
struct ExactZubovData {
  Eigen::MatrixXd states;
  Eigen::MatrixXd derivs;
};

inline ExactZubovData make_exact_zubov_data(const Eigen::MatrixXd& Pstar, double gamma,
                                            Eigen::Index count, lyapinf::Rng& rng) {
  const auto n = Pstar.rows();
  ExactZubovData data;
  data.states.resize(n, count);
  data.derivs.resize(n, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::VectorXd x(n);
    do {
      for (Eigen::Index d = 0; d < n; ++d) x(d) = rng.uniform(-1.0, 1.0);
    } while (x.norm() < 0.3);
    const double v = quad(Pstar, x);
    const double h = gamma * x.squaredNorm();
    data.states.col(k) = x;
    data.derivs.col(k) = (h * (v - 1.0) / (2.0 * v)) * x;
  }
  return data;
}

// PSD-floor projection without an eigendecomposition: the symmetric-part
// absolute value |B| = (B^2)^{1/2} comes from a Denman-Beavers square-root
// iteration, and proj_{>=eps}(S) = eps I + (B + |B|)/2 with B = sym(S) - eps I.
inline Eigen::MatrixXd denman_beavers_project(const Eigen::MatrixXd& S, double eps) {
  const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  const Eigen::Index n = sym.rows();
  const Eigen::MatrixXd B = sym - eps * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd Y = B * B;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(n, n);
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::MatrixXd Yn = 0.5 * (Y + Z.inverse());
    const Eigen::MatrixXd Zn = 0.5 * (Z + Y.inverse());
    const double delta = (Yn - Y).norm();
    Y = Yn;
    Z = Zn;
    if (delta <= 1e-14 * std::max(1.0, Y.norm())) break;
  }
  return eps * Eigen::MatrixXd::Identity(n, n) + 0.5 * (B + Y);
}

}  // namespace oracles
