#include "lyapinf/data.hpp"

#include <cmath>

#include "lyapinf/dynamics.hpp"
#include "lyapinf/errors.hpp"

namespace lyapinf {

Region::Region(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw config_error("Region: bound size mismatch");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower(i) < upper(i))) throw config_error("Region: lower must be < upper per axis");
    if (!(lower(i) < 0.0 && upper(i) > 0.0)) {
      throw config_error("Region: origin must lie strictly inside");
    }
  }
}

Region Region::centered_box(int dim, double half_width) {
  return Region(Eigen::VectorXd::Constant(dim, -half_width),
                Eigen::VectorXd::Constant(dim, half_width));
}

bool Region::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < lower(i) || x(i) > upper(i)) return false;
  }
  return true;
}

Eigen::MatrixXd finite_difference(const std::vector<double>& times, const Eigen::MatrixXd& states) {
  const auto N = states.cols();
  if (N < 2 || static_cast<Eigen::Index>(times.size()) != N) {
    throw data_error("finite_difference: need at least two samples with matching times");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw data_error("finite_difference: times must increase");
  }
  Eigen::MatrixXd derivs(states.rows(), N);
  derivs.col(0) = (states.col(1) - states.col(0)) / (times[1] - times[0]);
  for (Eigen::Index i = 1; i < N; ++i) {
    derivs.col(i) = (states.col(i) - states.col(i - 1)) / (times[i] - times[i - 1]);
  }
  return derivs;
}

SnapshotSet filter_to_region(const Trajectory& traj, const Region& region) {
  if (traj.dim() != region.dim()) throw data_error("filter_to_region: dimension mismatch");
  const auto N = traj.count();
  std::vector<Eigen::Index> keep;
  keep.reserve(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!traj.states.col(i).allFinite() || !traj.derivs.col(i).allFinite()) continue;
    if (region.contains(traj.states.col(i))) keep.push_back(i);
  }
  SnapshotSet out;
  out.states.resize(traj.states.rows(), keep.size());
  out.derivs.resize(traj.states.rows(), keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.states.col(k) = traj.states.col(keep[k]);
    out.derivs.col(k) = traj.derivs.col(keep[k]);
  }
  return out;
}

SnapshotSet concat(const std::vector<SnapshotSet>& sets) {
  if (sets.empty()) throw data_error("concat: empty snapshot-set list");
  const int n = sets.front().dim();
  Eigen::Index total = 0;
  for (const auto& s : sets) {
    if (s.dim() != n) throw data_error("concat: state dimension mismatch");
    total += s.count();
  }
  SnapshotSet out;
  out.states.resize(n, total);
  out.derivs.resize(n, total);
  Eigen::Index at = 0;
  for (const auto& s : sets) {
    out.states.middleCols(at, s.count()) = s.states;
    out.derivs.middleCols(at, s.count()) = s.derivs;
    at += s.count();
  }
  return out;
}

Eigen::VectorXd kron_pow(const Eigen::VectorXd& x, int k) {
  if (k < 1) throw data_error("kron_pow: k must be >= 1");
  Eigen::VectorXd out = x;
  for (int rep = 1; rep < k; ++rep) {
    Eigen::VectorXd next(out.size() * x.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next.segment(i * x.size(), x.size()) = out(i) * x;
    }
    out = std::move(next);
  }
  return out;
}

Eigen::VectorXd x_circledast(const Eigen::VectorXd& x, const Eigen::VectorXd& xdot) {
  if (x.size() != xdot.size()) throw data_error("x_circledast: dimension mismatch");
  const auto n = x.size();
  Eigen::VectorXd out(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.segment(i * n, n) = xdot(i) * x + x(i) * xdot;
  }
  return out;
}

}  // namespace lyapinf
