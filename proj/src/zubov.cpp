#include "lyapinf/zubov.hpp"

#include <cmath>
#include <vector>

#include "lyapinf/errors.hpp"
#include "lyapinf/parallel.hpp"

namespace lyapinf {

Eigen::VectorXd flatten(const Eigen::MatrixXd& M) {
  const auto n = M.rows();
  if (M.cols() != n) throw data_error("flatten: matrix must be square");
  Eigen::VectorXd v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v.segment(i * n, n) = M.row(i);
  return v;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw data_error("unflatten: length is not a perfect square");
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) M.row(i) = v.segment(i * n, n);
  return M;
}

QuadraticForm::QuadraticForm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw data_error("QuadraticForm: matrix must be square");
  // (a+b)/2 == (b+a)/2 in IEEE arithmetic, so this is exactly symmetric.
  mat_ = 0.5 * (m + m.transpose());
}

QuadraticForm QuadraticForm::scaled_identity(int n, double scale) {
  return QuadraticForm(scale * Eigen::MatrixXd::Identity(n, n));
}

QuadraticForm QuadraticForm::from_vec(const Eigen::VectorXd& p) {
  return QuadraticForm(unflatten(p));
}

double QuadraticForm::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_error("QuadraticForm: eigendecomposition failed");
  return es.eigenvalues().minCoeff();
}

int ZubovProblem::dim() const {
  return static_cast<int>(std::llround(std::sqrt(static_cast<double>(G.rows()))));
}

double residual(const QuadraticForm& P, const QuadraticForm& Q, const Eigen::VectorXd& x,
                const Eigen::VectorXd& xdot) {
  const double v = P.value(x);
  const double h = Q.value(x);
  return 2.0 * xdot.dot(P.mat() * x) + h - h * v;
}

namespace {

struct GramPartial {
  Eigen::MatrixXd G;  // lower triangle valid
  Eigen::VectorXd g;
  double c0 = 0.0;

  void merge(const GramPartial& other) {
    G += other.G;
    g += other.g;
    c0 += other.c0;
  }
};

// Reduce partials in a fixed binary tree (index order), so the
// floating-point result is independent of how chunks were scheduled.
GramPartial reduce_pairwise(std::vector<GramPartial> v) {
  while (v.size() > 1) {
    std::vector<GramPartial> next;
    next.reserve((v.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) {
      v[i].merge(v[i + 1]);
      next.push_back(std::move(v[i]));
    }
    if (v.size() % 2 == 1) next.push_back(std::move(v.back()));
    v = std::move(next);
  }
  return std::move(v[0]);
}

}  // namespace

ZubovProblem assemble(const SnapshotSet& data, const QuadraticForm& Q) {
  const auto N = data.count();
  if (N < 1) throw data_error("assemble: empty snapshot set");
  const int n = data.dim();
  if (Q.dim() != n) throw data_error("assemble: Q dimension mismatch");
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;

  // Chunk size shrinks for large n so in-flight buffers stay modest.
  const Eigen::Index chunk = n2 <= 64 ? 4096 : 1024;
  const Eigen::Index num_chunks = (N + chunk - 1) / chunk;
  // Chunks are reduced in groups of fixed size to bound memory while keeping
  // the reduction tree independent of thread count.
  const Eigen::Index group = 16;

  std::vector<GramPartial> group_results;
  group_results.reserve((num_chunks + group - 1) / group);

  std::vector<GramPartial> slots(static_cast<std::size_t>(std::min(group, num_chunks)));
  for (Eigen::Index g0 = 0; g0 < num_chunks; g0 += group) {
    const Eigen::Index in_group = std::min(group, num_chunks - g0);
    parallel_for(static_cast<std::size_t>(in_group), [&](std::size_t k) {
      const Eigen::Index c = g0 + static_cast<Eigen::Index>(k);
      const Eigen::Index begin = c * chunk;
      const Eigen::Index m = std::min(chunk, N - begin);

      Eigen::MatrixXd A(n2, m);
      Eigen::VectorXd b(m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const auto x = data.states.col(begin + j);
        const auto xd = data.derivs.col(begin + j);
        const double h = x.dot(Q.mat() * x);
        b(j) = h;
        // a = x^(*) - h * x^(2), built row-block by row-block.
        for (int i = 0; i < n; ++i) {
          A.col(j).segment(static_cast<Eigen::Index>(i) * n, n) =
              xd(i) * x + x(i) * xd - (h * x(i)) * x;
        }
      }
      GramPartial part;
      part.G = Eigen::MatrixXd::Zero(n2, n2);
      part.G.selfadjointView<Eigen::Lower>().rankUpdate(A);
      part.g = A * b;
      part.c0 = b.squaredNorm();
      slots[k] = std::move(part);
    });
    std::vector<GramPartial> current(std::make_move_iterator(slots.begin()),
                                     std::make_move_iterator(slots.begin() + in_group));
    group_results.push_back(reduce_pairwise(std::move(current)));
  }

  GramPartial total = reduce_pairwise(std::move(group_results));

  ZubovProblem prob;
  prob.G = total.G.selfadjointView<Eigen::Lower>();
  prob.G /= static_cast<double>(N);
  prob.g = total.g / static_cast<double>(N);
  prob.c0 = total.c0 / static_cast<double>(N);
  prob.snapshot_count = N;
  return prob;
}

double objective(const ZubovProblem& prob, const QuadraticForm& P) {
  const Eigen::VectorXd p = P.vec();
  if (p.size() != prob.G.rows()) throw data_error("objective: dimension mismatch");
  return p.dot(prob.G * p) + 2.0 * prob.g.dot(p) + prob.c0;
}

Eigen::VectorXd gradient(const ZubovProblem& prob, const QuadraticForm& P) {
  const Eigen::VectorXd p = P.vec();
  if (p.size() != prob.G.rows()) throw data_error("gradient: dimension mismatch");
  return 2.0 * (prob.G * p + prob.g);
}

}  // namespace lyapinf
