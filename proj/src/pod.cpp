#include "ltrb/pod.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include <cmath>

namespace ltrb {

GramCholesky::GramCholesky(const OperatorSet& ops) : fingerprint_(ops.fingerprint()) {
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(ops.gram_h10);
  if (llt.info() != Eigen::Success)
    throw NumericalError("cholesky_gram: gram matrix is not positive definite");
  upper_ = llt.matrixU();
}

Vec GramCholesky::solve_upper(const Vec& y) const {
  return upper_.triangularView<Eigen::Upper>().solve(y);
}

GramCholesky cholesky_gram(const OperatorSet& ops) { return GramCholesky(ops); }

ReducedBasis build_reduced_basis(const SnapshotSet& snaps, const GramCholesky& factor,
                                 int target_dim) {
  if (target_dim < 1)
    throw std::invalid_argument("build_reduced_basis: target dimension must be >= 1");
  if (snaps.columns.cols() == 0 || snaps.columns.rows() == 0)
    throw std::invalid_argument("build_reduced_basis: empty snapshot set");
  if (snaps.ops_fingerprint != factor.ops_fingerprint())
    throw IncompatibleBasisError("build_reduced_basis: snapshots and gram factor disagree");

  // weighted, B-metric snapshot matrix R_h S D^{1/2}
  Mat shat = factor.apply(snaps.columns);
  for (int j = 0; j < shat.cols(); ++j) shat.col(j) *= std::sqrt(snaps.weights[j]);

  Eigen::BDCSVD<Mat> svd(shat, Eigen::ComputeThinU);
  const Vec& sigma = svd.singularValues();
  if (!(sigma[0] > 0.0))
    throw std::invalid_argument("build_reduced_basis: snapshot matrix is numerically zero");

  int rank = 0;
  while (rank < sigma.size() && sigma[rank] > sigma[0] * kRankEps) ++rank;

  ReducedBasis basis;
  basis.singular_values = sigma;
  basis.r = rank;
  basis.R = std::min(target_dim, rank);
  basis.truncated = target_dim > rank;
  basis.b_gram_hash = factor.ops_fingerprint();
  basis.phi.resize(shat.rows(), basis.R);
  for (int k = 0; k < basis.R; ++k) basis.phi.col(k) = factor.solve_upper(svd.matrixU().col(k));
  return basis;
}

double pod_projection_error(const ReducedBasis& basis, const SnapshotSet& snaps,
                            const OperatorSet& ops, int R) {
  if (R < 0 || R > basis.R)
    throw std::invalid_argument("pod_projection_error: dimension exceeds basis");
  if (basis.phi.rows() != snaps.columns.rows() || ops.n_dofs != snaps.columns.rows())
    throw std::invalid_argument("pod_projection_error: dimension mismatch");

  const auto phi = basis.phi.leftCols(R);
  double err = 0.0;
  for (int j = 0; j < snaps.columns.cols(); ++j) {
    const Vec s = snaps.columns.col(j);
    const Vec bs = ops.gram_h10 * s;
    const Vec e = s - phi * (phi.transpose() * bs);
    err += snaps.weights[j] * e.dot(ops.gram_h10 * e);
  }
  return err;
}

} // namespace ltrb
