#pragma once

#include "ltrb/laplace.hpp"

namespace ltrb {

/// Cholesky factor of the H10 gram: B = R^T R with R upper triangular
/// (natural ordering, so the factor really is triangular).
class GramCholesky {
public:
  explicit GramCholesky(const OperatorSet& ops);

  const SpMat& factor() const { return upper_; }
  Mat apply(const Mat& x) const { return upper_ * x; }
  Vec solve_upper(const Vec& y) const;  // R x = y
  std::uint64_t ops_fingerprint() const { return fingerprint_; }

private:
  SpMat upper_;
  std::uint64_t fingerprint_ = 0;
};

GramCholesky cholesky_gram(const OperatorSet& ops);

/// B-orthonormal reduced basis with the full singular-value sequence of the
/// weighted snapshot matrix R_h S D^{1/2}.
struct ReducedBasis {
  Mat phi;              // N_h x R, columns B-orthonormal
  Vec singular_values;  // all min(N_h, M) values, nonincreasing
  int r = 0;            // numerical rank (relative cutoff 1e-12)
  int R = 0;            // retained dimension, min(requested, r)
  bool truncated = false;
  std::uint64_t b_gram_hash = 0;
};

/// Rank cutoff relative to the leading singular value.
inline constexpr double kRankEps = 1e-12;

ReducedBasis build_reduced_basis(const SnapshotSet& snaps, const GramCholesky& factor,
                                 int target_dim);

/// Weighted projection error sum_j w_j |s_j - Phi_R Phi_R^T B s_j|_B^2,
/// computed directly from the basis (independent of the singular values).
double pod_projection_error(const ReducedBasis& basis, const SnapshotSet& snaps,
                            const OperatorSet& ops, int R);

} // namespace ltrb
