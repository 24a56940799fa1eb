#pragma once

#include "ltrb/fem.hpp"

namespace ltrb {

struct EigenEstimate {
  double lambda_max = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest generalized eigenvalue of (A, M) by power iteration on M^{-1}A
/// with a prefactored mass Cholesky. Deterministic all-ones start; stops when
/// the Rayleigh quotient changes by at most tol relative per iteration.
/// Non-convergence returns the best estimate with converged=false.
EigenEstimate max_generalized_eigenvalue(const OperatorSet& ops, double tol = 1e-6,
                                         int max_iter = 5000);

struct BetaSelection {
  double alpha = 0.0;
  double lambda_max = 0.0;
  double beta_opt = 0.0;
  double eta = 0.0;  // predicted per-sample convergence factor, > 1
};

/// beta_opt = sqrt(alpha^2 + lambda_max); eta is the modulus ratio at the
/// dominant imaginary singularity pair.
BetaSelection optimal_beta(double alpha, double lambda_max);

} // namespace ltrb
