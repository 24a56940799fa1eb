#include "ltrb/spectral.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <complex>

namespace ltrb {

EigenEstimate max_generalized_eigenvalue(const OperatorSet& ops, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("max_generalized_eigenvalue: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_generalized_eigenvalue: max_iter must be >= 1");

  Eigen::SimplicialLLT<SpMat> mass_llt(ops.mass);
  if (mass_llt.info() != Eigen::Success)
    throw NumericalError("max_generalized_eigenvalue: mass factorization failed");

  const int n = ops.n_dofs;
  Vec x = Vec::Ones(n);
  x.normalize();

  EigenEstimate est;
  double lambda_prev = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    const Vec ax = ops.stiffness * x;
    const double num = x.dot(ax);
    const double den = x.dot(ops.mass * x);
    const double lambda = num / den;
    est.lambda_max = lambda;
    est.iterations = k;
    if (k > 1 && std::abs(lambda - lambda_prev) <= tol * std::abs(lambda)) {
      est.converged = true;
      return est;
    }
    lambda_prev = lambda;
    x = mass_llt.solve(ax);
    x.normalize();
  }
  return est;  // best estimate, converged=false
}

BetaSelection optimal_beta(double alpha, double lambda_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("optimal_beta: alpha must be positive");
  if (!(lambda_max > 0.0)) throw std::invalid_argument("optimal_beta: lambda_max must be positive");

  BetaSelection sel;
  sel.alpha = alpha;
  sel.lambda_max = lambda_max;
  sel.beta_opt = std::sqrt(alpha * alpha + lambda_max);

  // sqrt(-lambda_max) is the purely imaginary singularity
  const std::complex<double> root(0.0, std::sqrt(lambda_max));
  sel.eta = std::abs((root - alpha - sel.beta_opt) / (root - alpha + sel.beta_opt));
  return sel;
}

} // namespace ltrb
