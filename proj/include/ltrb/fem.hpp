#pragma once

#include "ltrb/mesh.hpp"
#include "ltrb/types.hpp"

#include <functional>
#include <utility>

namespace ltrb {

/// P1 operators over interior dofs (homogeneous Dirichlet by elimination).
/// stiffness = c^2 * gram_h10 entrywise; all three share one sparsity pattern.
struct OperatorSet {
  SpMat mass;       // M: (phi_i, phi_j)_L2
  SpMat stiffness;  // A = c^2 B
  SpMat gram_h10;   // B: (grad phi_i, grad phi_j)_L2
  double c = 1.0;
  int n_dofs = 0;
  std::uint64_t mesh_hash = 0;

  /// Binds derived artifacts (snapshots, bases) to this discretization.
  std::uint64_t fingerprint() const;
};

using ScalarField = std::function<double(double, double)>;

OperatorSet assemble_operators(const Mesh& m, double c);

/// Mass and H1 gram over all vertices, no boundary elimination. Diagnostic
/// surface used by partition-of-unity and Galerkin-consistency checks.
std::pair<SpMat, SpMat> assemble_full_mass_gram(const Mesh& m);

/// x |-> exp(-|x - x0|^2 / zeta^2)
ScalarField gaussian_field(const Point2& x0, double zeta);

/// b_i = int_Omega g phi_i dx over interior dofs (3-midpoint rule, degree-2 exact).
NodalField load_vector(const Mesh& m, const ScalarField& g);

/// L2 projection onto the interior P1 space: solves M x = load_vector(g).
NodalField l2_project(const OperatorSet& ops, const Mesh& m, const ScalarField& g);

namespace detail {

/// Exact P1 element integrals on one triangle.
struct P1Local {
  Eigen::Matrix3d mass;
  Eigen::Matrix3d gram;  // gradient inner products
  double area;
};
P1Local p1_local(const Point2& a, const Point2& b, const Point2& c);

} // namespace detail

} // namespace ltrb
