#include "ltrb/pod.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace ltrb;
namespace tst = ltrb::testing;

namespace {

OperatorSet tiny_identity_ops(int n) {
  OperatorSet ops;
  ops.c = 1.0;
  ops.n_dofs = n;
  ops.mesh_hash = 0x1234;
  SpMat eye(n, n);
  eye.setIdentity();
  ops.mass = eye;
  ops.gram_h10 = eye;
  ops.stiffness = eye;
  return ops;
}

OperatorSet pipeline_ops(int n, double c = 1.0) {
  return assemble_operators(build_structured_mesh(n), c);
}

SnapshotSet pipeline_snapshots(const Mesh& m, const OperatorSet& ops, int count) {
  const Vec u0 = l2_project(ops, m, gaussian_field(Point2(0.25, -0.1), 0.1));
  const Vec u1 = Vec::Zero(ops.n_dofs);
  return compute_snapshots(ops, make_quadrature(5.0, 30.0, count), u0, u1);
}

} // namespace

TEST_CASE("gram cholesky: scalar and identity cases") {
  OperatorSet one = tiny_identity_ops(1);
  one.gram_h10.coeffRef(0, 0) = 4.0;
  const GramCholesky chol(one);
  CHECK(chol.factor().coeff(0, 0) == doctest::Approx(2.0));

  const GramCholesky eye_chol(tiny_identity_ops(5));
  CHECK((Mat(eye_chol.factor()) - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram cholesky reconstructs B and is upper triangular") {
  const OperatorSet ops = pipeline_ops(16);
  const GramCholesky chol(ops);
  const SpMat& r = chol.factor();

  for (int col = 0; col < r.outerSize(); ++col)
    for (SpMat::InnerIterator it(r, col); it; ++it) CHECK(it.row() <= it.col());

  const Mat reconstructed = Mat(r).transpose() * Mat(r);
  CHECK((reconstructed - Mat(ops.gram_h10)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gram cholesky rejects indefinite input") {
  OperatorSet bad = tiny_identity_ops(2);
  bad.gram_h10.coeffRef(0, 1) = 2.0;
  bad.gram_h10.coeffRef(1, 0) = 2.0;
  CHECK_THROWS_AS(GramCholesky{bad}, NumericalError);
}

TEST_CASE("reduced basis: single snapshot column") {
  const Mesh m = build_structured_mesh(4);
  const OperatorSet ops = assemble_operators(m, 1.0);
  const GramCholesky chol(ops);

  const Vec v = tst::seeded_matrix(ops.n_dofs, 1, 11).col(0);
  const double w = 0.7;
  const auto snaps = tst::make_snapshots(ops, v, Vec::Constant(1, w));
  const auto basis = build_reduced_basis(snaps, chol, 1);

  const double norm_b = std::sqrt(v.dot(ops.gram_h10 * v));
  CHECK(basis.r == 1);
  CHECK(basis.R == 1);
  CHECK(basis.singular_values[0] == doctest::Approx(std::sqrt(w) * norm_b).epsilon(1e-12));
  const double sign = basis.phi.col(0).dot(v) > 0 ? 1.0 : -1.0;
  CHECK((sign * basis.phi.col(0) - v / norm_b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reduced basis: B-orthonormality across meshes and dimensions") {
  for (int n : {8, 16}) {
    const Mesh m = build_structured_mesh(n);
    const OperatorSet ops = assemble_operators(m, 1.0);
    const auto snaps = pipeline_snapshots(m, ops, 24);
    const GramCholesky chol(ops);
    for (int target : {1, 5, 1000}) {
      const auto basis = build_reduced_basis(snaps, chol, target);
      const Mat gram = basis.phi.transpose() * (ops.gram_h10 * basis.phi);
      CHECK((gram - Mat::Identity(basis.R, basis.R)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("reduced basis: requesting beyond the rank truncates") {
  const Mesh m = build_structured_mesh(8);
  const OperatorSet ops = assemble_operators(m, 1.0);
  const auto snaps = pipeline_snapshots(m, ops, 16);
  const auto basis = build_reduced_basis(snaps, GramCholesky(ops), 9999);
  CHECK(basis.truncated);
  CHECK(basis.R == basis.r);
  CHECK(basis.r <= 16);
}

TEST_CASE("reduced basis: duplicated snapshot columns do not raise the rank") {
  const OperatorSet ops = pipeline_ops(6);
  const GramCholesky chol(ops);
  Mat cols = tst::seeded_matrix(ops.n_dofs, 4, 21);
  Mat with_dup(ops.n_dofs, 5);
  with_dup << cols, cols.col(0);

  const auto plain = build_reduced_basis(tst::make_snapshots(ops, cols, Vec::Ones(4)), chol, 5);
  const auto dup =
      build_reduced_basis(tst::make_snapshots(ops, with_dup, Vec::Ones(5)), chol, 5);
  CHECK(plain.r == 4);
  CHECK(dup.r == 4);
}

TEST_CASE("reduced basis: argument validation") {
  const OperatorSet ops = pipeline_ops(4);
  const GramCholesky chol(ops);
  const auto snaps = tst::make_snapshots(ops, tst::seeded_matrix(ops.n_dofs, 2, 5), Vec::Ones(2));
  CHECK_THROWS_AS(build_reduced_basis(snaps, chol, 0), std::invalid_argument);

  SnapshotSet empty = snaps;
  empty.columns.resize(ops.n_dofs, 0);
  CHECK_THROWS_AS(build_reduced_basis(empty, chol, 1), std::invalid_argument);

  SnapshotSet zero = snaps;
  zero.columns.setZero();
  CHECK_THROWS_AS(build_reduced_basis(zero, chol, 1), std::invalid_argument);

  SnapshotSet foreign = snaps;
  foreign.ops_fingerprint ^= 1;
  CHECK_THROWS_AS(build_reduced_basis(foreign, chol, 1), IncompatibleBasisError);
}

TEST_CASE("projection error: hand-built two-snapshot case") {
  const OperatorSet ops = tiny_identity_ops(3);
  const GramCholesky chol(ops);
  Mat cols = Mat::Zero(3, 2);
  cols(0, 0) = 2.0;  // dominant direction e0
  cols(1, 1) = 1.0;  // orthogonal direction e1
  Vec weights(2);
  weights << 1.0, 0.5;

  const auto snaps = tst::make_snapshots(ops, cols, weights);
  const auto basis = build_reduced_basis(snaps, chol, 2);
  REQUIRE(basis.r == 2);

  const double err1 = pod_projection_error(basis, snaps, ops, 1);
  CHECK(err1 == doctest::Approx(0.5 * 1.0).epsilon(1e-12));  // omega_2 |s_2|_B^2
  CHECK(pod_projection_error(basis, snaps, ops, 2) < 1e-16 * 4.5);
}

TEST_CASE("Schmidt-Eckart-Young identity on pipeline snapshots") {
  const Mesh m = build_structured_mesh(16);
  const OperatorSet ops = assemble_operators(m, 1.0);
  const auto snaps = pipeline_snapshots(m, ops, 32);
  const GramCholesky chol(ops);
  const auto basis = build_reduced_basis(snaps, chol, 1000);

  double total = 0.0;
  for (int j = 0; j < basis.singular_values.size(); ++j)
    total += basis.singular_values[j] * basis.singular_values[j];

  for (int R : {1, 3, 5, 10}) {
    if (R > basis.R) continue;
    double tail = 0.0;
    for (int j = R; j < basis.singular_values.size(); ++j)
      tail += basis.singular_values[j] * basis.singular_values[j];
    const double direct = pod_projection_error(basis, snaps, ops, R);
    CHECK(std::abs(direct - tail) <= 1e-8 * tail);
  }

  // full-rank projection leaves only roundoff
  double weighted_energy = 0.0;
  for (int j = 0; j < snaps.columns.cols(); ++j) {
    const Vec s = snaps.columns.col(j);
    weighted_energy += snaps.weights[j] * s.dot(ops.gram_h10 * s);
  }
  CHECK(pod_projection_error(basis, snaps, ops, basis.r) <= 1e-16 * weighted_energy);
}

TEST_CASE("Schmidt-Eckart-Young identity on random snapshot sets") {
  const OperatorSet ops = pipeline_ops(8);
  const GramCholesky chol(ops);
  const Mat cols = tst::seeded_matrix(ops.n_dofs, 12, 77);
  Vec weights(12);
  for (int j = 0; j < 12; ++j) weights[j] = 0.1 + 0.05 * j;

  const auto snaps = tst::make_snapshots(ops, cols, weights);
  const auto basis = build_reduced_basis(snaps, chol, 12);
  for (int R = 1; R <= basis.R; ++R) {
    double tail = 0.0;
    for (int j = R; j < basis.singular_values.size(); ++j)
      tail += basis.singular_values[j] * basis.singular_values[j];
    const double direct = pod_projection_error(basis, snaps, ops, R);
    if (tail > 0.0) CHECK(std::abs(direct - tail) <= 1e-8 * std::max(tail, 1e-30));
  }
}

TEST_CASE("projection error is nonincreasing in R") {
  const Mesh m = build_structured_mesh(12);
  const OperatorSet ops = assemble_operators(m, 1.0);
  const auto snaps = pipeline_snapshots(m, ops, 20);
  const auto basis = build_reduced_basis(snaps, GramCholesky(ops), 1000);

  double prev = std::numeric_limits<double>::max();
  for (int R = 1; R <= basis.R; ++R) {
    const double err = pod_projection_error(basis, snaps, ops, R);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
  CHECK_THROWS_AS(pod_projection_error(basis, snaps, ops, basis.R + 1), std::invalid_argument);
}
