#pragma once

#include "ltrb/fem.hpp"
#include "ltrb/laplace.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace ltrb::testing {

/// Dunavant degree-5 rule, 7 points per triangle. Independent of the
/// production 3-midpoint rule; used as the quadrature oracle.
inline Vec load_vector_oracle(const Mesh& m, const ScalarField& g) {
  constexpr double wc = 9.0 / 40.0;
  const double wa = (155.0 - std::sqrt(15.0)) / 1200.0;
  const double wb = (155.0 + std::sqrt(15.0)) / 1200.0;
  const double aa = (6.0 - std::sqrt(15.0)) / 21.0;
  const double ab = (6.0 + std::sqrt(15.0)) / 21.0;

  double bary[7][3];
  double w[7];
  bary[0][0] = bary[0][1] = bary[0][2] = 1.0 / 3.0;
  w[0] = wc;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) bary[1 + k][i] = (i == k) ? 1.0 - 2.0 * aa : aa;
    w[1 + k] = wa;
    for (int i = 0; i < 3; ++i) bary[4 + k][i] = (i == k) ? 1.0 - 2.0 * ab : ab;
    w[4 + k] = wb;
  }

  Vec b = Vec::Zero(m.n_dofs);
  for (const auto& tri : m.triangles) {
    const Point2 &p0 = m.vertices[tri[0]], &p1 = m.vertices[tri[1]], &p2 = m.vertices[tri[2]];
    const double area =
        0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
    for (int q = 0; q < 7; ++q) {
      const Point2 x = bary[q][0] * p0 + bary[q][1] * p1 + bary[q][2] * p2;
      const double gv = g(x.x(), x.y());
      for (int i = 0; i < 3; ++i) {
        const int dof = m.interior_index[tri[i]];
        if (dof >= 0) b[dof] += area * w[q] * gv * bary[q][i];
      }
    }
  }
  return b;
}

struct DenseEigs {
  Vec values;   // ascending
  Mat vectors;  // M-orthonormal columns
};

/// Dense generalized eigensolver oracle for (A, M).
inline DenseEigs dense_generalized_eigs(const OperatorSet& ops) {
  const Mat a = Mat(ops.stiffness);
  const Mat m = Mat(ops.mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(a, m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Evaluates the P1 hat function of a vertex by barycentric point location.
inline double hat_value(const Mesh& m, int vertex, double x, double y) {
  for (const auto& tri : m.triangles) {
    const Point2 &p0 = m.vertices[tri[0]], &p1 = m.vertices[tri[1]], &p2 = m.vertices[tri[2]];
    const double det =
        (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    const double l1 = ((x - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (y - p0.y())) / det;
    const double l2 = ((p1.x() - p0.x()) * (y - p0.y()) - (x - p0.x()) * (p1.y() - p0.y())) / det;
    const double l0 = 1.0 - l1 - l2;
    const double eps = -1e-12;
    if (l0 >= eps && l1 >= eps && l2 >= eps) {
      if (tri[0] == vertex) return l0;
      if (tri[1] == vertex) return l1;
      if (tri[2] == vertex) return l2;
      return 0.0;
    }
  }
  return 0.0;
}

inline Mat seeded_matrix(int rows, int cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = dist(gen);
  return m;
}

inline CVec seeded_cvector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(dist(gen), dist(gen));
  return v;
}

/// Hand-made snapshot container for tests that bypass the Laplace stage.
inline SnapshotSet make_snapshots(const OperatorSet& ops, const Mat& columns,
                                  const Vec& weights) {
  SnapshotSet snaps;
  snaps.columns = columns;
  snaps.weights = weights;
  snaps.rule.m = static_cast<int>(columns.cols());
  snaps.effective_solves = 0;
  snaps.ops_fingerprint = ops.fingerprint();
  return snaps;
}

} // namespace ltrb::testing
