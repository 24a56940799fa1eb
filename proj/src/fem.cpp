#include "ltrb/fem.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstring>
#include <vector>

namespace ltrb {

namespace detail {

P1Local p1_local(const Point2& a, const Point2& b, const Point2& c) {
  P1Local loc;
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  loc.area = 0.5 * det;
  if (loc.area <= 0.0) throw MeshError("degenerate (zero-area) triangle");

  loc.mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  loc.mass *= loc.area / 12.0;

  // grad(lambda_i) = (b_i, c_i) / (2|K|) with the cyclic edge vectors
  const double bb[3] = {b.y() - c.y(), c.y() - a.y(), a.y() - b.y()};
  const double cc[3] = {c.x() - b.x(), a.x() - c.x(), b.x() - a.x()};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      loc.gram(i, j) = (bb[i] * bb[j] + cc[i] * cc[j]) / (4.0 * loc.area);
  return loc;
}

} // namespace detail

namespace {

// Midpoint rule on a triangle: degree-2 exact, matches P1 accuracy.
// P1 hat values at the edge midpoints (m01, m12, m20).
constexpr double kMidHat[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

template <class EmitMass, class EmitGram>
void for_each_element(const Mesh& m, EmitMass&& emit_mass, EmitGram&& emit_gram) {
  for (const auto& tri : m.triangles) {
    const auto loc =
        detail::p1_local(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        emit_mass(tri[i], tri[j], loc.mass(i, j));
        emit_gram(tri[i], tri[j], loc.gram(i, j));
      }
  }
}

} // namespace

std::uint64_t OperatorSet::fingerprint() const {
  std::uint64_t bits;
  static_assert(sizeof bits == sizeof c);
  std::memcpy(&bits, &c, sizeof bits);
  std::uint64_t h = mesh_hash;
  h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

OperatorSet assemble_operators(const Mesh& m, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("assemble_operators: wave speed must be positive");

  const int n = m.n_dofs;
  std::vector<Eigen::Triplet<double>> tm, tb;
  tm.reserve(18 * m.n_triangles());
  tb.reserve(18 * m.n_triangles());
  auto interior = [&](int v) { return m.interior_index[v]; };
  // both operators get a triplet for every interior pair, so the assembled
  // patterns coincide even where gram entries cancel to zero
  for_each_element(
      m,
      [&](int i, int j, double v) {
        if (interior(i) >= 0 && interior(j) >= 0) tm.emplace_back(interior(i), interior(j), v);
      },
      [&](int i, int j, double v) {
        if (interior(i) >= 0 && interior(j) >= 0) tb.emplace_back(interior(i), interior(j), v);
      });

  OperatorSet ops;
  ops.c = c;
  ops.n_dofs = n;
  ops.mesh_hash = m.hash;
  ops.mass.resize(n, n);
  ops.mass.setFromTriplets(tm.begin(), tm.end());
  ops.gram_h10.resize(n, n);
  ops.gram_h10.setFromTriplets(tb.begin(), tb.end());
  ops.stiffness = ops.gram_h10;
  ops.stiffness *= c * c;
  return ops;
}

std::pair<SpMat, SpMat> assemble_full_mass_gram(const Mesh& m) {
  const int n = m.n_vertices();
  std::vector<Eigen::Triplet<double>> tm, tb;
  tm.reserve(18 * m.n_triangles());
  tb.reserve(18 * m.n_triangles());
  for_each_element(
      m, [&](int i, int j, double v) { tm.emplace_back(i, j, v); },
      [&](int i, int j, double v) { tb.emplace_back(i, j, v); });
  SpMat mass(n, n), gram(n, n);
  mass.setFromTriplets(tm.begin(), tm.end());
  gram.setFromTriplets(tb.begin(), tb.end());
  return {mass, gram};
}

ScalarField gaussian_field(const Point2& x0, double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("gaussian_field: zeta must be positive");
  const double x0x = x0.x(), x0y = x0.y(), inv = 1.0 / (zeta * zeta);
  return [=](double x, double y) {
    const double dx = x - x0x, dy = y - x0y;
    return std::exp(-(dx * dx + dy * dy) * inv);
  };
}

NodalField load_vector(const Mesh& m, const ScalarField& g) {
  Vec b = Vec::Zero(m.n_dofs);
  for (const auto& tri : m.triangles) {
    const Point2 &a = m.vertices[tri[0]], &p = m.vertices[tri[1]], &q = m.vertices[tri[2]];
    const double area =
        0.5 * ((p.x() - a.x()) * (q.y() - a.y()) - (q.x() - a.x()) * (p.y() - a.y()));
    const Point2 mid[3] = {0.5 * (a + p), 0.5 * (p + q), 0.5 * (q + a)};
    double gv[3];
    for (int k = 0; k < 3; ++k) gv[k] = g(mid[k].x(), mid[k].y());
    for (int i = 0; i < 3; ++i) {
      const int dof = m.interior_index[tri[i]];
      if (dof < 0) continue;
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += gv[k] * kMidHat[k][i];
      b[dof] += s * area / 3.0;
    }
  }
  return b;
}

NodalField l2_project(const OperatorSet& ops, const Mesh& m, const ScalarField& g) {
  const Vec b = load_vector(m, g);
  Eigen::SimplicialLLT<SpMat> llt(ops.mass);
  if (llt.info() != Eigen::Success)
    throw NumericalError("l2_project: mass matrix factorization failed");
  return llt.solve(b);
}

} // namespace ltrb
