#include "ltrb/mesh.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>

using namespace ltrb;

namespace {

std::string temp_path(const std::string& name) { return std::string(LTRB_BINARY_DIR) + "/" + name; }

int count_edges(const Mesh& m) {
  std::set<std::pair<int, int>> edges;
  for (const auto& tri : m.triangles)
    for (int e = 0; e < 3; ++e) {
      int i = tri[e], j = tri[(e + 1) % 3];
      if (i > j) std::swap(i, j);
      edges.insert({i, j});
    }
  return static_cast<int>(edges.size());
}

} // namespace

TEST_CASE("structured mesh: 2x2 counting") {
  const Mesh m = build_structured_mesh(2);
  CHECK(m.n_vertices() == 9);
  CHECK(m.n_triangles() == 8);
  CHECK(m.n_dofs == 1);
  CHECK(m.h == doctest::Approx(std::sqrt(2.0) * 0.5).epsilon(1e-14));
  // the single interior vertex is the center
  int interior = -1;
  for (int v = 0; v < m.n_vertices(); ++v)
    if (!m.boundary[v]) interior = v;
  CHECK(m.vertices[interior].norm() == doctest::Approx(0.0));
}

TEST_CASE("structured mesh: dof count at the reported discretization") {
  const Mesh m = build_structured_mesh(122);
  CHECK(m.n_dofs == 14641);
  CHECK(m.n_triangles() == 2 * 122 * 122);
}

TEST_CASE("structured mesh: counting, Euler formula, refinement") {
  for (int n : {2, 3, 4, 7, 10}) {
    const Mesh m = build_structured_mesh(n);
    CHECK(m.n_dofs == (n - 1) * (n - 1));
    CHECK(m.n_triangles() == 2 * n * n);
    CHECK(m.n_vertices() - count_edges(m) + m.n_triangles() == 1);

    const Mesh fine = build_structured_mesh(2 * n);
    CHECK(fine.h == m.h / 2.0);  // exact halving
  }
}

TEST_CASE("structured mesh: positive orientation by construction") {
  const Mesh m = build_structured_mesh(5, Rect{0.0, 2.0, -1.0, 0.5});
  for (const auto& tri : m.triangles) {
    const Point2 &a = m.vertices[tri[0]], &b = m.vertices[tri[1]], &c = m.vertices[tri[2]];
    CHECK((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()) > 0.0);
  }
}

TEST_CASE("structured mesh: invalid arguments") {
  CHECK_THROWS_AS(build_structured_mesh(1), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_mesh(4, Rect{1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("mesh quality: uniform right-isoceles split") {
  for (int n : {2, 8, 17}) {
    const auto q = mesh_quality(build_structured_mesh(n));
    CHECK(q.gamma == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(q.c_qu == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.n_dofs == (n - 1) * (n - 1));
  }
}

TEST_CASE("mesh quality: single equilateral triangle vs inradius formula") {
  const std::string path = temp_path("equilateral.txt");
  {
    std::ofstream out(path);
    out << "3 1\n";
    out << "0 0 1\n1 0 1\n" << std::setprecision(17) << "0.5 " << std::sqrt(3.0) / 2.0
        << " 1\n";
    out << "0 1 2\n";
  }
  const Mesh m = read_mesh_text(path);
  const auto q = mesh_quality(m);

  // independent route: rho = 2 r with r = area / semiperimeter
  const double area = std::sqrt(3.0) / 4.0;
  const double rho = 2.0 * area / 1.5;
  CHECK(q.gamma == doctest::Approx(1.0 / rho).epsilon(1e-12));
  CHECK(q.c_qu == doctest::Approx(1.0));
  CHECK(m.n_dofs == 0);
}

TEST_CASE("mesh import: degenerate triangle rejected") {
  const std::string path = temp_path("degenerate.txt");
  {
    std::ofstream out(path);
    out << "3 1\n0 0 1\n1 1 1\n2 2 1\n0 1 2\n";
  }
  CHECK_THROWS_AS(read_mesh_text(path), MeshError);
}

TEST_CASE("mesh import: over-shared edge rejected") {
  const std::string ok_path = temp_path("conforming.txt");
  {
    std::ofstream out(ok_path);
    out << "5 3\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n-1 0.5 1\n";
    out << "0 1 2\n1 3 2\n0 2 4\n";
  }
  CHECK(read_mesh_text(ok_path).n_triangles() == 3);

  const std::string bad = temp_path("nonconforming.txt");
  {
    std::ofstream out(bad);
    out << "6 4\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n-1 0.5 1\n-0.5 -1 1\n";
    out << "0 1 2\n1 3 2\n0 2 4\n0 2 5\n";  // edge (0,2) in three triangles
  }
  CHECK_THROWS_AS(read_mesh_text(bad), MeshError);
}

TEST_CASE("mesh import: negative orientation is normalized") {
  const std::string path = temp_path("flipped.txt");
  {
    std::ofstream out(path);
    out << "4 2\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n";
    out << "0 2 1\n0 2 3\n";  // first triangle clockwise
  }
  const Mesh m = read_mesh_text(path);
  for (const auto& tri : m.triangles) {
    const Point2 &a = m.vertices[tri[0]], &b = m.vertices[tri[1]], &c = m.vertices[tri[2]];
    CHECK((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()) > 0.0);
  }
}

TEST_CASE("mesh text round trip preserves the digest") {
  const Mesh m = build_structured_mesh(5);
  const std::string path = temp_path("roundtrip.txt");
  write_mesh_text(m, path);
  const Mesh back = read_mesh_text(path);
  CHECK(back.hash == m.hash);
  CHECK(back.n_dofs == m.n_dofs);
  CHECK(back.h == doctest::Approx(m.h).epsilon(1e-15));
}

TEST_CASE("meshes differing in one coordinate hash differently") {
  const Mesh a = build_structured_mesh(4);
  const Mesh b = build_structured_mesh(4, Rect{-0.5, 0.5, -0.5, 0.5000001});
  CHECK(a.hash != b.hash);
}
