#pragma once

#include "ltrb/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ltrb {

struct Rect {
  double x_min = -0.5;
  double x_max = 0.5;
  double y_min = -0.5;
  double y_max = 0.5;
};

/// Conforming triangulation of a rectangle with homogeneous-Dirichlet
/// vertex labeling. Immutable after construction; interior vertices carry
/// the dof numbering 0..n_dofs-1.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary;       // per-vertex flag
  std::vector<int> interior_index;  // vertex id -> dof id, -1 on the boundary
  int n_dofs = 0;
  double h = 0.0;                   // max over triangles of the longest edge
  Rect domain;
  std::uint64_t hash = 0;           // digest of vertex/triangle arrays

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
};

struct QualityReport {
  double gamma = 0.0;  // shape regularity: max_K h_K / rho_K
  double c_qu = 0.0;   // quasi-uniformity: h / min_K h_K
  double h = 0.0;
  int n_triangles = 0;
  int n_dofs = 0;
};

/// Uniform n x n grid of square cells, each split along the lower-left to
/// upper-right diagonal. (n+1)^2 vertices, 2n^2 triangles, (n-1)^2 interior dofs.
Mesh build_structured_mesh(int n, const Rect& domain = Rect{});

QualityReport mesh_quality(const Mesh& m);

/// Text import: header `V T`, V lines `x y b` (b=1 boundary), T lines `i j k`
/// (0-based). Triangles with negative orientation are reordered; zero-area
/// triangles and non-conforming edge incidence are rejected.
Mesh read_mesh_text(const std::string& path);

void write_mesh_text(const Mesh& m, const std::string& path);

} // namespace ltrb
