#include "ltrb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <utility>

namespace ltrb {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mesh_digest(const Mesh& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const int v = m.n_vertices();
  const int t = m.n_triangles();
  h = fnv1a(&v, sizeof v, h);
  h = fnv1a(&t, sizeof t, h);
  for (const auto& p : m.vertices) {
    double xy[2] = {p.x(), p.y()};
    h = fnv1a(xy, sizeof xy, h);
  }
  for (const auto& tri : m.triangles) h = fnv1a(tri.data(), sizeof(int) * 3, h);
  h = fnv1a(m.boundary.data(), m.boundary.size(), h);
  return h;
}

double signed_area2(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
}

double longest_edge(const Point2& a, const Point2& b, const Point2& c) {
  auto len = [](const Point2& p, const Point2& q) {
    const double dx = q.x() - p.x(), dy = q.y() - p.y();
    return std::sqrt(dx * dx + dy * dy);
  };
  return std::max({len(a, b), len(b, c), len(c, a)});
}

// Orientation fixup, conformity check, interior numbering, h, digest.
void finalize(Mesh& m) {
  const int nv = m.n_vertices();
  for (auto& tri : m.triangles) {
    for (int k : tri)
      if (k < 0 || k >= nv) throw MeshError("triangle references vertex " + std::to_string(k));
    const double a2 = signed_area2(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
    if (a2 == 0.0) throw MeshError("degenerate (zero-area) triangle");
    if (a2 < 0.0) std::swap(tri[1], tri[2]);
  }

  // every edge in 1 (boundary) or 2 triangles
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : m.triangles)
    for (int e = 0; e < 3; ++e) {
      int i = tri[e], j = tri[(e + 1) % 3];
      if (i > j) std::swap(i, j);
      ++edge_count[{i, j}];
    }
  for (const auto& [edge, count] : edge_count) {
    if (count > 2) throw MeshError("non-conforming mesh: edge shared by > 2 triangles");
    if (count == 1 && !(m.boundary[edge.first] && m.boundary[edge.second]))
      throw MeshError("boundary edge with unflagged vertex " +
                      std::to_string(m.boundary[edge.first] ? edge.second : edge.first));
  }

  m.interior_index.assign(nv, -1);
  int dof = 0;
  for (int v = 0; v < nv; ++v)
    if (!m.boundary[v]) m.interior_index[v] = dof++;
  m.n_dofs = dof;

  m.h = 0.0;
  for (const auto& tri : m.triangles)
    m.h = std::max(m.h, longest_edge(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]));

  m.hash = mesh_digest(m);
}

} // namespace

Mesh build_structured_mesh(int n, const Rect& domain) {
  if (n < 2) throw std::invalid_argument("build_structured_mesh: need n >= 2 cells per side");
  if (!(domain.x_max > domain.x_min) || !(domain.y_max > domain.y_min))
    throw std::invalid_argument("build_structured_mesh: empty domain");

  Mesh m;
  m.domain = domain;
  const double dx = (domain.x_max - domain.x_min) / n;
  const double dy = (domain.y_max - domain.y_min) / n;

  m.vertices.reserve((n + 1) * (n + 1));
  m.boundary.reserve((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      m.vertices.emplace_back(domain.x_min + j * dx, domain.y_min + i * dy);
      m.boundary.push_back(i == 0 || i == n || j == 0 || j == n);
    }

  auto vid = [n](int i, int j) { return i * (n + 1) + j; };
  m.triangles.reserve(2 * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // lower-left to upper-right diagonal, both triangles counterclockwise
      const int a = vid(i, j), b = vid(i, j + 1), c = vid(i + 1, j + 1), d = vid(i + 1, j);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }

  finalize(m);
  // closed-form cell diagonal; the edge-scan value agrees to rounding but
  // this form halves exactly under uniform refinement
  m.h = std::sqrt(dx * dx + dy * dy);
  return m;
}

QualityReport mesh_quality(const Mesh& m) {
  QualityReport q;
  q.h = m.h;
  q.n_triangles = m.n_triangles();
  q.n_dofs = m.n_dofs;

  double gamma = 0.0, h_min = std::numeric_limits<double>::max();
  for (const auto& tri : m.triangles) {
    const Point2 &a = m.vertices[tri[0]], &b = m.vertices[tri[1]], &c = m.vertices[tri[2]];
    const double area = 0.5 * signed_area2(a, b, c);
    if (area <= 0.0) throw MeshError("degenerate (zero-area) triangle");
    const double per = (b - a).norm() + (c - b).norm() + (a - c).norm();
    const double rho = 4.0 * area / per;  // inscribed-circle diameter
    const double hk = longest_edge(a, b, c);
    gamma = std::max(gamma, hk / rho);
    h_min = std::min(h_min, hk);
  }
  q.gamma = gamma;
  q.c_qu = m.h / h_min;
  return q;
}

Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);

  int nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1)
    throw MeshError("bad mesh header in " + path);

  Mesh m;
  m.vertices.resize(nv);
  m.boundary.resize(nv);
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  for (int v = 0; v < nv; ++v) {
    double x, y;
    int b;
    if (!(in >> x >> y >> b)) throw MeshError("truncated vertex list in " + path);
    m.vertices[v] = Point2(x, y);
    m.boundary[v] = (b != 0);
    if (v == 0) {
      x_min = x_max = x;
      y_min = y_max = y;
    } else {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  m.domain = Rect{x_min, x_max, y_min, y_max};
  m.triangles.resize(nt);
  for (int t = 0; t < nt; ++t) {
    int i, j, k;
    if (!(in >> i >> j >> k)) throw MeshError("truncated triangle list in " + path);
    m.triangles[t] = {i, j, k};
  }

  finalize(m);
  return m;
}

void write_mesh_text(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file: " + path);
  out << m.n_vertices() << ' ' << m.n_triangles() << '\n';
  char buf[80];
  for (int v = 0; v < m.n_vertices(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", m.vertices[v].x(), m.vertices[v].y(),
                  m.boundary[v] ? 1 : 0);
    out << buf;
  }
  for (const auto& tri : m.triangles) out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
}

} // namespace ltrb
