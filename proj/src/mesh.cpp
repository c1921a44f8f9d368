#include "uhlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace uhlab {

namespace {

double dist(const double* a, const double* b, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

void append_double(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

} // namespace

void Mesh::centroid(int c, double* out) const {
  const int* vs = cell(c);
  for (int k = 0; k < dim; ++k) out[k] = 0;
  for (int j = 0; j <= dim; ++j)
    for (int k = 0; k < dim; ++k) out[k] += vertex(vs[j])[k];
  for (int k = 0; k < dim; ++k) out[k] /= dim + 1;
}

void Mesh::finalize() {
  if (dim != 2 && dim != 3) throw std::runtime_error("mesh: dim must be 2 or 3");
  if (coords.size() % dim != 0) throw std::runtime_error("mesh: coords not dim-strided");
  if (cells.size() % (dim + 1) != 0) throw std::runtime_error("mesh: cells not (dim+1)-strided");
  const int nv = vertex_count(), nc = cell_count();
  if (nv == 0 || nc == 0) throw std::runtime_error("mesh: empty");
  if (int(boundary_vertex.size()) != nv)
    throw std::runtime_error("mesh: boundary flags missing");
  for (int i : cells)
    if (i < 0 || i >= nv) throw std::runtime_error("mesh: cell vertex index out of range");

  cell_measure.assign(nc, 0.0);
  basis_grad.assign(size_t(nc) * (dim + 1) * dim, 0.0);
  lumped_mass.assign(nv, 0.0);
  long double total = 0;
  h_max = 0;

  for (int c = 0; c < nc; ++c) {
    const int* vs = cell(c);
    double* g = basis_grad.data() + size_t(c) * (dim + 1) * dim;
    if (dim == 2) {
      const double* p0 = vertex(vs[0]);
      const double* p1 = vertex(vs[1]);
      const double* p2 = vertex(vs[2]);
      const double e1x = p1[0] - p0[0], e1y = p1[1] - p0[1];
      const double e2x = p2[0] - p0[0], e2y = p2[1] - p0[1];
      const double det = e1x * e2y - e1y * e2x;
      if (!(det > 0))
        throw std::runtime_error("mesh: degenerate or negatively oriented triangle");
      cell_measure[c] = det / 2;
      // barycentric gradients: lambda1 = cross(x-p0, e2)/det, lambda2 = cross(e1, x-p0)/det
      g[1 * 2 + 0] = e2y / det;
      g[1 * 2 + 1] = -e2x / det;
      g[2 * 2 + 0] = -e1y / det;
      g[2 * 2 + 1] = e1x / det;
      g[0] = -g[2] - g[4];
      g[1] = -g[3] - g[5];
    } else {
      const double* p0 = vertex(vs[0]);
      double E[3][3]; // columns e1,e2,e3
      for (int j = 0; j < 3; ++j) {
        const double* pj = vertex(vs[j + 1]);
        for (int k = 0; k < 3; ++k) E[k][j] = pj[k] - p0[k];
      }
      const double det = E[0][0] * (E[1][1] * E[2][2] - E[1][2] * E[2][1]) -
                         E[0][1] * (E[1][0] * E[2][2] - E[1][2] * E[2][0]) +
                         E[0][2] * (E[1][0] * E[2][1] - E[1][1] * E[2][0]);
      if (!(det > 0))
        throw std::runtime_error("mesh: degenerate or negatively oriented tetrahedron");
      cell_measure[c] = det / 6;
      // rows of E^{-1} are the gradients of lambda1..lambda3
      const double inv[3][3] = {
          {(E[1][1] * E[2][2] - E[1][2] * E[2][1]) / det,
           (E[0][2] * E[2][1] - E[0][1] * E[2][2]) / det,
           (E[0][1] * E[1][2] - E[0][2] * E[1][1]) / det},
          {(E[1][2] * E[2][0] - E[1][0] * E[2][2]) / det,
           (E[0][0] * E[2][2] - E[0][2] * E[2][0]) / det,
           (E[0][2] * E[1][0] - E[0][0] * E[1][2]) / det},
          {(E[1][0] * E[2][1] - E[1][1] * E[2][0]) / det,
           (E[0][1] * E[2][0] - E[0][0] * E[2][1]) / det,
           (E[0][0] * E[1][1] - E[0][1] * E[1][0]) / det}};
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) g[(j + 1) * 3 + k] = inv[j][k];
      for (int k = 0; k < 3; ++k) g[k] = -g[3 + k] - g[6 + k] - g[9 + k];
    }
    total += cell_measure[c];
    for (int j = 0; j <= dim; ++j) lumped_mass[vs[j]] += cell_measure[c] / (dim + 1);
    for (int j = 0; j <= dim; ++j)
      for (int l = j + 1; l <= dim; ++l)
        h_max = std::max(h_max, dist(vertex(vs[j]), vertex(vs[l]), dim));
  }
  total_measure = double(total);
}

double polygon_area(const std::vector<std::array<double, 2>>& poly) {
  const size_t n = poly.size();
  double s = 0;
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    s += p[0] * q[1] - p[1] * q[0];
  }
  return s / 2;
}

namespace {

// arclength-equidistant resampling of a closed polyline, first vertex kept
std::vector<std::array<double, 2>> resample_ring(
    const std::vector<std::array<double, 2>>& poly, int n) {
  const size_t m = poly.size();
  std::vector<double> acc(m + 1, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % m];
    acc[i + 1] = acc[i] + std::hypot(q[0] - p[0], q[1] - p[1]);
  }
  const double per = acc[m];
  std::vector<std::array<double, 2>> out(n);
  size_t seg = 0;
  for (int j = 0; j < n; ++j) {
    const double s = per * j / n;
    while (seg + 1 < m && acc[seg + 1] <= s) ++seg;
    const double len = acc[seg + 1] - acc[seg];
    const double t = len > 0 ? (s - acc[seg]) / len : 0.0;
    const auto& p = poly[seg];
    const auto& q = poly[(seg + 1) % m];
    out[j] = {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
  }
  return out;
}

// outermost ring: per-edge subdivision so every original vertex survives
std::vector<std::array<double, 2>> subdivide_boundary(
    const std::vector<std::array<double, 2>>& poly, double spacing) {
  std::vector<std::array<double, 2>> out;
  const size_t m = poly.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % m];
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    const int pieces = std::max(1, int(std::ceil(len / spacing)));
    for (int j = 0; j < pieces; ++j) {
      const double t = double(j) / pieces;
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return out;
}

// Stitch two concentric vertex rings (counter-clockwise around `c`) into
// triangles by merging their angular sequences with two pointers.
void stitch_rings(const std::vector<int>& inner, const std::vector<int>& outer,
                  const std::vector<double>& coords, const double c[2],
                  std::vector<int>& cells) {
  auto angle = [&](int v) { return std::atan2(coords[2 * v + 1] - c[1], coords[2 * v] - c[0]); };
  const int na = int(inner.size()), nb = int(outer.size());
  // unwrap both sequences to non-decreasing angles starting near inner[0]
  std::vector<double> alpha(na + 1), beta(nb + 1);
  alpha[0] = 0;
  const double a0 = angle(inner[0]);
  for (int i = 1; i <= na; ++i) {
    double d = angle(inner[i % na]) - angle(inner[(i - 1) % na]);
    while (d <= 0) d += 2 * M_PI;
    while (d > 2 * M_PI) d -= 2 * M_PI;
    alpha[i] = alpha[i - 1] + d;
  }
  int j0 = 0;
  double best = 1e300;
  for (int j = 0; j < nb; ++j) {
    double d = angle(outer[j]) - a0;
    while (d < 0) d += 2 * M_PI;
    if (d < best) { best = d; j0 = j; }
  }
  beta[0] = best;
  for (int j = 1; j <= nb; ++j) {
    double d = angle(outer[(j0 + j) % nb]) - angle(outer[(j0 + j - 1) % nb]);
    while (d <= 0) d += 2 * M_PI;
    while (d > 2 * M_PI) d -= 2 * M_PI;
    beta[j] = beta[j - 1] + d;
  }
  auto emit = [&](int u, int v, int w) {
    const double ux = coords[2 * u], uy = coords[2 * u + 1];
    const double vx = coords[2 * v], vy = coords[2 * v + 1];
    const double wx = coords[2 * w], wy = coords[2 * w + 1];
    const double det = (vx - ux) * (wy - uy) - (vy - uy) * (wx - ux);
    if (det >= 0) {
      cells.insert(cells.end(), {u, v, w});
    } else {
      cells.insert(cells.end(), {u, w, v});
    }
  };
  int i = 0, j = 0;
  while (i < na || j < nb) {
    const bool advance_inner =
        j >= nb || (i < na && alpha[i + 1] <= beta[j + 1]);
    if (advance_inner) {
      emit(inner[i % na], outer[(j0 + j) % nb], inner[(i + 1) % na]);
      ++i;
    } else {
      emit(inner[i % na], outer[(j0 + j) % nb], outer[(j0 + j + 1) % nb]);
      ++j;
    }
  }
}

Mesh build_rings(const std::vector<std::array<double, 2>>& poly, double spacing) {
  // area centroid
  const double area = polygon_area(poly);
  double cx = 0, cy = 0;
  const size_t m = poly.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % m];
    const double w = p[0] * q[1] - p[1] * q[0];
    cx += (p[0] + q[0]) * w;
    cy += (p[1] + q[1]) * w;
  }
  cx /= 6 * area;
  cy /= 6 * area;
  const double c[2] = {cx, cy};

  double d_max = 0;
  for (const auto& p : poly) d_max = std::max(d_max, std::hypot(p[0] - cx, p[1] - cy));
  const int K = std::max(1, int(std::ceil(d_max / spacing)));

  Mesh mesh;
  mesh.dim = 2;
  mesh.coords = {cx, cy};
  std::vector<int> prev_ring = {0};
  const auto outer_pts = subdivide_boundary(poly, spacing);
  for (int k = 1; k <= K; ++k) {
    std::vector<std::array<double, 2>> pts;
    if (k == K) {
      pts = outer_pts;
    } else {
      std::vector<std::array<double, 2>> shrunk(outer_pts.size());
      const double t = double(k) / K;
      for (size_t i = 0; i < outer_pts.size(); ++i)
        shrunk[i] = {cx + t * (outer_pts[i][0] - cx), cy + t * (outer_pts[i][1] - cy)};
      const int nk = std::max(4, int(std::lround(double(outer_pts.size()) * k / K)));
      pts = resample_ring(shrunk, nk);
    }
    std::vector<int> ring(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
      ring[i] = mesh.vertex_count();
      mesh.coords.push_back(pts[i][0]);
      mesh.coords.push_back(pts[i][1]);
    }
    if (k == 1 && prev_ring.size() == 1) {
      for (size_t i = 0; i < ring.size(); ++i)
        mesh.cells.insert(mesh.cells.end(),
                          {0, ring[i], ring[(i + 1) % ring.size()]});
    } else {
      stitch_rings(prev_ring, ring, mesh.coords, c, mesh.cells);
    }
    prev_ring = std::move(ring);
  }
  mesh.boundary_vertex.assign(mesh.vertex_count(), 0);
  for (int v : prev_ring) mesh.boundary_vertex[v] = 1;
  mesh.finalize();
  return mesh;
}

} // namespace

bool is_strictly_convex_ccw(const std::vector<std::array<double, 2>>& poly) {
  if (poly.size() < 3) return false;
  double scale = 0;
  for (const auto& p : poly) scale = std::max({scale, std::fabs(p[0]), std::fabs(p[1])});
  const size_t m = poly.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % m];
    const auto& d = poly[(i + 2) % m];
    const double cr = (b[0] - a[0]) * (d[1] - b[1]) - (b[1] - a[1]) * (d[0] - b[0]);
    if (!(cr > 1e-12 * scale * scale)) return false;
  }
  return true;
}

Mesh triangulate_convex_polygon(const std::vector<std::array<double, 2>>& poly,
                                double h_target) {
  if (poly.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  if (!(h_target > 0)) throw std::invalid_argument("h_target must be positive");
  if (!is_strictly_convex_ccw(poly))
    throw std::invalid_argument(
        "polygon must be strictly convex with counter-clockwise vertices");
  if (poly.size() == 3) {
    double longest = 0;
    for (int i = 0; i < 3; ++i)
      longest = std::max(longest, std::hypot(poly[(i + 1) % 3][0] - poly[i][0],
                                             poly[(i + 1) % 3][1] - poly[i][1]));
    if (longest <= h_target) {
      Mesh one;
      one.dim = 2;
      for (const auto& p : poly) {
        one.coords.push_back(p[0]);
        one.coords.push_back(p[1]);
      }
      one.cells = {0, 1, 2};
      one.boundary_vertex = {1, 1, 1};
      one.finalize();
      return one;
    }
  }
  const double area = polygon_area(poly);
  double spacing = h_target / 1.4;
  Mesh mesh;
  for (int attempt = 0;; ++attempt) {
    mesh = build_rings(poly, spacing);
    if (mesh.h_max <= h_target) break;
    if (attempt >= 5)
      throw std::runtime_error("convex triangulation failed to reach target diameter");
    spacing *= 0.85 * h_target / mesh.h_max;
  }
  if (std::fabs(mesh.total_measure - area) > 1e-12 * area)
    throw std::runtime_error("convex triangulation lost area");
  return mesh;
}

Mesh disk_mesh(double radius, double h_target) {
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  const int m = std::max<int>(6, int(std::lround(2 * M_PI * radius / h_target)));
  std::vector<std::array<double, 2>> poly(m);
  for (int i = 0; i < m; ++i) {
    const double th = 2 * M_PI * i / m;
    poly[i] = {radius * std::cos(th), radius * std::sin(th)};
  }
  return triangulate_convex_polygon(poly, h_target);
}

Mesh rect_mesh(double lx, double ly, double h_target) {
  if (!(lx > 0) || !(ly > 0)) throw std::invalid_argument("rectangle sides must be positive");
  if (!(h_target > 0)) throw std::invalid_argument("h_target must be positive");
  const double side = h_target / std::sqrt(2.0);
  const int nx = std::max(1, int(std::ceil(lx / side)));
  const int ny = std::max(1, int(std::ceil(ly / side)));
  Mesh mesh;
  mesh.dim = 2;
  mesh.coords.reserve(size_t(nx + 1) * (ny + 1) * 2);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      mesh.coords.push_back(lx * i / nx);
      mesh.coords.push_back(ly * j / ny);
    }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.cells.insert(mesh.cells.end(), {id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.cells.insert(mesh.cells.end(), {id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  mesh.boundary_vertex.assign(mesh.vertex_count(), 0);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i == 0 || i == nx || j == 0 || j == ny) mesh.boundary_vertex[id(i, j)] = 1;
  mesh.finalize();
  return mesh;
}

Mesh box_mesh(double lx, double ly, double lz, double h_target) {
  if (!(lx > 0) || !(ly > 0) || !(lz > 0))
    throw std::invalid_argument("box sides must be positive");
  if (!(h_target > 0)) throw std::invalid_argument("h_target must be positive");
  const double side = h_target / std::sqrt(3.0);
  const int nx = std::max(1, int(std::ceil(lx / side)));
  const int ny = std::max(1, int(std::ceil(ly / side)));
  const int nz = std::max(1, int(std::ceil(lz / side)));
  Mesh mesh;
  mesh.dim = 3;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        mesh.coords.push_back(lx * i / nx);
        mesh.coords.push_back(ly * j / ny);
        mesh.coords.push_back(lz * k / nz);
      }
  auto id = [nx, ny](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  // six tetrahedra per cube, one per axis permutation: 000 -> +e_a -> +e_b -> 111
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& perm : perms) {
          int off[3] = {0, 0, 0};
          int tet[4];
          tet[0] = id(i, j, k);
          for (int step = 0; step < 3; ++step) {
            off[perm[step]] = 1;
            tet[step + 1] = id(i + off[0], j + off[1], k + off[2]);
          }
          // orient positively
          double e[3][3];
          for (int s = 0; s < 3; ++s)
            for (int d = 0; d < 3; ++d)
              e[s][d] = mesh.coords[3 * tet[s + 1] + d] - mesh.coords[3 * tet[0] + d];
          const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                             e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                             e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
          if (det < 0) std::swap(tet[2], tet[3]);
          mesh.cells.insert(mesh.cells.end(), {tet[0], tet[1], tet[2], tet[3]});
        }
  mesh.boundary_vertex.assign(mesh.vertex_count(), 0);
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        if (i == 0 || i == nx || j == 0 || j == ny || k == 0 || k == nz)
          mesh.boundary_vertex[id(i, j, k)] = 1;
  mesh.finalize();
  return mesh;
}

std::string mesh_to_text(const Mesh& m) {
  std::string out = "simplex-mesh/1\n";
  out += "dim " + std::to_string(m.dim) + "\n";
  out += "vertices " + std::to_string(m.vertex_count()) + "\n";
  out += "cells " + std::to_string(m.cell_count()) + "\n";
  for (int v = 0; v < m.vertex_count(); ++v) {
    out += "v";
    for (int k = 0; k < m.dim; ++k) {
      out += ' ';
      append_double(out, m.vertex(v)[k]);
    }
    out += '\n';
  }
  for (int c = 0; c < m.cell_count(); ++c) {
    out += "c";
    for (int j = 0; j <= m.dim; ++j) out += ' ' + std::to_string(m.cell(c)[j]);
    out += '\n';
  }
  int nb = 0;
  for (char f : m.boundary_vertex) nb += f != 0;
  out += "boundary " + std::to_string(nb) + "\n";
  for (int v = 0; v < m.vertex_count(); ++v)
    if (m.boundary_vertex[v]) out += "b " + std::to_string(v) + "\n";
  return out;
}

Mesh mesh_from_text(std::istream& in) {
  auto fail = [](const std::string& what) -> std::runtime_error {
    return std::runtime_error("mesh text: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "simplex-mesh/1") throw fail("bad header");
  Mesh m;
  int nv = -1, nc = -1;
  {
    std::string tag;
    if (!(in >> tag >> m.dim) || tag != "dim" || (m.dim != 2 && m.dim != 3))
      throw fail("bad dim line");
    if (!(in >> tag >> nv) || tag != "vertices" || nv <= 0) throw fail("bad vertices line");
    if (!(in >> tag >> nc) || tag != "cells" || nc <= 0) throw fail("bad cells line");
  }
  m.coords.resize(size_t(nv) * m.dim);
  for (int v = 0; v < nv; ++v) {
    std::string tag;
    if (!(in >> tag) || tag != "v") throw fail("expected vertex line");
    for (int k = 0; k < m.dim; ++k)
      if (!(in >> m.coords[size_t(v) * m.dim + k])) throw fail("bad vertex coordinate");
  }
  m.cells.resize(size_t(nc) * (m.dim + 1));
  for (int c = 0; c < nc; ++c) {
    std::string tag;
    if (!(in >> tag) || tag != "c") throw fail("expected cell line");
    for (int j = 0; j <= m.dim; ++j)
      if (!(in >> m.cells[size_t(c) * (m.dim + 1) + j])) throw fail("bad cell index");
  }
  int nb = -1;
  {
    std::string tag;
    if (!(in >> tag >> nb) || tag != "boundary" || nb < 0) throw fail("bad boundary line");
  }
  m.boundary_vertex.assign(nv, 0);
  for (int i = 0; i < nb; ++i) {
    std::string tag;
    int v;
    if (!(in >> tag >> v) || tag != "b" || v < 0 || v >= nv) throw fail("bad boundary index");
    m.boundary_vertex[v] = 1;
  }
  m.finalize();
  return m;
}

uint64_t mesh_hash(const Mesh& m) {
  const std::string text = mesh_to_text(m);
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace uhlab
