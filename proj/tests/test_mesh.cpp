#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "uhlab/mesh.hpp"

using namespace uhlab;

namespace {

double lumped_sum(const Mesh& m) {
  double s = 0;
  for (double w : m.lumped_mass) s += w;
  return s;
}

// gradient of the nodal interpolant of an affine field on one cell
std::array<double, 3> cell_gradient_of(const Mesh& m, int c,
                                       const std::vector<double>& u) {
  std::array<double, 3> g{0, 0, 0};
  const int nv = m.dim + 1;
  for (int j = 0; j < nv; ++j) {
    const double uj = u[m.cell(c)[j]];
    for (int k = 0; k < m.dim; ++k)
      g[k] += uj * m.basis_grad[(size_t(c) * nv + j) * m.dim + k];
  }
  return g;
}

} // namespace

TEST_CASE("structured unit square: exact measure, flagged boundary") {
  const Mesh m = rect_mesh(1.0, 1.0, 0.5);
  CHECK(m.dim == 2);
  CHECK(m.total_measure == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lumped_sum(m) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.h_max <= 0.5 * 1.0001);
  int interior = 0;
  for (int v = 0; v < m.vertex_count(); ++v) {
    const double* x = m.vertex(v);
    const bool on_edge = x[0] == 0.0 || x[1] == 0.0 ||
                         std::fabs(x[0] - 1.0) < 1e-14 ||
                         std::fabs(x[1] - 1.0) < 1e-14;
    CHECK(bool(m.boundary_vertex[v]) == on_edge);
    interior += m.boundary_vertex[v] ? 0 : 1;
  }
  CHECK(interior > 0);
  for (double a : m.cell_measure) CHECK(a > 0.0);
}

TEST_CASE("single-triangle fast path") {
  const Mesh m = triangulate_convex_polygon({{0, 0}, {1, 0}, {0, 1}}, 10.0);
  CHECK(m.cell_count() == 1);
  CHECK(m.vertex_count() == 3);
  CHECK(m.cell_measure[0] == 0.5);
  CHECK(m.total_measure == 0.5);
  for (char b : m.boundary_vertex) CHECK(b == 1);
}

TEST_CASE("degenerate polygons are rejected") {
  CHECK_THROWS_AS(triangulate_convex_polygon({{0, 0}, {1, 0}, {2, 0}}, 0.5),
                  std::invalid_argument);
  // clockwise ordering
  CHECK_THROWS_AS(triangulate_convex_polygon({{0, 0}, {0, 1}, {1, 0}}, 0.5),
                  std::invalid_argument);
  // reflex vertex
  CHECK_THROWS_AS(triangulate_convex_polygon(
                      {{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("hexagon triangulation preserves the polygon measure") {
  std::vector<std::array<double, 2>> hex;
  for (int k = 0; k < 6; ++k)
    hex.push_back({std::cos(k * 3.141592653589793 / 3.0),
                   std::sin(k * 3.141592653589793 / 3.0)});
  const double area = 3.0 * std::sqrt(3.0) / 2.0;
  CHECK(polygon_area(hex) == doctest::Approx(area).epsilon(1e-14));
  for (double h : {0.8, 0.4, 0.2}) {
    const Mesh m = triangulate_convex_polygon(hex, h);
    CHECK(m.total_measure == doctest::Approx(area).epsilon(1e-12));
    CHECK(m.h_max <= h * 1.0001);
    CHECK(lumped_sum(m) == doctest::Approx(area).epsilon(1e-12));
  }
}

TEST_CASE("disk meshes: inscribed polygon measure, approach to pi, scaling") {
  double prev = 0.0;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    const Mesh m = disk_mesh(1.0, h);
    const int sides = std::max<int>(6, std::lround(2.0 * 3.141592653589793 / h));
    const double poly = 0.5 * sides * std::sin(2.0 * 3.141592653589793 / sides);
    CHECK(m.total_measure == doctest::Approx(poly).epsilon(1e-12));
    CHECK(m.total_measure > prev); // monotone approach to pi from inscribed polygons
    CHECK(m.total_measure < 3.141592653589793);
    prev = m.total_measure;
  }
  // same side count, doubled radius: measure scales by 4
  const Mesh small = disk_mesh(1.0, 0.2);
  const Mesh big = disk_mesh(2.0, 0.4);
  CHECK(big.total_measure == doctest::Approx(4.0 * small.total_measure).epsilon(1e-12));
}

TEST_CASE("disk at h=0.05 has the expected refinement order") {
  // the diameter guarantee h_max <= h makes the mean edge ~ 0.7 h, so the
  // count sits above the ideal-packing figure 2 pi / (sqrt(3)/4 h^2) ~ 2.9k
  const Mesh m = disk_mesh(1.0, 0.05);
  CHECK(m.cell_count() >= 2500);
  CHECK(m.cell_count() <= 9000);
  CHECK(m.h_max <= 0.05 * 1.0001);
}

TEST_CASE("hat-function gradients reproduce affine fields exactly") {
  const Mesh m = triangulate_convex_polygon(
      {{0, 0}, {1.3, 0.1}, {1.7, 1.2}, {0.4, 1.6}}, 0.3);
  std::vector<double> u(m.vertex_count());
  for (int v = 0; v < m.vertex_count(); ++v) {
    const double* x = m.vertex(v);
    u[v] = 0.7 - 1.9 * x[0] + 0.6 * x[1];
  }
  for (int c = 0; c < m.cell_count(); ++c) {
    const auto g = cell_gradient_of(m, c, u);
    CHECK(g[0] == doctest::Approx(-1.9).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(0.6).epsilon(1e-12));
  }
}

TEST_CASE("box mesh: six tetrahedra per cube, exact measure, 3D affine gradients") {
  const Mesh m = box_mesh(1.0, 1.0, 1.0, 0.5);
  CHECK(m.dim == 3);
  CHECK(m.cell_count() % 6 == 0);
  CHECK(m.total_measure == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lumped_sum(m) == doctest::Approx(1.0).epsilon(1e-12));
  for (double a : m.cell_measure) CHECK(a > 0.0);

  std::vector<double> u(m.vertex_count());
  for (int v = 0; v < m.vertex_count(); ++v) {
    const double* x = m.vertex(v);
    u[v] = 0.2 * x[0] - 0.5 * x[1] + 1.25 * x[2];
  }
  for (int c = 0; c < m.cell_count(); ++c) {
    const auto g = cell_gradient_of(m, c, u);
    CHECK(g[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(g[2] == doctest::Approx(1.25).epsilon(1e-12));
  }

  int interior = 0;
  for (int v = 0; v < m.vertex_count(); ++v)
    interior += m.boundary_vertex[v] ? 0 : 1;
  CHECK(interior > 0);
}

TEST_CASE("text round-trip is exact and hashes are stable") {
  const Mesh m = disk_mesh(1.0, 0.3);
  std::istringstream in(mesh_to_text(m));
  const Mesh back = mesh_from_text(in);
  CHECK(back.dim == m.dim);
  REQUIRE(back.coords.size() == m.coords.size());
  CHECK(std::memcmp(back.coords.data(), m.coords.data(),
                    m.coords.size() * sizeof(double)) == 0);
  CHECK(back.cells == m.cells);
  CHECK(back.boundary_vertex == m.boundary_vertex);
  CHECK(mesh_hash(back) == mesh_hash(m));
  CHECK(back.total_measure == doctest::Approx(m.total_measure).epsilon(1e-15));

  // an independently built identical mesh hashes identically
  CHECK(mesh_hash(disk_mesh(1.0, 0.3)) == mesh_hash(m));
  // a different mesh does not
  CHECK(mesh_hash(disk_mesh(1.0, 0.31)) != mesh_hash(m));
}

TEST_CASE("malformed mesh text is rejected") {
  std::istringstream bad("not-a-mesh\n");
  CHECK_THROWS(mesh_from_text(bad));
}
