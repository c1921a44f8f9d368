#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uhlab {

// Conforming simplicial mesh (triangles in 2D, tetrahedra in 3D) with the P1
// geometry precomputed: positive cell measures, hat-function gradients,
// lumped vertex masses, max cell diameter.
struct Mesh {
  int dim = 2;
  std::vector<double> coords; // dim-strided vertex coordinates
  std::vector<int> cells;     // (dim+1)-strided vertex indices
  std::vector<char> boundary_vertex;

  // derived by finalize()
  std::vector<double> cell_measure;
  std::vector<double> basis_grad; // per cell: (dim+1) x dim row-major
  std::vector<double> lumped_mass;
  double total_measure = 0;
  double h_max = 0;

  int vertex_count() const { return int(coords.size()) / dim; }
  int cell_count() const { return int(cells.size()) / (dim + 1); }
  const double* vertex(int v) const { return coords.data() + size_t(v) * dim; }
  const int* cell(int c) const { return cells.data() + size_t(c) * (dim + 1); }
  void centroid(int c, double* out) const;
  void finalize(); // throws std::runtime_error on degenerate/negative cells
};

// shoelace area; positive for counter-clockwise order
double polygon_area(const std::vector<std::array<double, 2>>& poly);

// Conforming triangulation of a strictly convex counter-clockwise polygon
// with max cell diameter <= h_target. Construction: the boundary is
// arclength-resampled (original vertices kept), copies scaled toward the
// centroid form concentric rings, and adjacent rings are stitched by an
// angular two-pointer merge. Spacing is tightened and the mesh rebuilt if the
// measured diameter overshoots.
Mesh triangulate_convex_polygon(const std::vector<std::array<double, 2>>& poly,
                                double h_target);

// True when every consecutive vertex triple turns strictly left — the
// admissibility test behind triangulate_convex_polygon.
bool is_strictly_convex_ccw(const std::vector<std::array<double, 2>>& poly);

// Regular m-gon inscribed in the radius-R circle, m ~ 2 pi R / h_target; the
// polygon (not the disk) is the computational domain, so the measure is the
// polygon's.
Mesh disk_mesh(double radius, double h_target);

// Structured triangulation of [0,lx] x [0,ly] with one diagonal direction;
// the lower/upper triangle pairing is mirror-symmetric, which keeps midpoint
// discretizations of x-antisymmetric data exactly balanced.
Mesh rect_mesh(double lx, double ly, double h_target);

// Structured tetrahedralization of a box, six tetrahedra per cube.
Mesh box_mesh(double lx, double ly, double lz, double h_target);

// line-oriented text serialization (round-trip exact)
std::string mesh_to_text(const Mesh& m);
Mesh mesh_from_text(std::istream& in);
uint64_t mesh_hash(const Mesh& m); // FNV-1a over the canonical text

} // namespace uhlab
