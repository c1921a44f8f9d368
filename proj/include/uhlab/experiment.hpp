#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "uhlab/mesh.hpp"
#include "uhlab/nonlinearity.hpp"
#include "uhlab/solver.hpp"

namespace uhlab {

// Catalog of convex benchmark domains.
struct DomainSpec {
  enum class Kind { Disk, Square, Polygon, Box };
  Kind kind = Kind::Disk;
  double radius = 1.0;                          // disk
  double side = 1.0;                            // square
  std::vector<std::array<double, 2>> vertices;  // polygon
  double lx = 1, ly = 1, lz = 1;                // box

  static DomainSpec disk(double radius);
  static DomainSpec square(double side);
  static DomainSpec polygon(std::vector<std::array<double, 2>> vertices);
  static DomainSpec box(double lx, double ly, double lz);

  int dim() const { return kind == Kind::Box ? 3 : 2; }
  Mesh build(double h_target) const;
  std::string label() const;
};

// Built-in right-hand sides, sampled cellwise at centroids; every component
// carries the same scalar value. The cosine entry is balanced exactly on the
// mirror-symmetric structured grids, which is what makes it Neumann-admissible.
struct RhsSpec {
  enum class Kind { Constant, CosPiX, RadialBump };
  Kind kind = Kind::Constant;
  double amplitude = 1.0;
  double width = 0.5; // bump support radius around the mesh centroid

  static RhsSpec constant(double amplitude);
  static RhsSpec cos_pi_x(double amplitude);
  static RhsSpec radial_bump(double amplitude, double width);

  std::vector<double> cellwise(const Mesh& mesh, int components, double kappa) const;
  std::string label() const;
};

// effective radius of a 2D mesh: the radius of the disk with the same measure
double effective_radius(const Mesh& mesh);

// Closed-form grad_sup reference where one exists:
//  - Dirichlet, constant source, disk: the radial profile gives
//    b^{-1}(lambda r / n) at r = effective radius of the meshed polygon;
//  - Neumann, cos(pi x), p = 2, on the unit square or a box with unit x-side:
//    amplitude / pi.
std::optional<double> oracle_grad_sup(const DomainSpec& dom, const RhsSpec& rhs,
                                      double kappa, const NonlinearitySpec& spec,
                                      BoundaryCondition bc, const Mesh& mesh);

} // namespace uhlab
