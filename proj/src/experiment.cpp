#include "uhlab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace uhlab {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

} // namespace

DomainSpec DomainSpec::disk(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("domain: radius must be positive");
  DomainSpec d;
  d.kind = Kind::Disk;
  d.radius = radius;
  return d;
}

DomainSpec DomainSpec::square(double side) {
  if (!(side > 0)) throw std::invalid_argument("domain: side must be positive");
  DomainSpec d;
  d.kind = Kind::Square;
  d.side = side;
  return d;
}

DomainSpec DomainSpec::polygon(std::vector<std::array<double, 2>> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("domain: polygon needs 3+ vertices");
  if (!is_strictly_convex_ccw(vertices))
    throw std::invalid_argument(
        "domain: polygon must be strictly convex with counter-clockwise vertices");
  DomainSpec d;
  d.kind = Kind::Polygon;
  d.vertices = std::move(vertices);
  return d;
}

DomainSpec DomainSpec::box(double lx, double ly, double lz) {
  if (!(lx > 0) || !(ly > 0) || !(lz > 0))
    throw std::invalid_argument("domain: box sides must be positive");
  DomainSpec d;
  d.kind = Kind::Box;
  d.lx = lx;
  d.ly = ly;
  d.lz = lz;
  return d;
}

Mesh DomainSpec::build(double h_target) const {
  switch (kind) {
    case Kind::Disk: return disk_mesh(radius, h_target);
    case Kind::Square: return rect_mesh(side, side, h_target);
    case Kind::Polygon: return triangulate_convex_polygon(vertices, h_target);
    case Kind::Box: return box_mesh(lx, ly, lz, h_target);
  }
  throw std::logic_error("domain: unknown kind");
}

std::string DomainSpec::label() const {
  switch (kind) {
    case Kind::Disk: return "disk(r=" + fmt("%g", radius) + ")";
    case Kind::Square: return "square(s=" + fmt("%g", side) + ")";
    case Kind::Polygon: return "polygon(" + std::to_string(vertices.size()) + ")";
    case Kind::Box:
      return "box(" + fmt("%g", lx) + "x" + fmt("%g", ly) + "x" + fmt("%g", lz) + ")";
  }
  return "?";
}

RhsSpec RhsSpec::constant(double amplitude) {
  RhsSpec r;
  r.kind = Kind::Constant;
  r.amplitude = amplitude;
  return r;
}

RhsSpec RhsSpec::cos_pi_x(double amplitude) {
  RhsSpec r;
  r.kind = Kind::CosPiX;
  r.amplitude = amplitude;
  return r;
}

RhsSpec RhsSpec::radial_bump(double amplitude, double width) {
  if (!(width > 0)) throw std::invalid_argument("rhs: bump width must be positive");
  RhsSpec r;
  r.kind = Kind::RadialBump;
  r.amplitude = amplitude;
  r.width = width;
  return r;
}

std::vector<double> RhsSpec::cellwise(const Mesh& mesh, int components, double kappa) const {
  if (components < 1) throw std::invalid_argument("rhs: components must be positive");
  const int nc = mesh.cell_count(), dim = mesh.dim;
  std::vector<double> out(size_t(nc) * components);
  double center[3] = {0, 0, 0};
  if (kind == Kind::RadialBump) {
    // measure-weighted mesh centroid
    double c[3] = {0, 0, 0}, x[3];
    for (int cidx = 0; cidx < nc; ++cidx) {
      mesh.centroid(cidx, x);
      for (int k = 0; k < dim; ++k) c[k] += x[k] * mesh.cell_measure[cidx];
    }
    for (int k = 0; k < dim; ++k) center[k] = c[k] / mesh.total_measure;
  }
  double x[3];
  for (int c = 0; c < nc; ++c) {
    mesh.centroid(c, x);
    double v = 0;
    switch (kind) {
      case Kind::Constant: v = amplitude; break;
      case Kind::CosPiX: v = amplitude * std::cos(M_PI * x[0]); break;
      case Kind::RadialBump: {
        double r2 = 0;
        for (int k = 0; k < dim; ++k) r2 += (x[k] - center[k]) * (x[k] - center[k]);
        const double q = 1 - r2 / (width * width);
        v = q > 0 ? amplitude * q * q : 0.0;
        break;
      }
    }
    for (int a = 0; a < components; ++a) out[size_t(c) * components + a] = kappa * v;
  }
  return out;
}

std::string RhsSpec::label() const {
  switch (kind) {
    case Kind::Constant: return "const(" + fmt("%g", amplitude) + ")";
    case Kind::CosPiX: return "cos-pi-x(" + fmt("%g", amplitude) + ")";
    case Kind::RadialBump:
      return "bump(" + fmt("%g", amplitude) + ";w=" + fmt("%g", width) + ")";
  }
  return "?";
}

double effective_radius(const Mesh& mesh) {
  if (mesh.dim != 2) throw std::invalid_argument("effective radius is a 2D notion");
  return std::sqrt(mesh.total_measure / M_PI);
}

std::optional<double> oracle_grad_sup(const DomainSpec& dom, const RhsSpec& rhs,
                                      double kappa, const NonlinearitySpec& spec,
                                      BoundaryCondition bc, const Mesh& mesh) {
  const double amp = kappa * rhs.amplitude;
  if (dom.kind == DomainSpec::Kind::Disk && rhs.kind == RhsSpec::Kind::Constant &&
      bc == BoundaryCondition::Dirichlet && amp > 0) {
    // radial solution: |grad u|(r) = b^{-1}(lambda r / n)
    return spec.b_inverse(amp * effective_radius(mesh) / 2.0);
  }
  const bool unit_x =
      (dom.kind == DomainSpec::Kind::Square && dom.side == 1.0) ||
      (dom.kind == DomainSpec::Kind::Box && dom.lx == 1.0);
  if (unit_x && rhs.kind == RhsSpec::Kind::CosPiX && bc == BoundaryCondition::Neumann &&
      spec.is_power() && spec.power_exponent() == 2.0) {
    // separable solution u = amp cos(pi x)/pi^2
    return std::fabs(amp) / M_PI;
  }
  return std::nullopt;
}

} // namespace uhlab
