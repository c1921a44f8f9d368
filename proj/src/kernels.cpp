#include "uhlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "uhlab/parallel.hpp"

namespace uhlab {

namespace {

// Coefficient evaluations are floored away from zero so that a'(r)/r stays
// finite; the rank-one term it multiplies carries (G . g)^2 <= r^2 |g|^2, so a
// degenerate gradient still contributes exactly zero.
constexpr double kGradFloor = 1e-120;

void one_cell_gradient(const Mesh& mesh, const double* values, int N, int c,
                       double* G) {
  const int dim = mesh.dim;
  const int* vs = mesh.cell(c);
  const double* g = mesh.basis_grad.data() + size_t(c) * (dim + 1) * dim;
  for (int a = 0; a < N; ++a)
    for (int k = 0; k < dim; ++k) {
      double s = 0;
      for (int j = 0; j <= dim; ++j) s += values[size_t(vs[j]) * N + a] * g[j * dim + k];
      G[a * dim + k] = s;
    }
}

double frobenius(const double* G, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += G[i] * G[i];
  return std::sqrt(s);
}

void one_cell_residual(const Mesh& mesh, const double* G, int N,
                       const std::function<double(double)>& a, int c, double* block) {
  const int dim = mesh.dim;
  const double* g = mesh.basis_grad.data() + size_t(c) * (dim + 1) * dim;
  const double w = mesh.cell_measure[c] * a(std::max(frobenius(G, N * dim), kGradFloor));
  for (int j = 0; j <= dim; ++j)
    for (int al = 0; al < N; ++al) {
      double dot = 0;
      for (int k = 0; k < dim; ++k) dot += G[al * dim + k] * g[j * dim + k];
      block[j * N + al] = w * dot;
    }
}

void one_cell_jacobian(const Mesh& mesh, const double* G, int N,
                       const std::function<double(double)>& a,
                       const std::function<double(double)>& a_prime, int c,
                       double* block) {
  const int dim = mesh.dim;
  const int nloc = (dim + 1) * N;
  const double* g = mesh.basis_grad.data() + size_t(c) * (dim + 1) * dim;
  const double r = std::max(frobenius(G, N * dim), kGradFloor);
  const double av = a(r);
  const double c1 = a_prime(r) / r;
  const double T = mesh.cell_measure[c];
  // dots[j][alpha] = G_alpha . grad(lambda_j)
  double dots[4 * 8];
  for (int j = 0; j <= dim; ++j)
    for (int al = 0; al < N; ++al) {
      double s = 0;
      for (int k = 0; k < dim; ++k) s += G[al * dim + k] * g[j * dim + k];
      dots[j * N + al] = s;
    }
  for (int j = 0; j <= dim; ++j)
    for (int al = 0; al < N; ++al)
      for (int l = 0; l <= dim; ++l)
        for (int be = 0; be < N; ++be) {
          double v = c1 * dots[j * N + al] * dots[l * N + be];
          if (al == be) {
            double gg = 0;
            for (int k = 0; k < dim; ++k) gg += g[j * dim + k] * g[l * dim + k];
            v += av * gg;
          }
          block[(j * N + al) * nloc + (l * N + be)] = T * v;
        }
}

void check_components(int N) {
  if (N < 1 || N > 8) throw std::invalid_argument("kernels: components must be in [1,8]");
}

} // namespace

void cell_gradients(const Mesh& mesh, const NodalField& u, std::vector<double>& grads) {
  check_components(u.components);
  if (int(u.values.size()) != mesh.vertex_count() * u.components)
    throw std::invalid_argument("kernels: field size does not match mesh");
  const int nc = mesh.cell_count(), N = u.components, dim = mesh.dim;
  grads.assign(size_t(nc) * N * dim, 0.0);
  parallel_for(nc, [&](int c) {
    one_cell_gradient(mesh, u.values.data(), N, c, grads.data() + size_t(c) * N * dim);
  });
}

double max_gradient_norm(std::span<const double> grads, int components, int dim) {
  check_components(components);
  const int stride = components * dim;
  if (stride == 0 || grads.size() % stride != 0)
    throw std::invalid_argument("kernels: gradient buffer not cell-strided");
  const int nc = int(grads.size()) / stride;
  std::vector<double> norms(nc);
  parallel_for(nc, [&](int c) { norms[c] = frobenius(grads.data() + size_t(c) * stride, stride); });
  double m = 0;
  for (double v : norms) m = std::max(m, v);
  return m;
}

double integrate_cellwise(const Mesh& mesh, std::span<const double> cell_values) {
  if (int(cell_values.size()) != mesh.cell_count())
    throw std::invalid_argument("kernels: cell value count does not match mesh");
  const int nc = mesh.cell_count();
  std::vector<double> terms(nc);
  parallel_for(nc, [&](int c) { terms[c] = cell_values[c] * mesh.cell_measure[c]; });
  double s = 0;
  for (double t : terms) s += t;
  return s;
}

double vertex_quadrature(const Mesh& mesh, std::span<const double> vertex_values) {
  if (int(vertex_values.size()) != mesh.vertex_count())
    throw std::invalid_argument("kernels: vertex value count does not match mesh");
  const int nv = mesh.vertex_count();
  std::vector<double> terms(nv);
  parallel_for(nv, [&](int v) { terms[v] = mesh.lumped_mass[v] * vertex_values[v]; });
  double s = 0;
  for (double t : terms) s += t;
  return s;
}

void energy_terms(const Mesh& mesh, std::span<const double> grads, int components,
                  const std::function<double(double)>& density,
                  std::vector<double>& terms) {
  check_components(components);
  const int nc = mesh.cell_count(), stride = components * mesh.dim;
  if (int(grads.size()) != nc * stride)
    throw std::invalid_argument("kernels: gradient buffer does not match mesh");
  terms.assign(nc, 0.0);
  parallel_for(nc, [&](int c) {
    terms[c] = density(frobenius(grads.data() + size_t(c) * stride, stride)) *
               mesh.cell_measure[c];
  });
}

void residual_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a, std::vector<double>& blocks) {
  check_components(components);
  const int nc = mesh.cell_count(), stride = components * mesh.dim;
  if (int(grads.size()) != nc * stride)
    throw std::invalid_argument("kernels: gradient buffer does not match mesh");
  const int bs = (mesh.dim + 1) * components;
  blocks.assign(size_t(nc) * bs, 0.0);
  parallel_for(nc, [&](int c) {
    one_cell_residual(mesh, grads.data() + size_t(c) * stride, components, a, c,
                      blocks.data() + size_t(c) * bs);
  });
}

void jacobian_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a,
                    const std::function<double(double)>& a_prime,
                    std::vector<double>& blocks) {
  check_components(components);
  const int nc = mesh.cell_count(), stride = components * mesh.dim;
  if (int(grads.size()) != nc * stride)
    throw std::invalid_argument("kernels: gradient buffer does not match mesh");
  const int bs = (mesh.dim + 1) * components;
  blocks.assign(size_t(nc) * bs * bs, 0.0);
  parallel_for(nc, [&](int c) {
    one_cell_jacobian(mesh, grads.data() + size_t(c) * stride, components, a, a_prime, c,
                      blocks.data() + size_t(c) * bs * bs);
  });
}

namespace ref {

void cell_gradients(const Mesh& mesh, const NodalField& u, std::vector<double>& grads) {
  check_components(u.components);
  if (int(u.values.size()) != mesh.vertex_count() * u.components)
    throw std::invalid_argument("kernels: field size does not match mesh");
  const int nc = mesh.cell_count(), N = u.components, dim = mesh.dim;
  grads.assign(size_t(nc) * N * dim, 0.0);
  for (int c = 0; c < nc; ++c)
    one_cell_gradient(mesh, u.values.data(), N, c, grads.data() + size_t(c) * N * dim);
}

double max_gradient_norm(std::span<const double> grads, int components, int dim) {
  check_components(components);
  const int stride = components * dim;
  if (stride == 0 || grads.size() % stride != 0)
    throw std::invalid_argument("kernels: gradient buffer not cell-strided");
  const int nc = int(grads.size()) / stride;
  double m = 0;
  for (int c = 0; c < nc; ++c)
    m = std::max(m, frobenius(grads.data() + size_t(c) * stride, stride));
  return m;
}

double integrate_cellwise(const Mesh& mesh, std::span<const double> cell_values) {
  if (int(cell_values.size()) != mesh.cell_count())
    throw std::invalid_argument("kernels: cell value count does not match mesh");
  double s = 0;
  for (int c = 0; c < mesh.cell_count(); ++c) s += cell_values[c] * mesh.cell_measure[c];
  return s;
}

double vertex_quadrature(const Mesh& mesh, std::span<const double> vertex_values) {
  if (int(vertex_values.size()) != mesh.vertex_count())
    throw std::invalid_argument("kernels: vertex value count does not match mesh");
  double s = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    s += mesh.lumped_mass[v] * vertex_values[v];
  return s;
}

void energy_terms(const Mesh& mesh, std::span<const double> grads, int components,
                  const std::function<double(double)>& density,
                  std::vector<double>& terms) {
  check_components(components);
  const int nc = mesh.cell_count(), stride = components * mesh.dim;
  if (int(grads.size()) != nc * stride)
    throw std::invalid_argument("kernels: gradient buffer does not match mesh");
  terms.assign(nc, 0.0);
  for (int c = 0; c < nc; ++c)
    terms[c] = density(frobenius(grads.data() + size_t(c) * stride, stride)) *
               mesh.cell_measure[c];
}

void residual_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a, std::vector<double>& blocks) {
  check_components(components);
  const int nc = mesh.cell_count(), stride = components * mesh.dim;
  if (int(grads.size()) != nc * stride)
    throw std::invalid_argument("kernels: gradient buffer does not match mesh");
  const int bs = (mesh.dim + 1) * components;
  blocks.assign(size_t(nc) * bs, 0.0);
  for (int c = 0; c < nc; ++c)
    one_cell_residual(mesh, grads.data() + size_t(c) * stride, components, a, c,
                      blocks.data() + size_t(c) * bs);
}

void jacobian_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a,
                    const std::function<double(double)>& a_prime,
                    std::vector<double>& blocks) {
  check_components(components);
  const int nc = mesh.cell_count(), stride = components * mesh.dim;
  if (int(grads.size()) != nc * stride)
    throw std::invalid_argument("kernels: gradient buffer does not match mesh");
  const int bs = (mesh.dim + 1) * components;
  blocks.assign(size_t(nc) * bs * bs, 0.0);
  for (int c = 0; c < nc; ++c)
    one_cell_jacobian(mesh, grads.data() + size_t(c) * stride, components, a, a_prime, c,
                      blocks.data() + size_t(c) * bs * bs);
}

} // namespace ref

} // namespace uhlab
