#pragma once

#include <functional>
#include <span>
#include <vector>

#include "uhlab/mesh.hpp"

namespace uhlab {

// vertex-major nodal field: values[v * components + alpha]
struct NodalField {
  int components = 1;
  std::vector<double> values;
};

// Cell kernels used by the solver. The unqualified versions run the per-cell
// work OpenMP-parallel and fold reductions serially in cell order, so every
// result is bitwise-identical for any thread count; uhlab::ref holds the
// plain serial implementations kept as the reference for tests and the
// benchmark.

// per-cell constant P1 gradients, components x dim row-major per cell
void cell_gradients(const Mesh& mesh, const NodalField& u, std::vector<double>& grads);

// max over cells of the Frobenius norm of the gradient block
double max_gradient_norm(std::span<const double> grads, int components, int dim);

// sum of value_c * |T_c|
double integrate_cellwise(const Mesh& mesh, std::span<const double> cell_values);

// lumped vertex quadrature: sum of mass_v * value_v
double vertex_quadrature(const Mesh& mesh, std::span<const double> vertex_values);

// per-cell energy terms density(|G_c|) * |T_c|
void energy_terms(const Mesh& mesh, std::span<const double> grads, int components,
                  const std::function<double(double)>& density,
                  std::vector<double>& terms);

// per-cell flux residual blocks, (dim+1) x components row-major per cell:
//   block[j][alpha] = |T| a(|G|) (G row alpha) . grad(lambda_j)
void residual_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a, std::vector<double>& blocks);

// per-cell tangent blocks, ((dim+1) * components)^2 row-major per cell:
//   block[(j,alpha)][(l,beta)] = |T| [ a'(|G|)/|G| (G_alpha.g_j)(G_beta.g_l)
//                                      + a(|G|) delta_{alpha beta} g_j.g_l ]
void jacobian_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a,
                    const std::function<double(double)>& a_prime,
                    std::vector<double>& blocks);

namespace ref {

void cell_gradients(const Mesh& mesh, const NodalField& u, std::vector<double>& grads);
double max_gradient_norm(std::span<const double> grads, int components, int dim);
double integrate_cellwise(const Mesh& mesh, std::span<const double> cell_values);
double vertex_quadrature(const Mesh& mesh, std::span<const double> vertex_values);
void energy_terms(const Mesh& mesh, std::span<const double> grads, int components,
                  const std::function<double(double)>& density,
                  std::vector<double>& terms);
void residual_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a, std::vector<double>& blocks);
void jacobian_cells(const Mesh& mesh, std::span<const double> grads, int components,
                    const std::function<double(double)>& a,
                    const std::function<double(double)>& a_prime,
                    std::vector<double>& blocks);

} // namespace ref

} // namespace uhlab
