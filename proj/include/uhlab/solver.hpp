#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uhlab/kernels.hpp"
#include "uhlab/mesh.hpp"
#include "uhlab/nonlinearity.hpp"
#include "uhlab/rearrangement.hpp"

namespace uhlab {

enum class BoundaryCondition { Dirichlet, Neumann };
enum class RhsLayout { Cellwise, Nodal };

// -div(a(|grad u|) grad u) = f on a simplicial mesh, P1 elements, one scalar
// coefficient coupling all components through the full gradient norm.
struct Problem {
  const Mesh* mesh = nullptr;
  const NonlinearitySpec* spec = nullptr;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  int components = 1;
  RhsLayout rhs_layout = RhsLayout::Cellwise;
  std::vector<double> rhs; // cellwise: cell*N+alpha; nodal: vertex*N+alpha
};

struct SolveOptions {
  // regularization continuation, each stage warm-started from the previous;
  // entries are dimensionless, measured against the data-derived slope scale
  std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double tol = 1e-10;  // on ||R|| / max(||load||, 1e-14)
  int max_newton = 60; // per continuation stage
  // final unregularized stage, attempted only for non-decreasing a and
  // rolled back if it fails to converge
  bool polish = true;
  bool track_energy = false;        // record objective values per stage (slow)
  std::vector<double> initial;      // optional warm start, vertex-major
};

struct Solution {
  NodalField u;
  double grad_sup = 0;   // max over cells of |grad u|_F
  double energy = 0;     // integral of B(|grad u|) minus load pairing
  double residual = 0;   // final normalized residual
  double eps_final = 0;  // 0 when the unregularized polish succeeded
  int newton_iterations = 0;
  std::vector<std::vector<double>> energy_history; // one sequence per stage
};

// Regularized continuation with damped Newton steps; the line search bisects
// the directional derivative of the stage objective, which is rigorous for
// the convex stage energies. Throws IterationError when a stage stalls,
// std::invalid_argument on malformed problems (including incompatible
// Neumann data).
Solution solve(const Problem& pb, const SolveOptions& opts = {});

// normalized residual of the eps-regularized discrete system at given nodal
// values, with the same data-derived smoothing scale solve() uses
// (eps = 0 evaluates the unregularized flux)
double residual_norm(const Problem& pb, const std::vector<double>& u_values, double eps);

// discrete objective with the true integrand: sum B(|G_c|)|T_c| - load . u
double assemble_energy(const Problem& pb, const std::vector<double>& u_values);

// consistent P1 load vector (vertex-major)
std::vector<double> assemble_load(const Problem& pb);

// throws std::invalid_argument when some component of the source has
// |integral| > 1e-10 * L1 norm (Neumann solvability)
void check_neumann_compatibility(const Problem& pb);

// cellwise magnitude of the source with cell measures, for rearrangement
// functionals; nodal sources are averaged over each cell before taking norms
MeasuredField rhs_magnitude_field(const Problem& pb);

// Solution serialization: nodal values plus the diagnostics and a hash of
// the mesh text the field lives on (round-trip exact).
struct SolutionRecord {
  uint64_t mesh_hash = 0;
  NodalField u;
  double grad_sup = 0;
  double energy = 0;
  double residual = 0;
  double eps_final = 0;
  int iterations = 0;
};

std::string solution_to_text(const Mesh& mesh, const Solution& sol);
SolutionRecord solution_from_text(std::istream& in);

} // namespace uhlab
