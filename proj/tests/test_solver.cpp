#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "uhlab/experiment.hpp"
#include "uhlab/mesh.hpp"
#include "uhlab/nonlinearity.hpp"
#include "uhlab/solver.hpp"

using namespace uhlab;

namespace {

Problem make_problem(const Mesh& mesh, const NonlinearitySpec& spec,
                     const RhsSpec& rhs, BoundaryCondition bc, double kappa,
                     int components = 1) {
  Problem pb;
  pb.mesh = &mesh;
  pb.spec = &spec;
  pb.bc = bc;
  pb.components = components;
  pb.rhs_layout = RhsLayout::Cellwise;
  pb.rhs = rhs.cellwise(mesh, components, kappa);
  return pb;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b,
                    double scale_b = 1.0) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a[i] - scale_b * b[i]));
  return m;
}

double lumped_mean(const Mesh& mesh, const NodalField& u, int alpha) {
  double s = 0, w = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    s += mesh.lumped_mass[v] * u.values[size_t(v) * u.components + alpha];
    w += mesh.lumped_mass[v];
  }
  return s / w;
}

} // namespace

TEST_CASE("radial reference on the disk: constant source, three exponents") {
  const DomainSpec dom = DomainSpec::disk(1.0);
  const Mesh mesh = dom.build(0.12);
  const RhsSpec rhs = RhsSpec::constant(2.0);
  for (double p : {1.5, 2.0, 3.0}) {
    const NonlinearitySpec spec = NonlinearitySpec::power(p);
    const Problem pb = make_problem(mesh, spec, rhs, BoundaryCondition::Dirichlet, 1.0);
    const Solution sol = solve(pb);
    CHECK(sol.residual <= 1e-10);
    const auto reference =
        oracle_grad_sup(dom, rhs, 1.0, spec, BoundaryCondition::Dirichlet, mesh);
    REQUIRE(reference.has_value());
    CHECK(std::fabs(sol.grad_sup - *reference) / *reference < 0.08);
  }
}

TEST_CASE("residual normalization: the zero field scores exactly 1") {
  const Mesh mesh = disk_mesh(1.0, 0.3);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0);
  const std::vector<double> zeros(mesh.vertex_count(), 0.0);
  CHECK(residual_norm(pb, zeros, 1e-3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(residual_norm(pb, zeros, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scaling the source scales the solution by the homogeneity power") {
  const Mesh mesh = disk_mesh(1.0, 0.2);

  // p = 2: linear problem, u(2f) = 2 u(f)
  {
    const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
    const Solution s1 = solve(
        make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0));
    const Solution s2 = solve(
        make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 2.0));
    CHECK(max_abs_diff(s2.u.values, s1.u.values, 2.0) < 1e-9);
  }

  // p = 3: b(t) = t^2, u(4f) = 2 u(f); the unregularized polish makes the
  // discrete homogeneity exact up to solver tolerance
  {
    const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
    const Solution s1 = solve(
        make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0));
    const Solution s4 = solve(
        make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 4.0));
    CHECK(s1.eps_final == 0.0);
    CHECK(s4.eps_final == 0.0);
    double scale = 0;
    for (double v : s1.u.values) scale = std::max(scale, std::fabs(v));
    CHECK(max_abs_diff(s4.u.values, s1.u.values, 2.0) < 1e-6 * scale);
  }

  // p = 1.5: a is singular at zero, so the polish never runs and the last
  // regularized stage is the answer. Homogeneity still holds across two
  // decades of amplitude -- u(100 f) = 10^4 u(f) -- because the smoothing
  // width follows the data scale instead of sitting at a fixed absolute size.
  {
    const NonlinearitySpec spec = NonlinearitySpec::power(1.5);
    const Solution lo = solve(
        make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 0.1));
    const Solution hi = solve(
        make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 10.0));
    CHECK(lo.eps_final == 1e-6);
    CHECK(hi.eps_final == 1e-6);
    CHECK(hi.grad_sup / lo.grad_sup == doctest::Approx(1e4).epsilon(1e-3));
  }
}

TEST_CASE("the minimizer does not depend on the starting point") {
  const Mesh mesh = disk_mesh(1.0, 0.25);
  const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(2.0), BoundaryCondition::Dirichlet, 1.0);
  const Solution base = solve(pb);

  SolveOptions opts;
  opts.initial.resize(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v)
    opts.initial[v] = 0.3 * std::sin(7.0 * v + 0.4);
  const Solution warm = solve(pb, opts);
  CHECK(max_abs_diff(base.u.values, warm.u.values) < 1e-7);
}

TEST_CASE("the discrete objective is convex and zero at the origin") {
  const Mesh mesh = disk_mesh(1.0, 0.35);
  const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0);

  const std::vector<double> zeros(mesh.vertex_count(), 0.0);
  CHECK(assemble_energy(pb, zeros) == 0.0);

  std::vector<double> u0(mesh.vertex_count()), u1(mesh.vertex_count()),
      mid(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    u0[v] = 0.4 * std::sin(3.0 * v);
    u1[v] = 0.5 * std::cos(2.0 * v + 1.0);
    mid[v] = 0.5 * (u0[v] + u1[v]);
  }
  const double j0 = assemble_energy(pb, u0);
  const double j1 = assemble_energy(pb, u1);
  const double jm = assemble_energy(pb, mid);
  CHECK(jm <= 0.5 * (j0 + j1) + 1e-12 * (1.0 + std::fabs(j0) + std::fabs(j1)));
}

TEST_CASE("flat field energy: quadratic growth with unit slope") {
  // p = 2, u = x on the unit square, f = 0: B(|grad u|) integrates to 1/2
  const Mesh mesh = rect_mesh(1.0, 1.0, 0.25);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  Problem pb;
  pb.mesh = &mesh;
  pb.spec = &spec;
  pb.bc = BoundaryCondition::Dirichlet;
  pb.rhs.assign(mesh.cell_count(), 0.0);
  std::vector<double> u(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) u[v] = mesh.vertex(v)[0];
  CHECK(assemble_energy(pb, u) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("every stage of the continuation decreases its objective") {
  const Mesh mesh = disk_mesh(1.0, 0.3);
  const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(2.0), BoundaryCondition::Dirichlet, 1.0);
  SolveOptions opts;
  opts.track_energy = true;
  const Solution sol = solve(pb, opts);
  REQUIRE(!sol.energy_history.empty());
  for (const auto& stage : sol.energy_history) {
    for (size_t k = 1; k < stage.size(); ++k) {
      const double slack = 1e-12 * (1.0 + std::fabs(stage[k - 1]));
      CHECK(stage[k] <= stage[k - 1] + slack);
    }
  }
}

TEST_CASE("the residual responds smoothly to small perturbations") {
  const Mesh mesh = disk_mesh(1.0, 0.25);
  const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0);
  const Solution sol = solve(pb);
  CHECK(sol.residual <= 1e-10);

  std::vector<double> u = sol.u.values;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (!mesh.boundary_vertex[v]) u[v] += 1e-6 * std::sin(11.0 * v);
  const double r = residual_norm(pb, u, sol.eps_final);
  CHECK(r > sol.residual);
  CHECK(r < 1e-3);
}

TEST_CASE("Neumann data must balance") {
  const Mesh mesh = rect_mesh(1.0, 1.0, 0.25);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Neumann, 1.0);
  CHECK_THROWS_AS(check_neumann_compatibility(pb), std::invalid_argument);
  CHECK_THROWS_AS(solve(pb), std::invalid_argument);
}

TEST_CASE("balanced Neumann problem: zero mean, reference slope") {
  const DomainSpec dom = DomainSpec::square(1.0);
  const Mesh mesh = dom.build(0.1);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  const RhsSpec rhs = RhsSpec::cos_pi_x(1.0);
  const Problem pb = make_problem(mesh, spec, rhs, BoundaryCondition::Neumann, 1.0);
  const Solution sol = solve(pb);
  CHECK(sol.residual <= 1e-10);

  double umax = 0;
  for (double v : sol.u.values) umax = std::max(umax, std::fabs(v));
  CHECK(std::fabs(lumped_mean(mesh, sol.u, 0)) <= 1e-12 * std::max(1.0, umax));

  const auto reference =
      oracle_grad_sup(dom, rhs, 1.0, spec, BoundaryCondition::Neumann, mesh);
  REQUIRE(reference.has_value());
  CHECK(*reference == doctest::Approx(1.0 / 3.141592653589793).epsilon(1e-15));
  CHECK(std::fabs(sol.grad_sup - *reference) / *reference < 0.02);
}

TEST_CASE("a linear system decouples over components") {
  const Mesh mesh = disk_mesh(1.0, 0.3);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  Problem pb;
  pb.mesh = &mesh;
  pb.spec = &spec;
  pb.bc = BoundaryCondition::Dirichlet;
  pb.components = 2;
  pb.rhs.resize(size_t(mesh.cell_count()) * 2);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    pb.rhs[2 * c] = 1.0;
    pb.rhs[2 * c + 1] = -3.0;
  }
  const Solution sol = solve(pb);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    CHECK(sol.u.values[2 * v + 1] ==
          doctest::Approx(-3.0 * sol.u.values[2 * v]).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("three dimensions: balanced cosine load on the unit box") {
  const DomainSpec dom = DomainSpec::box(1.0, 1.0, 1.0);
  const Mesh mesh = dom.build(0.25);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  const RhsSpec rhs = RhsSpec::cos_pi_x(1.0);
  const Problem pb = make_problem(mesh, spec, rhs, BoundaryCondition::Neumann, 1.0);
  const Solution sol = solve(pb);
  CHECK(sol.residual <= 1e-10);
  const auto reference =
      oracle_grad_sup(dom, rhs, 1.0, spec, BoundaryCondition::Neumann, mesh);
  REQUIRE(reference.has_value());
  CHECK(std::fabs(sol.grad_sup - *reference) / *reference < 0.1);
}

TEST_CASE("Dirichlet solutions vanish on the boundary") {
  const Mesh mesh = disk_mesh(1.0, 0.3);
  const NonlinearitySpec spec = NonlinearitySpec::power(1.5);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0);
  const Solution sol = solve(pb);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (mesh.boundary_vertex[v]) CHECK(sol.u.values[v] == 0.0);
}

TEST_CASE("resolving the mesh shrinks the reference error") {
  const DomainSpec dom = DomainSpec::disk(1.0);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  const RhsSpec rhs = RhsSpec::constant(2.0);
  double err_coarse = 0, err_fine = 0;
  for (double h : {0.3, 0.15}) {
    const Mesh mesh = dom.build(h);
    const Problem pb = make_problem(mesh, spec, rhs, BoundaryCondition::Dirichlet, 1.0);
    const Solution sol = solve(pb);
    const auto reference =
        oracle_grad_sup(dom, rhs, 1.0, spec, BoundaryCondition::Dirichlet, mesh);
    REQUIRE(reference.has_value());
    (h == 0.3 ? err_coarse : err_fine) = std::fabs(sol.grad_sup - *reference);
  }
  CHECK(err_fine < err_coarse);
}

TEST_CASE("solution text round-trip") {
  const Mesh mesh = disk_mesh(1.0, 0.4);
  const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
  const Problem pb =
      make_problem(mesh, spec, RhsSpec::constant(1.0), BoundaryCondition::Dirichlet, 1.0);
  const Solution sol = solve(pb);

  std::istringstream in(solution_to_text(mesh, sol));
  const SolutionRecord rec = solution_from_text(in);
  CHECK(rec.mesh_hash == mesh_hash(mesh));
  CHECK(rec.u.components == sol.u.components);
  REQUIRE(rec.u.values.size() == sol.u.values.size());
  CHECK(std::memcmp(rec.u.values.data(), sol.u.values.data(),
                    sol.u.values.size() * sizeof(double)) == 0);
  CHECK(rec.grad_sup == sol.grad_sup);
  CHECK(rec.energy == sol.energy);
  CHECK(rec.residual == sol.residual);
  CHECK(rec.eps_final == sol.eps_final);
  CHECK(rec.iterations == sol.newton_iterations);

  std::istringstream bad("wrong\n");
  CHECK_THROWS(solution_from_text(bad));
}
