#include "uhlab/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <stdexcept>
#include <utility>

#include "uhlab/errors.hpp"
#include "uhlab/quadrature.hpp"

namespace uhlab {

namespace {

using Fn = std::function<double(double)>;
using SpMat = Eigen::SparseMatrix<double>;

void validate_problem(const Problem& pb) {
  if (!pb.mesh || !pb.spec)
    throw std::invalid_argument("solver: mesh and nonlinearity required");
  if (pb.mesh->cell_measure.empty())
    throw std::invalid_argument("solver: mesh not finalized");
  if (pb.components < 1 || pb.components > 8)
    throw std::invalid_argument("solver: components must be in [1,8]");
  const size_t want = pb.rhs_layout == RhsLayout::Cellwise
                          ? size_t(pb.mesh->cell_count()) * pb.components
                          : size_t(pb.mesh->vertex_count()) * pb.components;
  if (pb.rhs.size() != want)
    throw std::invalid_argument("solver: rhs size does not match layout");
  for (double v : pb.rhs)
    if (!std::isfinite(v)) throw std::invalid_argument("solver: rhs must be finite");
}

// Reduced nonlinear system: Dirichlet eliminates boundary dofs, Neumann keeps
// all dofs and augments the linear solves with one lumped-mass mean
// constraint per component (saddle system), which also keeps Newton steps
// exactly mean-free.
struct System {
  const Problem& pb;
  const Mesh& mesh;
  int N, nv, nc, dim, nloc;
  bool dirichlet;
  std::vector<int> red; // full dof -> reduced index, -1 when constrained
  int n_red = 0;
  int n_sys = 0; // linear system size incl. Neumann multipliers
  std::vector<double> load;
  double scale = 0;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::SparseLU<SpMat> lu;
  bool analyzed = false;

  explicit System(const Problem& p)
      : pb(p), mesh(*p.mesh), N(p.components), nv(mesh.vertex_count()),
        nc(mesh.cell_count()), dim(mesh.dim), nloc((dim + 1) * N),
        dirichlet(p.bc == BoundaryCondition::Dirichlet) {
    load = assemble_load(pb);
    red.assign(size_t(nv) * N, -1);
    if (dirichlet) {
      for (int v = 0; v < nv; ++v)
        if (!mesh.boundary_vertex[v])
          for (int a = 0; a < N; ++a) red[size_t(v) * N + a] = n_red++;
      if (n_red == 0) throw std::invalid_argument("solver: no interior vertices");
      n_sys = n_red;
    } else {
      for (int i = 0; i < nv * N; ++i) red[i] = i;
      n_red = nv * N;
      n_sys = n_red + N;
    }
    double s2 = 0;
    for (int i = 0; i < nv * N; ++i)
      if (red[i] >= 0) s2 += load[i] * load[i];
    scale = std::max(std::sqrt(s2), 1e-14);
  }

  Eigen::VectorXd residual(const NodalField& u, const Fn& a, std::vector<double>& grads,
                           std::vector<double>& blocks) const {
    cell_gradients(mesh, u, grads);
    residual_cells(mesh, grads, N, a, blocks);
    std::vector<double> full(size_t(nv) * N, 0.0);
    for (int c = 0; c < nc; ++c) {
      const int* vs = mesh.cell(c);
      const double* b = blocks.data() + size_t(c) * nloc;
      for (int j = 0; j <= dim; ++j)
        for (int al = 0; al < N; ++al) full[size_t(vs[j]) * N + al] += b[j * N + al];
    }
    Eigen::VectorXd r(n_red);
    for (int i = 0; i < nv * N; ++i)
      if (red[i] >= 0) r[red[i]] = full[i] - load[i];
    return r;
  }

  SpMat tangent(const NodalField& u, const Fn& a, const Fn& ap,
                std::vector<double>& grads, std::vector<double>& blocks) const {
    cell_gradients(mesh, u, grads);
    jacobian_cells(mesh, grads, N, a, ap, blocks);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(nc) * nloc * nloc + (dirichlet ? 0 : 2 * size_t(nv) * N));
    for (int c = 0; c < nc; ++c) {
      const int* vs = mesh.cell(c);
      const double* b = blocks.data() + size_t(c) * nloc * nloc;
      for (int j = 0; j <= dim; ++j)
        for (int al = 0; al < N; ++al) {
          const int row = red[size_t(vs[j]) * N + al];
          if (row < 0) continue;
          for (int l = 0; l <= dim; ++l)
            for (int be = 0; be < N; ++be) {
              const int col = red[size_t(vs[l]) * N + be];
              if (col >= 0)
                trip.emplace_back(row, col, b[(j * N + al) * nloc + (l * N + be)]);
            }
        }
    }
    if (!dirichlet)
      for (int v = 0; v < nv; ++v)
        for (int al = 0; al < N; ++al) {
          trip.emplace_back(v * N + al, n_red + al, mesh.lumped_mass[v]);
          trip.emplace_back(n_red + al, v * N + al, mesh.lumped_mass[v]);
        }
    SpMat K(n_sys, n_sys);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
  }

  Eigen::VectorXd newton_step(const SpMat& K, const Eigen::VectorXd& r) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_sys);
    rhs.head(n_red) = -r;
    Eigen::VectorXd d;
    if (dirichlet) {
      if (!analyzed) {
        ldlt.analyzePattern(K);
        analyzed = true;
      }
      ldlt.factorize(K);
      if (ldlt.info() != Eigen::Success)
        throw IterationError("tangent factorization failed", r.norm(), 0);
      d = ldlt.solve(rhs);
    } else {
      if (!analyzed) {
        lu.analyzePattern(K);
        analyzed = true;
      }
      lu.factorize(K);
      if (lu.info() != Eigen::Success)
        throw IterationError("saddle factorization failed", r.norm(), 0);
      d = lu.solve(rhs);
    }
    Eigen::VectorXd out = d.head(n_red);
    if (!out.allFinite())
      throw IterationError("linear solve produced a non-finite step", r.norm(), 0);
    return out;
  }

  void apply_step(NodalField& u, const Eigen::VectorXd& d, double s) const {
    for (int i = 0; i < nv * N; ++i)
      if (red[i] >= 0) u.values[i] += s * d[red[i]];
  }

  void project_means(NodalField& u) const {
    if (dirichlet) return;
    for (int al = 0; al < N; ++al) {
      double m = 0;
      for (int v = 0; v < nv; ++v) m += mesh.lumped_mass[v] * u.values[size_t(v) * N + al];
      m /= mesh.total_measure;
      for (int v = 0; v < nv; ++v) u.values[size_t(v) * N + al] -= m;
    }
  }

  double objective(const NodalField& u, const Fn& density, std::vector<double>& grads,
                   std::vector<double>& terms) const {
    cell_gradients(mesh, u, grads);
    energy_terms(mesh, grads, N, density, terms);
    double J = 0;
    for (double t : terms) J += t;
    for (size_t i = 0; i < u.values.size(); ++i) J -= load[i] * u.values[i];
    return J;
  }
};

struct StageResult {
  int iterations = 0;
  double residual = 0;
};

// Slope scale for the regularization: the gradient magnitude b^{-1}(||f||_{n,1})
// the data can produce. Measuring the smoothing width against it makes the
// continuation commute with rescaling the source; a fixed absolute width would
// distort small-amplitude runs of singular coefficients far more than large
// ones and break the discrete scaling laws for specs that cannot polish.
double slope_scale(const Problem& pb) {
  const double fn = l_n1_norm(rhs_magnitude_field(pb), pb.mesh->dim);
  if (!(fn > 0.0)) return 1.0;
  const double t = pb.spec->b_inverse(fn);
  return std::isfinite(t) && t > 0.0 ? t : 1.0;
}

// Damped Newton on one stage objective. The step length comes from bisecting
// the directional derivative g(s) = R(u+sd).d, which is increasing in s for
// the convex stage energies; any accepted point has g(s) <= 0, so the
// objective strictly decreases.
StageResult newton_stage(System& sys, NodalField& u, const Fn& a, const Fn& ap,
                         double tol, int max_iter, const Fn* energy_density,
                         std::vector<double>* history) {
  std::vector<double> grads, rblocks, jblocks, eterms;
  Eigen::VectorXd R = sys.residual(u, a, grads, rblocks);
  double rn = R.norm() / sys.scale;
  if (history && energy_density)
    history->push_back(sys.objective(u, *energy_density, grads, eterms));
  int iters = 0;
  while (rn > tol) {
    if (iters >= max_iter)
      throw IterationError("Newton stage exhausted its iteration budget", rn, iters);
    const SpMat K = sys.tangent(u, a, ap, grads, jblocks);
    Eigen::VectorXd d = sys.newton_step(K, R);
    double g0 = R.dot(d);
    if (!(g0 < 0)) {
      d = -R;
      g0 = R.dot(d);
      if (!(g0 < 0))
        throw IterationError("no descent direction at a non-stationary point", rn, iters);
    }
    NodalField trial = u;
    sys.apply_step(trial, d, 1.0);
    Eigen::VectorXd Rt = sys.residual(trial, a, grads, rblocks);
    if (Rt.dot(d) > 0) {
      double lo = 0, hi = 1;
      bool have = false;
      for (int it = 0; it < 40; ++it) {
        if (have && hi - lo < 0.05 * hi) break;
        const double mid = (lo + hi) / 2;
        NodalField w = u;
        sys.apply_step(w, d, mid);
        Eigen::VectorXd Rm = sys.residual(w, a, grads, rblocks);
        if (Rm.dot(d) <= 0) {
          lo = mid;
          trial = std::move(w);
          Rt = std::move(Rm);
          have = true;
        } else {
          hi = mid;
        }
      }
      if (!have)
        throw IterationError("derivative line search found no admissible step", rn, iters);
    }
    u = std::move(trial);
    sys.project_means(u); // constant shift, leaves the cached residual valid
    R = std::move(Rt);
    rn = R.norm() / sys.scale;
    ++iters;
    if (history && energy_density)
      history->push_back(sys.objective(u, *energy_density, grads, eterms));
  }
  return {iters, rn};
}

} // namespace

Solution solve(const Problem& pb, const SolveOptions& opts) {
  validate_problem(pb);
  if (!(opts.tol > 0)) throw std::invalid_argument("solver: tol must be positive");
  if (opts.eps_schedule.empty())
    throw std::invalid_argument("solver: empty regularization schedule");
  for (double e : opts.eps_schedule)
    if (!(e > 0) || !(e <= 1))
      throw std::invalid_argument("solver: regularization values must lie in (0,1]");
  if (pb.bc == BoundaryCondition::Neumann) check_neumann_compatibility(pb);

  System sys(pb);
  NodalField u{pb.components, std::vector<double>(size_t(sys.nv) * sys.N, 0.0)};
  if (!opts.initial.empty()) {
    if (opts.initial.size() != u.values.size())
      throw std::invalid_argument("solver: initial guess size mismatch");
    u.values = opts.initial;
    for (double v : u.values)
      if (!std::isfinite(v)) throw std::invalid_argument("solver: initial guess must be finite");
    if (sys.dirichlet) {
      for (int v = 0; v < sys.nv; ++v)
        if (sys.mesh.boundary_vertex[v])
          for (int a = 0; a < sys.N; ++a) u.values[size_t(v) * sys.N + a] = 0;
    } else {
      sys.project_means(u);
    }
  }

  Solution sol;
  int total_iters = 0;
  const double tau = slope_scale(pb);

  for (double eps : opts.eps_schedule) {
    auto reg = std::make_shared<const RegularizedSpec>(*pb.spec, eps, tau);
    const Fn a = [reg](double t) { return reg->a(t); };
    const Fn ap = [reg](double t) { return reg->a_prime(t); };
    Fn density;
    std::vector<double>* hist = nullptr;
    if (opts.track_energy) {
      density = [reg](double t) {
        if (t <= 0) return 0.0;
        const double sc = 1e-13 * (1 + t * reg->b(t));
        return integrate([&reg](double x) { return reg->b(x); }, 0.0, t, sc);
      };
      sol.energy_history.emplace_back();
      hist = &sol.energy_history.back();
    }
    const StageResult st = newton_stage(sys, u, a, ap, opts.tol, opts.max_newton,
                                        opts.track_energy ? &density : nullptr, hist);
    total_iters += st.iterations;
    sol.residual = st.residual;
    sol.eps_final = eps;
  }

  // Unregularized final stage: gives exact discrete scaling laws for smooth
  // monotone coefficients; rolled back whenever it cannot converge.
  if (opts.polish && pb.spec->lower_index() >= 0) {
    const NodalField saved = u;
    const double saved_res = sol.residual, saved_eps = sol.eps_final;
    const NonlinearitySpec* sp = pb.spec;
    const Fn a = [sp](double t) { return sp->a(t); };
    const Fn ap = [sp](double t) { return sp->a_prime(t); };
    Fn density;
    std::vector<double>* hist = nullptr;
    if (opts.track_energy) {
      density = [sp](double t) { return sp->B(t); };
      sol.energy_history.emplace_back();
      hist = &sol.energy_history.back();
    }
    try {
      const StageResult st = newton_stage(sys, u, a, ap, opts.tol, opts.max_newton,
                                          opts.track_energy ? &density : nullptr, hist);
      total_iters += st.iterations;
      sol.residual = st.residual;
      sol.eps_final = 0.0;
    } catch (const std::exception&) {
      u = saved;
      sol.residual = saved_res;
      sol.eps_final = saved_eps;
      if (opts.track_energy) sol.energy_history.pop_back();
    }
  }

  std::vector<double> grads;
  cell_gradients(*pb.mesh, u, grads);
  sol.grad_sup = max_gradient_norm(grads, pb.components, pb.mesh->dim);
  sol.energy = assemble_energy(pb, u.values);
  sol.newton_iterations = total_iters;
  sol.u = std::move(u);
  return sol;
}

double residual_norm(const Problem& pb, const std::vector<double>& u_values, double eps) {
  validate_problem(pb);
  if (eps < 0 || eps > 1) throw std::invalid_argument("solver: eps must lie in [0,1]");
  System sys(pb);
  if (u_values.size() != size_t(sys.nv) * sys.N)
    throw std::invalid_argument("solver: nodal value size mismatch");
  NodalField u{pb.components, u_values};
  std::vector<double> grads, blocks;
  Eigen::VectorXd r;
  if (eps > 0) {
    auto reg = std::make_shared<const RegularizedSpec>(*pb.spec, eps, slope_scale(pb));
    r = sys.residual(u, [reg](double t) { return reg->a(t); }, grads, blocks);
  } else {
    const NonlinearitySpec* sp = pb.spec;
    r = sys.residual(u, [sp](double t) { return sp->a(t); }, grads, blocks);
  }
  return r.norm() / sys.scale;
}

double assemble_energy(const Problem& pb, const std::vector<double>& u_values) {
  validate_problem(pb);
  const Mesh& mesh = *pb.mesh;
  if (u_values.size() != size_t(mesh.vertex_count()) * pb.components)
    throw std::invalid_argument("solver: nodal value size mismatch");
  NodalField u{pb.components, u_values};
  std::vector<double> grads, terms;
  cell_gradients(mesh, u, grads);
  const NonlinearitySpec* sp = pb.spec;
  energy_terms(mesh, grads, pb.components, [sp](double t) { return sp->B(t); }, terms);
  double J = 0;
  for (double t : terms) J += t;
  const std::vector<double> L = assemble_load(pb);
  for (size_t i = 0; i < u_values.size(); ++i) J -= L[i] * u_values[i];
  return J;
}

std::vector<double> assemble_load(const Problem& pb) {
  validate_problem(pb);
  const Mesh& mesh = *pb.mesh;
  const int N = pb.components;
  std::vector<double> L(size_t(mesh.vertex_count()) * N, 0.0);
  if (pb.rhs_layout == RhsLayout::Nodal) {
    for (int v = 0; v < mesh.vertex_count(); ++v)
      for (int a = 0; a < N; ++a)
        L[size_t(v) * N + a] = mesh.lumped_mass[v] * pb.rhs[size_t(v) * N + a];
  } else {
    for (int c = 0; c < mesh.cell_count(); ++c) {
      const int* vs = mesh.cell(c);
      const double w = mesh.cell_measure[c] / (mesh.dim + 1);
      for (int j = 0; j <= mesh.dim; ++j)
        for (int a = 0; a < N; ++a) L[size_t(vs[j]) * N + a] += w * pb.rhs[size_t(c) * N + a];
    }
  }
  return L;
}

void check_neumann_compatibility(const Problem& pb) {
  validate_problem(pb);
  const Mesh& mesh = *pb.mesh;
  const int N = pb.components;
  for (int al = 0; al < N; ++al) {
    double integral = 0, l1 = 0;
    if (pb.rhs_layout == RhsLayout::Cellwise) {
      for (int c = 0; c < mesh.cell_count(); ++c) {
        const double v = pb.rhs[size_t(c) * N + al];
        integral += v * mesh.cell_measure[c];
        l1 += std::fabs(v) * mesh.cell_measure[c];
      }
    } else {
      for (int v = 0; v < mesh.vertex_count(); ++v) {
        const double x = pb.rhs[size_t(v) * N + al];
        integral += x * mesh.lumped_mass[v];
        l1 += std::fabs(x) * mesh.lumped_mass[v];
      }
    }
    if (std::fabs(integral) > 1e-10 * l1) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "incompatible Neumann source: component %d integrates to %.3e "
                    "against L1 norm %.3e", al, integral, l1);
      throw std::invalid_argument(buf);
    }
  }
}

MeasuredField rhs_magnitude_field(const Problem& pb) {
  validate_problem(pb);
  const Mesh& mesh = *pb.mesh;
  const int N = pb.components;
  MeasuredField f;
  f.values.resize(mesh.cell_count());
  f.measures = mesh.cell_measure;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    double s = 0;
    if (pb.rhs_layout == RhsLayout::Cellwise) {
      for (int a = 0; a < N; ++a) {
        const double v = pb.rhs[size_t(c) * N + a];
        s += v * v;
      }
    } else {
      const int* vs = mesh.cell(c);
      for (int a = 0; a < N; ++a) {
        double m = 0;
        for (int j = 0; j <= mesh.dim; ++j) m += pb.rhs[size_t(vs[j]) * N + a];
        m /= mesh.dim + 1;
        s += m * m;
      }
    }
    f.values[c] = std::sqrt(s);
  }
  return f;
}

std::string solution_to_text(const Mesh& mesh, const Solution& sol) {
  const NodalField& u = sol.u;
  if (int(u.values.size()) != mesh.vertex_count() * u.components)
    throw std::invalid_argument("solver: nodal value size mismatch");
  char buf[64];
  std::string out = "nodal-field/1\n";
  std::snprintf(buf, sizeof buf, "mesh %016llx\n", (unsigned long long)mesh_hash(mesh));
  out += buf;
  out += "components " + std::to_string(u.components) + "\n";
  out += "vertices " + std::to_string(mesh.vertex_count()) + "\n";
  out += "iterations " + std::to_string(sol.newton_iterations) + "\n";
  std::snprintf(buf, sizeof buf, "residual %.17g\n", sol.residual);
  out += buf;
  std::snprintf(buf, sizeof buf, "eps_final %.17g\n", sol.eps_final);
  out += buf;
  std::snprintf(buf, sizeof buf, "grad_sup %.17g\n", sol.grad_sup);
  out += buf;
  std::snprintf(buf, sizeof buf, "energy %.17g\n", sol.energy);
  out += buf;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    out += "u";
    for (int a = 0; a < u.components; ++a) {
      std::snprintf(buf, sizeof buf, " %.17g", u.values[size_t(v) * u.components + a]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

SolutionRecord solution_from_text(std::istream& in) {
  auto fail = [](const std::string& what) -> std::runtime_error {
    return std::runtime_error("field text: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "nodal-field/1") throw fail("bad header");
  SolutionRecord rec;
  std::string tag, hex;
  if (!(in >> tag >> hex) || tag != "mesh" || hex.size() != 16) throw fail("bad mesh hash line");
  rec.mesh_hash = std::stoull(hex, nullptr, 16);
  int nv = -1;
  if (!(in >> tag >> rec.u.components) || tag != "components" || rec.u.components < 1)
    throw fail("bad components line");
  if (!(in >> tag >> nv) || tag != "vertices" || nv <= 0) throw fail("bad vertices line");
  if (!(in >> tag >> rec.iterations) || tag != "iterations") throw fail("bad iterations line");
  if (!(in >> tag >> rec.residual) || tag != "residual") throw fail("bad residual line");
  if (!(in >> tag >> rec.eps_final) || tag != "eps_final") throw fail("bad eps_final line");
  if (!(in >> tag >> rec.grad_sup) || tag != "grad_sup") throw fail("bad grad_sup line");
  if (!(in >> tag >> rec.energy) || tag != "energy") throw fail("bad energy line");
  rec.u.values.resize(size_t(nv) * rec.u.components);
  for (int v = 0; v < nv; ++v) {
    if (!(in >> tag) || tag != "u") throw fail("expected value line");
    for (int a = 0; a < rec.u.components; ++a)
      if (!(in >> rec.u.values[size_t(v) * rec.u.components + a])) throw fail("bad value");
  }
  return rec;
}

} // namespace uhlab
