#include "uhlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "uhlab/parallel.hpp"
#include "uhlab/rearrangement.hpp"

namespace uhlab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double f_lorentz_norm(const Problem& pb) {
  const MeasuredField f = rhs_magnitude_field(pb);
  double l1 = 0;
  for (size_t i = 0; i < f.values.size(); ++i) l1 += std::fabs(f.values[i]) * f.measures[i];
  if (l1 == 0) throw std::domain_error("bound ratio undefined for a zero source");
  return l_n1_norm(f, pb.mesh->dim);
}

double b_integral(const Problem& pb, const Solution& sol) {
  std::vector<double> grads, terms;
  cell_gradients(*pb.mesh, sol.u, grads);
  const NonlinearitySpec* sp = pb.spec;
  energy_terms(*pb.mesh, grads, sol.u.components, [sp](double t) { return sp->B(t); }, terms);
  double s = 0;
  for (double t : terms) s += t;
  return s;
}

// CSV fields never contain commas or newlines; labels are built that way and
// free-text notes are sanitized here.
std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

} // namespace

double gradient_bound_ratio(const Solution& sol, const Problem& pb) {
  const double fn = f_lorentz_norm(pb);
  const double bound = pb.spec->b_inverse(fn);
  if (!(bound > 0)) throw std::domain_error("bound ratio undefined: vanishing b^{-1}");
  return sol.grad_sup / bound;
}

double energy_bound_ratio(const Solution& sol, const Problem& pb) {
  const double fn = f_lorentz_norm(pb);
  const double bound = pb.spec->b_inverse(fn);
  if (!(fn * bound > 0)) throw std::domain_error("energy ratio undefined: vanishing scale");
  return b_integral(pb, sol) / (fn * bound);
}

VerificationReport report_run(const RunSetup& setup, const Mesh& mesh,
                              const Problem& pb, const Solution& sol,
                              double runtime_seconds) {
  VerificationReport rep;
  rep.setup = setup;
  rep.vertices = mesh.vertex_count();
  rep.cells = mesh.cell_count();
  rep.grad_sup = sol.grad_sup;
  rep.residual = sol.residual;
  rep.eps_final = sol.eps_final;
  rep.iterations = sol.newton_iterations;
  rep.f_norm_n1 = f_lorentz_norm(pb);
  rep.bound_rhs = pb.spec->b_inverse(rep.f_norm_n1);
  rep.gradient_ratio = gradient_bound_ratio(sol, pb);
  rep.energy_integral = b_integral(pb, sol);
  rep.energy_ratio = rep.energy_integral / (rep.f_norm_n1 * rep.bound_rhs);
  rep.oracle =
      oracle_grad_sup(setup.domain, setup.rhs, setup.kappa, *pb.spec, setup.bc, mesh);
  if (rep.oracle && *rep.oracle != 0)
    rep.oracle_error = std::fabs(rep.grad_sup - *rep.oracle) / std::fabs(*rep.oracle);
  rep.note = mesh.dim == 2 ? "n=2 regime (smooth f lies in every L^q with q>n)" : "";
  rep.ok = true;
  rep.runtime_seconds = runtime_seconds;
  return rep;
}

VerificationReport run_one(const RunSetup& setup, const SolveOptions& opts) {
  VerificationReport rep;
  rep.setup = setup;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    const Mesh mesh = setup.domain.build(setup.h);
    rep.vertices = mesh.vertex_count();
    rep.cells = mesh.cell_count();
    const NonlinearitySpec spec = NonlinearitySpec::power(setup.p);
    Problem pb;
    pb.mesh = &mesh;
    pb.spec = &spec;
    pb.bc = setup.bc;
    pb.components = setup.components;
    pb.rhs_layout = RhsLayout::Cellwise;
    pb.rhs = setup.rhs.cellwise(mesh, setup.components, setup.kappa);

    const Solution sol = solve(pb, opts);
    return report_run(setup, mesh, pb, sol, elapsed());
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.error = e.what();
    rep.note = rep.setup.domain.dim() == 2 ? "n=2 regime (smooth f lies in every L^q with q>n)" : "";
  }
  rep.runtime_seconds = elapsed();
  return rep;
}

std::vector<VerificationReport> run_sweep(const std::vector<RunSetup>& setups,
                                          const SolveOptions& opts, int jobs) {
  std::vector<VerificationReport> rows(setups.size());
  if (jobs > 0) set_jobs(jobs);
  parallel_for(int(setups.size()), [&](int i) { rows[i] = run_one(setups[i], opts); });
  return rows;
}

SweepSummary summarize(const std::vector<VerificationReport>& rows) {
  SweepSummary s;
  s.runs = int(rows.size());
  bool first = true;
  for (const auto& r : rows) {
    s.runtime_seconds += r.runtime_seconds;
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    if (first) {
      s.gradient_ratio_min = s.gradient_ratio_max = r.gradient_ratio;
      s.energy_ratio_min = s.energy_ratio_max = r.energy_ratio;
      first = false;
    } else {
      s.gradient_ratio_min = std::min(s.gradient_ratio_min, r.gradient_ratio);
      s.gradient_ratio_max = std::max(s.gradient_ratio_max, r.gradient_ratio);
      s.energy_ratio_min = std::min(s.energy_ratio_min, r.energy_ratio);
      s.energy_ratio_max = std::max(s.energy_ratio_max, r.energy_ratio);
    }
  }
  if (!first) {
    if (s.gradient_ratio_min > 0) s.gradient_band = s.gradient_ratio_max / s.gradient_ratio_min;
    if (s.energy_ratio_min > 0) s.energy_band = s.energy_ratio_max / s.energy_ratio_min;
  }
  return s;
}

void write_csv(std::ostream& out, const std::vector<VerificationReport>& rows,
               const SweepSummary& summary) {
  out << "row,domain,bc,spec,components,rhs,kappa,h,vertices,cells,status,"
         "grad_sup,f_norm_n1,bound_rhs,gradient_ratio,energy_integral,energy_ratio,"
         "oracle,oracle_error,residual,eps_final,iterations,note\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i << ',' << csv_safe(r.setup.domain.label()) << ','
        << (r.setup.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann") << ','
        << "power(p=" << num(r.setup.p) << ")," << r.setup.components << ','
        << csv_safe(r.setup.rhs.label()) << ',' << num(r.setup.kappa) << ','
        << num(r.setup.h) << ',' << r.vertices << ',' << r.cells << ','
        << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      out << num(r.grad_sup) << ',' << num(r.f_norm_n1) << ',' << num(r.bound_rhs) << ','
          << num(r.gradient_ratio) << ',' << num(r.energy_integral) << ','
          << num(r.energy_ratio) << ',';
      out << (r.oracle ? num(*r.oracle) : std::string()) << ','
          << (r.oracle_error ? num(*r.oracle_error) : std::string()) << ',';
      out << num(r.residual) << ',' << num(r.eps_final) << ',' << r.iterations << ',';
      out << csv_safe(r.note);
    } else {
      out << ",,,,,,,,,,," << csv_safe(r.note.empty() ? r.error : r.note + "; " + r.error);
    }
    out << '\n';
  }
  out << "summary,,,,,,,,,," << summary.failed << " failed,"
      << ",,," << num(summary.gradient_band) << ",," << num(summary.energy_band) << ",,,,,,"
      << csv_safe("gradient_ratio in [" + num(summary.gradient_ratio_min) + ";" +
                  num(summary.gradient_ratio_max) + "]; energy_ratio in [" +
                  num(summary.energy_ratio_min) + ";" + num(summary.energy_ratio_max) +
                  "]; runs=" + std::to_string(summary.runs))
      << '\n';
}

void write_json(std::ostream& out, const std::vector<VerificationReport>& rows,
                const SweepSummary& summary, const std::string& config_echo) {
  nlohmann::json doc;
  doc["schema"] = "uhlenbeck-report/1";
  doc["tool"] = "uhlab";
  if (!config_echo.empty()) doc["config"] = nlohmann::json::parse(config_echo);
  doc["runs"] = nlohmann::json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    nlohmann::json j;
    j["row"] = i;
    j["domain"] = r.setup.domain.label();
    j["bc"] = r.setup.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
    j["spec"] = {{"family", "power"}, {"p", r.setup.p}};
    j["components"] = r.setup.components;
    j["rhs"] = r.setup.rhs.label();
    j["kappa"] = r.setup.kappa;
    j["h"] = r.setup.h;
    j["vertices"] = r.vertices;
    j["cells"] = r.cells;
    j["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      j["grad_sup"] = r.grad_sup;
      j["f_norm_n1"] = r.f_norm_n1;
      j["bound_rhs"] = r.bound_rhs;
      j["gradient_ratio"] = r.gradient_ratio;
      j["energy_integral"] = r.energy_integral;
      j["energy_ratio"] = r.energy_ratio;
      if (r.oracle) j["oracle"] = *r.oracle;
      if (r.oracle_error) j["oracle_error"] = *r.oracle_error;
      j["residual"] = r.residual;
      j["eps_final"] = r.eps_final;
      j["iterations"] = r.iterations;
    } else {
      j["error"] = r.error;
    }
    j["runtime_seconds"] = r.runtime_seconds;
    if (!r.note.empty()) j["note"] = r.note;
    doc["runs"].push_back(std::move(j));
  }
  doc["summary"] = {
      {"runs", summary.runs},
      {"failed", summary.failed},
      {"gradient_ratio",
       {{"min", summary.gradient_ratio_min},
        {"max", summary.gradient_ratio_max},
        {"band", summary.gradient_band}}},
      {"energy_ratio",
       {{"min", summary.energy_ratio_min},
        {"max", summary.energy_ratio_max},
        {"band", summary.energy_band}}},
      {"runtime_seconds", summary.runtime_seconds},
  };
  out << doc.dump(2) << '\n';
}

} // namespace uhlab
