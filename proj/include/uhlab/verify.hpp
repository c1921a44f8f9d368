#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uhlab/experiment.hpp"
#include "uhlab/solver.hpp"

namespace uhlab {

// one sweep cell: everything needed to reproduce a single run
struct RunSetup {
  DomainSpec domain;
  double p = 2.0; // power-family exponent
  RhsSpec rhs;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  int components = 1;
  double kappa = 1.0;
  double h = 0.05;
};

struct VerificationReport {
  RunSetup setup;
  bool ok = false;
  std::string error; // failure note when !ok
  int vertices = 0;
  int cells = 0;
  double grad_sup = 0;
  double f_norm_n1 = 0;       // Lorentz L^{n,1} norm of |f|
  double bound_rhs = 0;       // b^{-1}(f_norm_n1)
  double gradient_ratio = 0;  // grad_sup / bound_rhs
  double energy_integral = 0; // integral of B(|grad u|)
  double energy_ratio = 0;    // energy_integral / (f_norm_n1 * bound_rhs)
  std::optional<double> oracle;
  std::optional<double> oracle_error; // relative
  double residual = 0;
  double eps_final = 0;
  int iterations = 0;
  double runtime_seconds = 0; // reported in JSON only, never in CSV
  std::string note;           // regime annotation
};

// grad_sup / b^{-1}(||f||_{n,1}); throws std::domain_error for zero sources
double gradient_bound_ratio(const Solution& sol, const Problem& pb);

// integral of B(|grad u|) divided by ||f||_{n,1} * b^{-1}(||f||_{n,1})
double energy_bound_ratio(const Solution& sol, const Problem& pb);

// assemble the report row for a finished solve; throws std::domain_error when
// the bound is undefined (zero source)
VerificationReport report_run(const RunSetup& setup, const Mesh& mesh,
                              const Problem& pb, const Solution& sol,
                              double runtime_seconds);

// run one sweep cell; never throws — failures land in the report row
VerificationReport run_one(const RunSetup& setup, const SolveOptions& opts);

// rows may execute concurrently (jobs > 1); the report order is the input
// order regardless of scheduling, and each row's numbers are identical for
// any thread count
std::vector<VerificationReport> run_sweep(const std::vector<RunSetup>& setups,
                                          const SolveOptions& opts, int jobs);

struct SweepSummary {
  int runs = 0;
  int failed = 0;
  double gradient_ratio_min = 0;
  double gradient_ratio_max = 0;
  double gradient_band = 0; // max/min over successful rows
  double energy_ratio_min = 0;
  double energy_ratio_max = 0;
  double energy_band = 0;
  double runtime_seconds = 0;
};

SweepSummary summarize(const std::vector<VerificationReport>& rows);

// CSV: fixed documented header, %.17g numbers, one row per run plus a final
// summary row; free of timestamps so identical inputs give identical bytes
void write_csv(std::ostream& out, const std::vector<VerificationReport>& rows,
               const SweepSummary& summary);

// JSON document, schema "uhlenbeck-report/1"; config_echo is an optional
// pre-serialized JSON object echoed under "config"
void write_json(std::ostream& out, const std::vector<VerificationReport>& rows,
                const SweepSummary& summary, const std::string& config_echo);

} // namespace uhlab
