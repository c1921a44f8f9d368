#include "uhlab/cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "uhlab/checks.hpp"
#include "uhlab/config.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/mesh.hpp"
#include "uhlab/parallel.hpp"
#include "uhlab/solver.hpp"
#include "uhlab/verify.hpp"

namespace uhlab {
namespace {

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) {
    std::fprintf(stderr, "error: could not write %s\n", path.string().c_str());
    return false;
  }
  return true;
}

template <class WriteBody>
bool write_report_file(const std::filesystem::path& path, WriteBody&& body) {
  std::ostringstream buf;
  body(buf);
  return write_file(path, buf.str());
}

int cmd_check(const std::string& suite, uint64_t seed, int samples) {
  CheckSummary summary;
  try {
    summary = run_checks(suite, seed, samples);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::printf("%-14s %-24s %8s %9s %12s %10s  %s\n", "suite", "check",
              "samples", "failures", "worst", "threshold", "status");
  for (const CheckLine& line : summary.lines) {
    std::printf("%-14s %-24s %8d %9d %12.3e %10.0e  %s\n", line.suite.c_str(),
                line.name.c_str(), line.samples, line.failures, line.worst,
                line.threshold, line.pass() ? "ok" : "FAIL");
  }
  std::printf("total: %zu checks, %d samples, %d failures\n",
              summary.lines.size(), summary.total_samples(),
              summary.total_failures());
  return summary.all_pass() ? 0 : 1;
}

RunSetup first_setup(const ExperimentConfig& cfg) {
  RunSetup r;
  r.domain = cfg.domains.front();
  r.p = cfg.p_values.front();
  r.rhs = cfg.rhs;
  r.bc = cfg.bc;
  r.components = cfg.components;
  r.kappa = cfg.kappa_values.front();
  r.h = cfg.h_values.front();
  return r;
}

int cmd_solve(const ExperimentConfig& cfg) {
  const RunSetup setup = first_setup(cfg);
  const NonlinearitySpec spec = NonlinearitySpec::power(setup.p);
  Mesh mesh;
  Solution sol;
  VerificationReport rep;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    mesh = setup.domain.build(setup.h);
    Problem pb;
    pb.mesh = &mesh;
    pb.spec = &spec;
    pb.bc = setup.bc;
    pb.components = setup.components;
    pb.rhs_layout = RhsLayout::Cellwise;
    pb.rhs = setup.rhs.cellwise(mesh, setup.components, setup.kappa);
    sol = solve(pb, cfg.solver);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    rep = report_run(setup, mesh, pb, sol, secs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solve failed: %s\n", e.what());
    return 3;
  }

  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: could not create %s: %s\n",
                 dir.string().c_str(), ec.message().c_str());
    return 1;
  }
  const std::vector<VerificationReport> rows{rep};
  const SweepSummary summary = summarize(rows);
  if (!write_file(dir / "mesh.txt", mesh_to_text(mesh)) ||
      !write_file(dir / "solution.txt", solution_to_text(mesh, sol)) ||
      !write_report_file(dir / "report.csv",
                         [&](std::ostream& out) { write_csv(out, rows, summary); }) ||
      !write_report_file(dir / "report.json", [&](std::ostream& out) {
        write_json(out, rows, summary, config_echo_json(cfg));
      }))
    return 1;

  std::printf("%s, %s, power(p=%g), kappa=%g, h=%g: %d vertices, %d cells\n",
              setup.domain.label().c_str(), setup.rhs.label().c_str(), setup.p,
              setup.kappa, setup.h, rep.vertices, rep.cells);
  std::printf("grad_sup=%.12g  bound_rhs=%.12g  gradient_ratio=%.12g\n",
              rep.grad_sup, rep.bound_rhs, rep.gradient_ratio);
  if (rep.oracle)
    std::printf("reference grad_sup=%.12g  relative error=%.3e\n", *rep.oracle,
                rep.oracle_error.value_or(0.0));
  std::printf("wrote %s, %s, %s, %s\n", (dir / "mesh.txt").string().c_str(),
              (dir / "solution.txt").string().c_str(),
              (dir / "report.csv").string().c_str(),
              (dir / "report.json").string().c_str());
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, int jobs) {
  const std::vector<RunSetup> runs = expand_runs(cfg);
  const std::vector<VerificationReport> rows = run_sweep(runs, cfg.solver, jobs);
  const SweepSummary summary = summarize(rows);

  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: could not create %s: %s\n",
                 dir.string().c_str(), ec.message().c_str());
    return 1;
  }
  if (!write_report_file(dir / "sweep.csv",
                         [&](std::ostream& out) { write_csv(out, rows, summary); }) ||
      !write_report_file(dir / "sweep.json", [&](std::ostream& out) {
        write_json(out, rows, summary, config_echo_json(cfg));
      }))
    return 1;

  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].ok)
      std::fprintf(stderr, "row %zu (%s, p=%g, kappa=%g): %s\n", i,
                   rows[i].setup.domain.label().c_str(), rows[i].setup.p,
                   rows[i].setup.kappa, rows[i].error.c_str());
  std::printf("%d runs, %d failed\n", summary.runs, summary.failed);
  std::printf("gradient_ratio in [%.9g, %.9g], band %.9g\n",
              summary.gradient_ratio_min, summary.gradient_ratio_max,
              summary.gradient_band);
  std::printf("energy_ratio in [%.9g, %.9g], band %.9g\n",
              summary.energy_ratio_min, summary.energy_ratio_max,
              summary.energy_band);
  std::printf("wrote %s, %s\n", (dir / "sweep.csv").string().c_str(),
              (dir / "sweep.json").string().c_str());
  return summary.failed > 0 ? 3 : 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Numerical laboratory for gradient bounds of quasilinear problems"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  uint64_t seed = 0;
  bool print_defaults = false;
  app.add_option("--config", config_path, "JSON experiment configuration");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads (default: all cores)")
      ->check(CLI::Range(0, 4096));
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_flag("--print-defaults", print_defaults,
               "print the default configuration as JSON and exit");

  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "solve the first grid entry and write mesh/solution/report");
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run the whole sweep grid and write sweep.csv / sweep.json");
  CLI::App* check_cmd =
      app.add_subcommand("check", "run randomized property checks");
  // the shared --config/--out/--jobs/--seed flags may follow the subcommand
  solve_cmd->fallthrough();
  sweep_cmd->fallthrough();
  check_cmd->fallthrough();
  std::string suite = "all";
  int samples = 1000;
  check_cmd->add_option(
      "suite", suite, "derived | young | elliptic | approx | rearrangement | all");
  check_cmd->add_option("--samples", samples, "samples per check")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (print_defaults) {
    std::printf("%s\n", default_config_json().c_str());
    return 0;
  }

  ExperimentConfig cfg;
  if (config_path.empty()) {
    cfg = default_config();
  } else {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "config error: cannot open %s\n", config_path.c_str());
      return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      cfg = config_from_json(text.str());
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
  }
  if (app.count("--seed") > 0) cfg.seed = seed;
  if (app.count("--out") > 0) cfg.out_dir = out_dir;
  const int effective_jobs = jobs > 0 ? jobs : max_jobs();

  if (check_cmd->parsed()) return cmd_check(suite, cfg.seed, samples);
  if (solve_cmd->parsed()) {
    set_jobs(effective_jobs);
    return cmd_solve(cfg);
  }
  if (sweep_cmd->parsed()) return cmd_sweep(cfg, effective_jobs);

  std::fprintf(stderr, "%s\n", app.help().c_str());
  return 2;
}

} // namespace uhlab
