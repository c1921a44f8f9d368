#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "uhlab/parallel.hpp"
#include "uhlab/rearrangement.hpp"
#include "uhlab/verify.hpp"

using namespace uhlab;

namespace {

RunSetup disk_setup(double p, double kappa, double h) {
  RunSetup s;
  s.domain = DomainSpec::disk(1.0);
  s.p = p;
  s.rhs = RhsSpec::constant(2.0);
  s.bc = BoundaryCondition::Dirichlet;
  s.kappa = kappa;
  s.h = h;
  return s;
}

int count_commas(const std::string& line) {
  int n = 0;
  for (char c : line) n += (c == ',');
  return n;
}

} // namespace

TEST_CASE("bound ratios match their definition") {
  const Mesh mesh = disk_mesh(1.0, 0.3);
  const NonlinearitySpec spec = NonlinearitySpec::power(3.0);
  Problem pb;
  pb.mesh = &mesh;
  pb.spec = &spec;
  pb.bc = BoundaryCondition::Dirichlet;
  pb.rhs_layout = RhsLayout::Cellwise;
  pb.rhs = RhsSpec::constant(2.0).cellwise(mesh, 1, 1.0);
  const Solution sol = solve(pb);

  const double fn = l_n1_norm(rhs_magnitude_field(pb), mesh.dim);
  const double bound = spec.b_inverse(fn);
  CHECK(gradient_bound_ratio(sol, pb) ==
        doctest::Approx(sol.grad_sup / bound).epsilon(1e-13));

  std::vector<double> grads, terms;
  cell_gradients(mesh, sol.u, grads);
  energy_terms(mesh, grads, 1, [&spec](double t) { return spec.B(t); }, terms);
  double b_int = 0;
  for (double t : terms) b_int += t;
  CHECK(energy_bound_ratio(sol, pb) ==
        doctest::Approx(b_int / (fn * bound)).epsilon(1e-13));
}

TEST_CASE("a completed run yields a fully populated row") {
  const VerificationReport rep = run_one(disk_setup(3.0, 1.0, 0.25), SolveOptions{});
  REQUIRE(rep.ok);
  CHECK(rep.error.empty());
  CHECK(rep.vertices > 0);
  CHECK(rep.cells > 0);
  CHECK(rep.grad_sup > 0);
  CHECK(rep.f_norm_n1 > 0);
  CHECK(rep.bound_rhs > 0);
  CHECK(rep.gradient_ratio ==
        doctest::Approx(rep.grad_sup / rep.bound_rhs).epsilon(1e-13));
  CHECK(rep.energy_integral > 0);
  CHECK(rep.energy_ratio ==
        doctest::Approx(rep.energy_integral / (rep.f_norm_n1 * rep.bound_rhs))
            .epsilon(1e-13));
  REQUIRE(rep.oracle.has_value());
  REQUIRE(rep.oracle_error.has_value());
  CHECK(*rep.oracle_error ==
        doctest::Approx(std::fabs(rep.grad_sup - *rep.oracle) / *rep.oracle)
            .epsilon(1e-13));
  CHECK(rep.residual <= 1e-10);
  CHECK(rep.runtime_seconds >= 0);
  CHECK(!rep.note.empty());
}

TEST_CASE("scaling the source leaves both ratios invariant") {
  const VerificationReport lo = run_one(disk_setup(3.0, 0.5, 0.25), SolveOptions{});
  const VerificationReport hi = run_one(disk_setup(3.0, 8.0, 0.25), SolveOptions{});
  REQUIRE(lo.ok);
  REQUIRE(hi.ok);
  CHECK(std::fabs(hi.gradient_ratio - lo.gradient_ratio) / lo.gradient_ratio < 1e-6);
  CHECK(std::fabs(hi.energy_ratio - lo.energy_ratio) / lo.energy_ratio < 1e-6);
}

TEST_CASE("failed runs land in the row instead of escaping") {
  RunSetup bad = disk_setup(2.0, 1.0, 0.3);
  bad.domain = DomainSpec::square(1.0);
  bad.bc = BoundaryCondition::Neumann; // constant source cannot balance
  const VerificationReport rep = run_one(bad, SolveOptions{});
  CHECK(!rep.ok);
  CHECK(!rep.error.empty());
  CHECK(rep.vertices > 0); // the mesh was already built
  CHECK(rep.runtime_seconds >= 0);
}

TEST_CASE("a zero source has no bound to compare against") {
  RunSetup zero = disk_setup(2.0, 1.0, 0.3);
  zero.rhs = RhsSpec::constant(0.0);
  const VerificationReport rep = run_one(zero, SolveOptions{});
  CHECK(!rep.ok);
  CHECK(rep.error.find("zero source") != std::string::npos);

  const Mesh mesh = disk_mesh(1.0, 0.3);
  const NonlinearitySpec spec = NonlinearitySpec::power(2.0);
  Problem pb;
  pb.mesh = &mesh;
  pb.spec = &spec;
  pb.bc = BoundaryCondition::Dirichlet;
  pb.rhs.assign(mesh.cell_count(), 0.0);
  const Solution sol = solve(pb);
  CHECK_THROWS_AS((void)gradient_bound_ratio(sol, pb), std::domain_error);
  CHECK_THROWS_AS((void)energy_bound_ratio(sol, pb), std::domain_error);
}

TEST_CASE("summaries aggregate the successful rows only") {
  std::vector<VerificationReport> rows(3);
  rows[0].ok = true;
  rows[0].gradient_ratio = 0.5;
  rows[0].energy_ratio = 2.0;
  rows[0].runtime_seconds = 1.0;
  rows[1].ok = true;
  rows[1].gradient_ratio = 1.0;
  rows[1].energy_ratio = 4.0;
  rows[1].runtime_seconds = 2.0;
  rows[2].ok = false;
  rows[2].error = "boom";
  rows[2].runtime_seconds = 0.5;

  const SweepSummary s = summarize(rows);
  CHECK(s.runs == 3);
  CHECK(s.failed == 1);
  CHECK(s.gradient_ratio_min == 0.5);
  CHECK(s.gradient_ratio_max == 1.0);
  CHECK(s.gradient_band == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.energy_ratio_min == 2.0);
  CHECK(s.energy_ratio_max == 4.0);
  CHECK(s.energy_band == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.runtime_seconds == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("identical sweeps write identical CSV bytes for any thread count") {
  std::vector<RunSetup> setups;
  setups.push_back(disk_setup(2.0, 1.0, 0.3));
  setups.push_back(disk_setup(3.0, 2.0, 0.3));
  {
    RunSetup sq = disk_setup(2.0, 1.0, 0.3);
    sq.domain = DomainSpec::square(1.0);
    setups.push_back(sq);
  }

  std::string csv[3];
  int k = 0;
  for (int jobs : {1, 1, 2}) {
    const auto rows = run_sweep(setups, SolveOptions{}, jobs);
    std::ostringstream out;
    write_csv(out, rows, summarize(rows));
    csv[k++] = out.str();
  }
  set_jobs(max_jobs());
  CHECK(csv[0] == csv[1]);
  CHECK(csv[0] == csv[2]);

  // fixed header, one line per row plus the summary, full column count on
  // every line, and no runtime column anywhere
  std::istringstream lines(csv[0]);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line ==
        "row,domain,bc,spec,components,rhs,kappa,h,vertices,cells,status,"
        "grad_sup,f_norm_n1,bound_rhs,gradient_ratio,energy_integral,energy_ratio,"
        "oracle,oracle_error,residual,eps_final,iterations,note");
  CHECK(line.find("runtime") == std::string::npos);
  const int commas = count_commas(line);
  int data_lines = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    CHECK(count_commas(line) == commas);
    ++data_lines;
  }
  CHECK(data_lines == int(setups.size()) + 1);
}

TEST_CASE("the JSON report carries schema, rows, summary, and config echo") {
  std::vector<RunSetup> setups = {disk_setup(2.0, 1.0, 0.3)};
  const auto rows = run_sweep(setups, SolveOptions{}, 1);
  set_jobs(max_jobs());
  std::ostringstream out;
  write_json(out, rows, summarize(rows), "{\"seed\": 7}");

  const nlohmann::json doc = nlohmann::json::parse(out.str());
  CHECK(doc.at("schema") == "uhlenbeck-report/1");
  CHECK(doc.at("tool") == "uhlab");
  CHECK(doc.at("config").at("seed") == 7);
  REQUIRE(doc.at("runs").size() == 1);
  const auto& run = doc.at("runs")[0];
  CHECK(run.at("status") == "ok");
  CHECK(run.at("runtime_seconds").get<double>() >= 0);
  CHECK(run.at("gradient_ratio").get<double>() > 0);
  CHECK(doc.at("summary").at("runs") == 1);
  CHECK(doc.at("summary").at("failed") == 0);
  CHECK(doc.at("summary").at("gradient_ratio").at("band").get<double>() >= 0);
}
