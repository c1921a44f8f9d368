#include <doctest.h>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "uhlab/checks.hpp"

using namespace uhlab;

TEST_CASE("all property suites run clean") {
  const CheckSummary summary = run_checks("all", 20250819, 60);
  REQUIRE(!summary.lines.empty());
  CHECK(summary.all_pass());
  CHECK(summary.total_failures() == 0);
  CHECK(summary.total_samples() == 60 * int(summary.lines.size()));
  for (const CheckLine& line : summary.lines) {
    INFO(line.suite, "/", line.name);
    CHECK(line.pass());
    CHECK(line.samples == 60);
    CHECK(line.failures == 0);
    CHECK(line.threshold > 0);
    CHECK(line.worst <= line.threshold);
  }
}

TEST_CASE("the published suite names dispatch individually") {
  const std::vector<std::string> suites = check_suites();
  REQUIRE(suites == std::vector<std::string>{"derived", "young", "elliptic",
                                             "approx", "rearrangement"});
  for (const std::string& s : suites) {
    const CheckSummary summary = run_checks(s, 3, 25);
    REQUIRE(!summary.lines.empty());
    CHECK(summary.all_pass());
    for (const CheckLine& line : summary.lines) CHECK(line.suite == s);
  }
}

TEST_CASE("thresholds stay at the documented levels") {
  const std::set<double> allowed = {1e-6, 1e-8, 1e-9, 1e-12};
  for (const CheckLine& line : run_checks("all", 1, 5).lines) {
    INFO(line.suite, "/", line.name);
    CHECK(allowed.count(line.threshold) == 1);
  }
}

TEST_CASE("a seed pins every statistic exactly") {
  const CheckSummary a = run_checks("derived", 7, 40);
  const CheckSummary b = run_checks("derived", 7, 40);
  REQUIRE(a.lines.size() == b.lines.size());
  for (size_t i = 0; i < a.lines.size(); ++i) {
    CHECK(a.lines[i].name == b.lines[i].name);
    CHECK(a.lines[i].worst == b.lines[i].worst);
    CHECK(a.lines[i].failures == b.lines[i].failures);
  }

  const CheckSummary c = run_checks("derived", 8, 40);
  bool any_different = false;
  for (size_t i = 0; i < a.lines.size(); ++i)
    any_different = any_different || a.lines[i].worst != c.lines[i].worst;
  CHECK(any_different);
}

TEST_CASE("bad suite names and sample counts are rejected") {
  CHECK_THROWS_AS((void)run_checks("bogus", 1, 10), std::invalid_argument);
  CHECK_THROWS_AS((void)run_checks("all", 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)run_checks("all", 1, -3), std::invalid_argument);
}
