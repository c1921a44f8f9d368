#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "uhlab/rearrangement.hpp"

using namespace uhlab;

namespace {
// shared hand-worked example: |v| levels 3 (mass 1), 2 (mass .25), 1 (mass 1), 0 (mass 2)
MeasuredField hand_field() {
  return {{3.0, -1.0, 2.0, 0.0, -3.0}, {0.5, 1.0, 0.25, 2.0, 0.5}};
}

MeasuredField random_field(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> V(-4.0, 4.0), M(0.05, 1.0);
  MeasuredField f;
  for (int i = 0; i < n; ++i) {
    f.values.push_back(V(rng));
    f.measures.push_back(M(rng));
  }
  return f;
}
} // namespace

TEST_CASE("profile: merged levels, breakpoints, distribution, v*, v**") {
  const auto p = profile(hand_field());
  REQUIRE(p.levels.size() == 3);
  CHECK(p.levels[0] == 3.0);
  CHECK(p.levels[1] == 2.0);
  CHECK(p.levels[2] == 1.0);
  CHECK(p.breakpoints[0] == doctest::Approx(1.0));
  CHECK(p.breakpoints[1] == doctest::Approx(1.25));
  CHECK(p.breakpoints[2] == doctest::Approx(2.25));
  CHECK(p.total == doctest::Approx(4.25));

  CHECK(p.distribution(2.5) == doctest::Approx(1.0));
  CHECK(p.distribution(2.0) == doctest::Approx(1.0)); // strict inequality
  CHECK(p.distribution(0.0) == doctest::Approx(2.25));

  CHECK(p.decreasing_rearrangement(0.0) == 3.0);
  CHECK(p.decreasing_rearrangement(0.999) == 3.0);
  CHECK(p.decreasing_rearrangement(1.0) == 2.0); // right-continuous
  CHECK(p.decreasing_rearrangement(1.3) == 1.0);
  CHECK(p.decreasing_rearrangement(2.25) == 0.0);
  CHECK(p.decreasing_rearrangement(99.0) == 0.0);
  CHECK_THROWS_AS(p.decreasing_rearrangement(-1.0), std::domain_error);

  CHECK(p.double_star(1.0) == doctest::Approx(3.0));
  CHECK(p.double_star(2.0) == doctest::Approx(2.125)); // (3 + .5 + .75)/2
  CHECK_THROWS_AS(p.double_star(0.0), std::domain_error);
}

TEST_CASE("distribution_function is equimeasurable with the profile") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_field(rng, 40);
    const auto p = profile(f);
    std::uniform_real_distribution<double> T(0.0, 4.5);
    for (int k = 0; k < 50; ++k) {
      const double t = T(rng);
      CHECK(distribution_function(f, t) == doctest::Approx(p.distribution(t)).epsilon(1e-13));
    }
    // v* and |v| share the distribution function (equimeasurability)
    MeasuredField star;
    double prev = 0;
    for (size_t j = 0; j < p.levels.size(); ++j) {
      star.values.push_back(p.levels[j]);
      star.measures.push_back(p.breakpoints[j] - prev);
      prev = p.breakpoints[j];
    }
    if (!star.values.empty()) {
      for (double t : {0.1, 0.9, 2.0, 3.9})
        CHECK(distribution_function(star, t) == doctest::Approx(distribution_function(f, t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("lorentz norms: L1, frozen L^{2,1}, weak norm, indicator formula") {
  const auto f = hand_field();
  CHECK(lorentz_norm(f, 1.0, 1.0) == doctest::Approx(4.5).epsilon(1e-14));
  // hand value: 2(3 sqrt(1) + 2(sqrt(1.25)-1) + (1.5 - sqrt(1.25))) = 5 + sqrt 5
  CHECK(l_n1_norm(f, 2) == doctest::Approx(5.0 + std::sqrt(5.0)).epsilon(1e-14));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(lorentz_norm(f, 2.0, inf) == doctest::Approx(3.0).epsilon(1e-14));

  MeasuredField chi{{1.0, 0.0}, {0.42, 1.0}};
  for (double q : {1.0, 2.0, 2.5, 7.0})
    for (double sg : {1.0, 2.0, 3.0, 6.5}) {
      const double expect = std::pow(q / sg, 1.0 / sg) * std::pow(0.42, 1.0 / q);
      CHECK(lorentz_norm(chi, q, sg) == doctest::Approx(expect).epsilon(1e-12));
    }
  CHECK(lorentz_norm(chi, 3.0, inf) == doctest::Approx(std::pow(0.42, 1.0 / 3.0)).epsilon(1e-12));

  // constant field: n lambda |Omega|^{1/n}
  MeasuredField cst{{3.0, 3.0}, {1.2, 0.8}};
  CHECK(l_n1_norm(cst, 2) == doctest::Approx(2.0 * 3.0 * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(l_n1_norm(cst, 3) == doctest::Approx(3.0 * 3.0 * std::cbrt(2.0)).epsilon(1e-13));

  CHECK_THROWS_AS(lorentz_norm(f, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(lorentz_norm(f, 2.0, 0.9), std::domain_error);
}

TEST_CASE("L^{q,q} collapses to the plain L^q norm") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const auto f = random_field(rng, 30);
    for (double q : {1.0, 2.0, 3.5}) {
      double direct = 0;
      for (size_t i = 0; i < f.values.size(); ++i)
        direct += std::pow(std::abs(f.values[i]), q) * f.measures[i];
      direct = std::pow(direct, 1.0 / q);
      CHECK(lorentz_norm(f, q, q) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("double star dominates the rearrangement") {
  std::mt19937_64 rng(31);
  const auto f = random_field(rng, 25);
  const auto p = profile(f);
  for (double s : {0.01, 0.4, 1.7, 5.0, 11.0})
    CHECK(p.double_star(s) >= p.decreasing_rearrangement(s) - 1e-13);
}

TEST_CASE("hardy-littlewood pairing") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 40; ++rep) {
    auto v = random_field(rng, 20);
    auto w = random_field(rng, 20);
    w.measures = v.measures; // shared layout
    const auto [
      lhs, rhs] = hardy_littlewood_pairing(v, w);
    CHECK(lhs <= rhs + 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
  // similarly ordered pair attains equality: w = v^2
  auto v = random_field(rng, 15);
  auto w = v;
  for (auto& x : w.values) x = x * x;
  const auto [lhs, rhs] = hardy_littlewood_pairing(v, w);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  auto bad = v;
  bad.measures[0] *= 2.0;
  CHECK_THROWS_AS(hardy_littlewood_pairing(v, bad), std::invalid_argument);
  MeasuredField shorter{{1.0}, {1.0}};
  CHECK_THROWS_AS(hardy_littlewood_pairing(v, shorter), std::invalid_argument);
}

TEST_CASE("luxemburg norm: closed forms, scaling, zero field") {
  // B(t) = t^3/3, constant c on measure m: lambda = c (m/3)^{1/3}
  MeasuredField cst{{2.0}, {1.5}};
  auto B3 = [](double t) { return t * t * t / 3.0; };
  CHECK(luxemburg_norm(cst, B3) == doctest::Approx(2.0 * std::cbrt(0.5)).epsilon(1e-9));

  // quadratic B: lambda = sqrt(sum v^2 m / 2)
  auto B2 = [](double t) { return 0.5 * t * t; };
  CHECK(luxemburg_norm(hand_field(), B2) == doctest::Approx(std::sqrt(5.5)).epsilon(1e-9));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> V(-4.0, 4.0), M(0.05, 1.0);
  MeasuredField f;
  for (int i = 0; i < 12; ++i) {
    f.values.push_back(V(rng));
    f.measures.push_back(M(rng));
  }
  auto g = f;
  for (auto& x : g.values) x *= 2.0;
  CHECK(luxemburg_norm(g, B3) == doctest::Approx(2.0 * luxemburg_norm(f, B3)).epsilon(1e-9));

  MeasuredField zero{{0.0, 0.0}, {1.0, 2.0}};
  CHECK(luxemburg_norm(zero, B3) == 0.0);

  MeasuredField badm{{1.0}, {-1.0}};
  CHECK_THROWS_AS(luxemburg_norm(badm, B3), std::domain_error);
}
