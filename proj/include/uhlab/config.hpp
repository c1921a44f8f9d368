#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uhlab/experiment.hpp"
#include "uhlab/solver.hpp"
#include "uhlab/verify.hpp"

namespace uhlab {

// One experiment batch: the cartesian sweep domains x p_values x h_values x
// kappa_values under a single right-hand side and boundary condition. JSON
// schema "uhlenbeck-config/1". Every field has a default; default_config() is
// the standard gradient-bound sweep (three convex domains, four exponents,
// five source scales).
struct ExperimentConfig {
  std::vector<DomainSpec> domains;
  std::vector<double> p_values;
  RhsSpec rhs = RhsSpec::constant(1.0);
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  int components = 1;
  std::vector<double> h_values;
  std::vector<double> kappa_values;
  SolveOptions solver;
  std::string out_dir = "out";
  uint64_t seed = 1;
};

ExperimentConfig default_config();

// The default configuration rendered as JSON with every field explicit.
std::string default_config_json();

// Parse and validate a config document. Throws ConfigError whose `path`
// points at the offending field ("domains[1].radius"); unknown keys are
// rejected the same way.
ExperimentConfig config_from_json(const std::string& text);

// Canonical JSON form of a configuration (echoed inside JSON reports).
std::string config_echo_json(const ExperimentConfig& cfg);

// The sweep grid in deterministic row order: domain, then p, then h, then
// kappa, innermost last.
std::vector<RunSetup> expand_runs(const ExperimentConfig& cfg);

} // namespace uhlab
