#pragma once

#include <map>
#include <string>
#include <vector>

#include "exheat/config.hpp"
#include "exheat/csv.hpp"
#include "exheat/field.hpp"
#include "exheat/solver.hpp"

namespace exheat::cli {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  std::string scenario;
  std::vector<Check> checks;
  std::vector<RateRow> rates;
  std::vector<std::string> files;     // written artifacts, relative to the output dir
  std::vector<std::string> messages;  // human-readable summary lines
  std::vector<std::string> warnings;  // solver warnings
  std::map<std::string, double> values;  // scalar results, also in the manifest

  bool passed() const;
  const Check* first_failure() const;
};

struct RunOptions {
  bool write_outputs = true;
};

/// Runs one preset. Config problems raise ConfigError; solver failures are
/// reported as failed checks.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Grid, initial data and solver control derived from a config.
DomainSpec make_domain(const ScenarioConfig& cfg);
Field make_initial_data(const ScenarioConfig& cfg, GridPtr grid);
SolverConfig make_solver_config(const ScenarioConfig& cfg, Scheme scheme, double p);

}  // namespace exheat::cli
