#pragma once

#include <string>
#include <vector>

#include "exheat/scenarios.hpp"

namespace exheat::cli {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Parses `key=v1,v2,...`; an empty value list is allowed.
SweepAxis parse_axis(const std::string& text);

struct SweepCell {
  std::string value;  // empty for the base run of an empty axis
  ScenarioConfig config;
  RunResult result;
  std::string error;  // set when the cell threw
  bool ok() const { return error.empty() && result.passed(); }
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<RateRow> rates;  // failed cells appear as "<scenario>:failed" rows
  bool all_passed() const;
  bool any_config_error = false;
};

/// One run per axis value, each in <output>/<key>=<value>, executed on a
/// pool of worker threads; rates.csv aggregates the fitted rates.
SweepResult run_sweep(const ScenarioConfig& base, const SweepAxis& axis, unsigned workers = 0,
                      const RunOptions& options = {});

}  // namespace exheat::cli
