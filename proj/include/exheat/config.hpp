#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace exheat::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitKind { Bump, Indicator, Table };

/// Flat run description. Every field has a key of the same name in the
/// `key = value` text format.
struct ScenarioConfig {
  std::string scenario = "linear-conservation";

  int dimension = 3;
  double r0 = 1.0;
  double R_max = 151.0;
  int num_cells = 2000;

  double p = 2.0;
  std::vector<double> p_values;  // dichotomy: one run per entry (empty = {p})
  double q = std::numeric_limits<double>::infinity(); // norm exponent; inf allowed
  double dt_initial = 1e-3;
  double dt_growth = 1.025;
  double dt_cap_factor = 0.1;
  double t_end = 200.0;
  std::vector<double> output_times;
  int startup_steps = 2;
  int snapshots_per_decade = 20;  // log-spaced outputs added on top of output_times

  InitKind init = InitKind::Bump;
  double bump_center = 2.0;
  double bump_width = 1.0;
  double bump_amplitude = 1.0;
  double indicator_a = 1.0;
  double indicator_b = 2.0;
  std::string table_path;

  double probe_radius = 2.0;
  std::string output = "out";

  bool operator==(const ScenarioConfig&) const = default;
};

const std::vector<std::string>& scenario_names();
std::string scenario_summary(const std::string& name);
bool is_scenario(const std::string& name);

/// Preset defaults for a scenario.
ScenarioConfig preset(const std::string& scenario);

/// Parses `key = value` lines; `#` starts a comment. Keys not set fall back
/// to the preset of the given scenario. Errors name the line and key.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

bool is_key(const std::string& key);

/// Assigns one key from its text form; throws ConfigError on unknown keys or
/// bad values.
void set_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

std::string format_double(double v);
double parse_double(const std::string& text);

}  // namespace exheat::cli
