#include "exheat/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace exheat::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("expected an integer");
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) throw ConfigError("expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  const std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

std::string init_name(InitKind k) {
  switch (k) {
    case InitKind::Bump: return "bump";
    case InitKind::Indicator: return "indicator";
    case InitKind::Table: return "table";
  }
  return "bump";
}

struct Key {
  std::string name;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

#define EXHEAT_DOUBLE(field) \
  Key { #field, [](const ScenarioConfig& c) { return format_double(c.field); }, \
        [](ScenarioConfig& c, const std::string& v) { c.field = parse_double(v); } }
#define EXHEAT_INT(field) \
  Key { #field, [](const ScenarioConfig& c) { return std::to_string(c.field); }, \
        [](ScenarioConfig& c, const std::string& v) { c.field = parse_int(v); } }
#define EXHEAT_LIST(field) \
  Key { #field, [](const ScenarioConfig& c) { return format_list(c.field); }, \
        [](ScenarioConfig& c, const std::string& v) { c.field = parse_list(v); } }
#define EXHEAT_STRING(field) \
  Key { #field, [](const ScenarioConfig& c) { return c.field; }, \
        [](ScenarioConfig& c, const std::string& v) { c.field = trim(v); } }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      Key{"scenario", [](const ScenarioConfig& c) { return c.scenario; },
          [](ScenarioConfig& c, const std::string& v) {
            if (!is_scenario(trim(v))) throw ConfigError("unknown scenario '" + trim(v) + "'");
            c.scenario = trim(v);
          }},
      EXHEAT_INT(dimension),
      EXHEAT_DOUBLE(r0),
      EXHEAT_DOUBLE(R_max),
      EXHEAT_INT(num_cells),
      EXHEAT_DOUBLE(p),
      EXHEAT_LIST(p_values),
      EXHEAT_DOUBLE(q),
      EXHEAT_DOUBLE(dt_initial),
      EXHEAT_DOUBLE(dt_growth),
      EXHEAT_DOUBLE(dt_cap_factor),
      EXHEAT_DOUBLE(t_end),
      EXHEAT_LIST(output_times),
      EXHEAT_INT(startup_steps),
      EXHEAT_INT(snapshots_per_decade),
      Key{"init", [](const ScenarioConfig& c) { return init_name(c.init); },
          [](ScenarioConfig& c, const std::string& v) {
            const std::string s = trim(v);
            if (s == "bump") c.init = InitKind::Bump;
            else if (s == "indicator") c.init = InitKind::Indicator;
            else if (s == "table") c.init = InitKind::Table;
            else throw ConfigError("init must be bump, indicator or table, got '" + s + "'");
          }},
      EXHEAT_DOUBLE(bump_center),
      EXHEAT_DOUBLE(bump_width),
      EXHEAT_DOUBLE(bump_amplitude),
      EXHEAT_DOUBLE(indicator_a),
      EXHEAT_DOUBLE(indicator_b),
      EXHEAT_STRING(table_path),
      EXHEAT_DOUBLE(probe_radius),
      EXHEAT_STRING(output),
  };
  return table;
}

#undef EXHEAT_DOUBLE
#undef EXHEAT_INT
#undef EXHEAT_LIST
#undef EXHEAT_STRING

const Key* find_key(const std::string& name) {
  for (const auto& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

struct Preset {
  std::string name;
  std::string summary;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"linear-conservation", "phi-mass of the linear flow is constant"},
      {"linear-rates", "L^q decay exponents of the linear flow"},
      {"indicator-limit", "S(t) applied to an indicator approaches phi near the obstacle"},
      {"energy-identity", "M(u(t)) + int_0^t int u^p phi = M(u0)"},
      {"dichotomy", "vanishing or positive limit of the phi-mass across p"},
      {"subsolution", "u >= h(t) S(t) u0 and 0 <= u <= sup u0"},
      {"asymptotic-profile", "weighted distance between u(t) and S(t) u_inf"},
      {"gaussian-profile", "distance between u(t) and M_inf phi G(t)"},
      {"testfn-suite", "cut-off bound, Theta exponents, Y inequality, classification"},
      {"oracle-convergence", "linear solver against the image-kernel oracles"},
      {"integral-lemmas", "log-power integral bounds and regime tags"},
  };
  return table;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("expected a number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (*end != '\0') throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.push_back(p.name);
    return out;
  }();
  return names;
}

std::string scenario_summary(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p.summary;
  return "";
}

bool is_scenario(const std::string& name) {
  const auto& n = scenario_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ScenarioConfig preset(const std::string& scenario) {
  if (!is_scenario(scenario)) throw ConfigError("unknown scenario '" + scenario + "'");
  ScenarioConfig c;
  c.scenario = scenario;
  c.output = "out/" + scenario;
  if (scenario == "linear-conservation") {
    c.t_end = 50.0;
  } else if (scenario == "linear-rates") {
    c.bump_center = 1.5;
    c.bump_width = 0.5;
    c.R_max = 101.0;
  } else if (scenario == "indicator-limit") {
    c.R_max = 201.0;
    c.t_end = 100.0;
    c.output_times = {10.0, 100.0};
    c.dt_initial = 1e-4;
    c.snapshots_per_decade = 0;
  } else if (scenario == "energy-identity") {
    c.t_end = 50.0;
  } else if (scenario == "dichotomy") {
    c.p_values = {1.5, 2.0};
  } else if (scenario == "asymptotic-profile" || scenario == "gaussian-profile") {
    c.p = 2.5;
  } else if (scenario == "testfn-suite") {
    c.p = 5.0 / 3.0;
  } else if (scenario == "oracle-convergence") {
    c.R_max = 21.0;
    c.t_end = 1.0;
    c.dt_growth = 1.0;
    c.bump_center = 6.0;
    c.bump_width = 2.0;
    c.snapshots_per_decade = 0;
  } else if (scenario == "integral-lemmas") {
    c.t_end = 100.0;
  }
  return c;
}

bool is_key(const std::string& key) { return find_key(key) != nullptr; }

void set_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError("unknown key '" + key + "'");
  try {
    k->set(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

ScenarioConfig parse_config(const std::string& text) {
  std::vector<std::pair<int, std::pair<std::string, std::string>>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string scenario;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!find_key(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (seen.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' repeats line " +
                        std::to_string(seen[key]));
    seen[key] = lineno;
    if (key == "scenario") scenario = value;
    entries.push_back({lineno, {key, value}});
  }
  if (scenario.empty()) throw ConfigError("missing key 'scenario'");
  if (!is_scenario(scenario))
    throw ConfigError("line " + std::to_string(seen["scenario"]) + ": unknown scenario '" + scenario + "'");
  ScenarioConfig cfg = preset(scenario);
  for (const auto& [ln, kv] : entries) {
    try {
      set_key(cfg, kv.first, kv.second);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(ln) + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

}  // namespace exheat::cli
