#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "exheat/config.hpp"
#include "exheat/csv.hpp"
#include "exheat/scenarios.hpp"
#include "exheat/sweep.hpp"

using namespace exheat::cli;

namespace {

constexpr int kPass = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;

void print_result(const RunResult& r, const std::string& prefix, bool quiet) {
  if (!quiet) {
    for (const auto& m : r.messages) std::cout << prefix << m << "\n";
    for (const auto& w : r.warnings) std::cout << prefix << "warning: " << w << "\n";
    for (const auto& c : r.checks)
      std::cout << prefix << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " [" + c.detail + "]")
                << "\n";
  }
  if (const Check* f = r.first_failure())
    std::cerr << prefix << "assertion failed: " << f->name << (f->detail.empty() ? "" : " [" + f->detail + "]") << "\n";
}

ScenarioConfig load(const std::string& path, const std::string& out, int cells) {
  ScenarioConfig cfg = load_config(path);
  if (!out.empty()) cfg.output = out;
  if (cells > 0) cfg.num_cells = cells;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semilinear heat flow with absorption on exterior domains"};
  app.require_subcommand(1);
  std::string out;
  int cells = 0;
  bool quiet = false;
  app.add_option("--out", out, "Output directory (overrides the config)");
  app.add_option("--cells", cells, "Number of grid cells (overrides num_cells)")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Only report failures");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", config_path, "Config file")->required();

  std::string sweep_path, axis_text;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter axis");
  sweep->add_option("config", sweep_path, "Config file")->required();
  sweep->add_option("--axis", axis_text, "key=v1,v2,...");

  auto* list = app.add_subcommand("list-scenarios", "List the preset scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*list) {
      for (const auto& name : scenario_names()) std::cout << name << "  " << scenario_summary(name) << "\n";
      return kPass;
    }
    if (*run) {
      const ScenarioConfig cfg = load(config_path, out, cells);
      const RunResult r = run_scenario(cfg);
      print_result(r, "", quiet);
      if (!quiet) std::cout << "artifacts in " << cfg.output << "\n";
      return r.passed() ? kPass : kAssertion;
    }
    if (*sweep) {
      const ScenarioConfig base = load(sweep_path, out, cells);
      const SweepAxis axis = axis_text.empty() ? SweepAxis{} : parse_axis(axis_text);
      const SweepResult res = run_sweep(base, axis);
      std::filesystem::create_directories(base.output);
      write_file((std::filesystem::path(base.output) / "rates.csv").string(), rates_csv(res.rates));
      for (const auto& cell : res.cells) {
        const std::string prefix = cell.value.empty() ? "" : "[" + axis.key + "=" + cell.value + "] ";
        if (!cell.error.empty())
          std::cerr << prefix << "failed: " << cell.error << "\n";
        else
          print_result(cell.result, prefix, quiet);
      }
      if (!quiet) std::cout << "aggregate in " << (std::filesystem::path(base.output) / "rates.csv").string() << "\n";
      if (res.any_config_error) return kUsage;
      return res.all_passed() ? kPass : kAssertion;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertion;
  }
  return kUsage;
}
