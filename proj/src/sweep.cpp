#include "exheat/sweep.hpp"

#include <atomic>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

namespace exheat::cli {

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("axis must look like key=v1,v2,...");
  SweepAxis axis;
  axis.key = text.substr(0, eq);
  if (!is_key(axis.key)) throw ConfigError("unknown axis key '" + axis.key + "'");
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) axis.values.push_back(item);
  return axis;
}

bool SweepResult::all_passed() const {
  for (const auto& c : cells)
    if (!c.ok()) return false;
  return true;
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepAxis& axis, unsigned workers, const RunOptions& options) {
  SweepResult out;
  if (axis.values.empty()) {
    out.cells.push_back({"", base, {}, ""});
  } else {
    for (const auto& v : axis.values) {
      SweepCell cell;
      cell.value = v;
      cell.config = base;
      cell.config.output = (std::filesystem::path(base.output) / (axis.key + "=" + v)).string();
      try {
        set_key(cell.config, axis.key, v);
      } catch (const ConfigError& e) {
        cell.error = e.what();
        out.any_config_error = true;
      }
      out.cells.push_back(std::move(cell));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.cells.size(); i = next++) {
      auto& cell = out.cells[i];
      if (!cell.error.empty()) continue;
      try {
        cell.result = run_scenario(cell.config, options);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(out.cells.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& cell : out.cells) {
    const auto* fail = cell.result.first_failure();
    const bool crashed = fail && fail->name == "run completed";
    if (!cell.error.empty() || crashed) {
      out.rates.push_back({cell.config.dimension, cell.config.p, cell.config.q, cell.config.scenario + ":failed", nan,
                           nan, nan, nan, nan});
      continue;
    }
    for (const auto& r : cell.result.rates) out.rates.push_back(r);
  }
  return out;
}

}  // namespace exheat::cli
