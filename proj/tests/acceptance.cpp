// Acceptance report: one PASS/FAIL line per criterion at reference resolution.
// Exit status is nonzero only when a criterion outside kKnownFailures fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "exheat/config.hpp"
#include "exheat/scenarios.hpp"

using namespace exheat::cli;

namespace {

struct Verdict {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

struct Criterion {
  std::string name;
  std::vector<ScenarioConfig> runs;
  std::function<Verdict(const std::vector<RunResult>&)> judge;
};

// Criteria expected to fail, with the reason printed next to the FAIL line.
const std::map<std::string, std::string> kKnownFailures = {
    {"linear decay exponents",
     "N=2 log power stays near -0.65 on [20, 200] at every resolution tried; pre-asymptotic, see README"},
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

ScenarioConfig make(const std::string& scenario, int N, std::function<void(ScenarioConfig&)> tweak = {}) {
  ScenarioConfig c = preset(scenario);
  c.dimension = N;
  if (tweak) tweak(c);
  return c;
}

void checks_into(Verdict& v, const RunResult& r, const std::string& label) {
  for (const auto& c : r.checks) v.require(c.passed, label + " " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")"));
}

std::vector<RunResult> run_all(const std::vector<ScenarioConfig>& configs) {
  std::vector<RunResult> out(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) out[i] = run_scenario(configs[i], {.write_outputs = false});
  };
  const unsigned n = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), configs.size());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> list;

  list.push_back({"oracle equivalence",
                  {make("oracle-convergence", 1,
                        [](ScenarioConfig& c) {
                          c.R_max = 20.0;
                          c.bump_center = 5.0;
                        }),
                   make("oracle-convergence", 3)},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    for (std::size_t i = 0; i < r.size(); ++i) {
                      const std::string N = i == 0 ? "N=1" : "N=3";
                      checks_into(v, r[i], N);
                    }
                    v.detail = "N=1 err " + num(r[0].values.at("error_coarse")) + " ratio " +
                               num(r[0].values.at("error_ratio")) + ", N=3 err " + num(r[1].values.at("error_coarse")) +
                               " ratio " + num(r[1].values.at("error_ratio"));
                    return v;
                  }});

  {
    Criterion c{"phi-mass conservation", {}, {}};
    for (int N : {1, 2, 3}) c.runs.push_back(make("linear-conservation", N));
    c.judge = [](const std::vector<RunResult>& r) {
      Verdict v;
      double worst = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        Verdict inner;
        checks_into(inner, r[i], "N=" + std::to_string(i + 1));
        v.passed = v.passed && inner.passed;
        if (r[i].values.count("max_relative_drift")) worst = std::max(worst, r[i].values.at("max_relative_drift"));
      }
      v.detail = "max drift " + num(worst) + " over N=1,2,3";
      return v;
    };
    list.push_back(std::move(c));
  }

  {
    const std::vector<std::pair<int, double>> pairs = {{1, 1.5}, {1, 2.5}, {2, 1.8}, {2, 2.5}, {3, 1.5}, {3, 2.0}};
    Criterion c{"energy identity", {}, {}};
    for (auto [N, p] : pairs) c.runs.push_back(make("energy-identity", N, [p](ScenarioConfig& s) { s.p = p; }));
    for (auto [N, p] : pairs)
      c.runs.push_back(make("energy-identity", N, [p](ScenarioConfig& s) {
        s.p = p;
        s.dt_initial *= 0.5;
        s.dt_cap_factor *= 0.5;
        s.dt_growth = 1.0 + 0.5 * (s.dt_growth - 1.0);
      }));
    c.judge = [n = pairs.size()](const std::vector<RunResult>& r) {
      Verdict v;
      double worst = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Verdict inner;
        checks_into(inner, r[i], "");
        v.passed = v.passed && inner.passed && r[n + i].passed();
        const double a = r[i].values.at("max_residual"), b = r[n + i].values.at("max_residual");
        worst = std::max(worst, a);
        ratio_lo = std::min(ratio_lo, a / b);
        ratio_hi = std::max(ratio_hi, a / b);
      }
      const bool second_order = ratio_lo >= 3.0 && ratio_hi <= 6.0;
      v.passed = v.passed && second_order;
      v.detail = "max residual " + num(worst) + ", refinement ratio " + num(ratio_lo) + ".." + num(ratio_hi);
      return v;
    };
    list.push_back(std::move(c));
  }

  list.push_back({"linear decay exponents",
                  {make("linear-rates", 1,
                        [](ScenarioConfig& c) {
                          c.bump_center = 1.0;
                          c.R_max = 151.0;
                        }),
                   make("linear-rates", 2,
                        [](ScenarioConfig& c) {
                          c.bump_center = 1.25;
                          c.bump_width = 0.25;
                          c.R_max = 151.0;
                        }),
                   make("linear-rates", 3, [](ScenarioConfig& c) { c.R_max = 151.0; })},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    const char* labels[] = {"N=1", "N=2", "N=3"};
                    for (std::size_t i = 0; i < r.size(); ++i) {
                      Verdict inner;
                      checks_into(inner, r[i], labels[i]);
                      v.passed = v.passed && inner.passed;
                    }
                    v.detail = "N=1 a=" + num(r[0].values.at("fitted_a")) + ", N=2 a=" + num(r[1].values.at("fitted_a")) +
                               " b=" + num(r[1].values.at("fitted_b")) + " (target -1 +- 0.3), N=3 a=" +
                               num(r[2].values.at("fitted_a"));
                    return v;
                  }});

  list.push_back({"dichotomy",
                  {make("dichotomy", 1, [](ScenarioConfig& c) { c.p_values = {1.5, 2.0, 2.5}; }),
                   make("dichotomy", 2, [](ScenarioConfig& c) { c.p_values = {2.0, 2.5}; }),
                   make("dichotomy", 3, [](ScenarioConfig& c) { c.p_values = {1.5, 5.0 / 3.0, 2.0}; })},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    for (std::size_t i = 0; i < r.size(); ++i) checks_into(v, r[i], "N=" + std::to_string(i + 1));
                    std::string failures;
                    for (const auto& res : r)
                      for (const auto& c : res.checks)
                        if (!c.passed) failures += " " + c.name;
                    v.detail = "8 (N,p) cells" + (failures.empty() ? std::string(", all checks hold") : ", failing:" + failures) +
                               "; M_inf(3,2)=" + num(r[2].values.at("M_inf p=2")) + " >= " +
                               num(r[2].values.at("h_end p=2") * r[2].values.at("M0 p=2"));
                    return v;
                  }});

  {
    Criterion c{"comparison and subsolution", {}, {}};
    for (int N : {1, 2, 3}) c.runs.push_back(make("subsolution", N));
    c.judge = [](const std::vector<RunResult>& r) {
      Verdict v;
      double viol = 0.0, mn = 1e300, over = -1e300;
      for (std::size_t i = 0; i < r.size(); ++i) {
        Verdict inner;
        checks_into(inner, r[i], "");
        v.passed = v.passed && inner.passed;
        viol = std::max(viol, r[i].values.at("max_violation"));
        mn = std::min(mn, r[i].values.at("min_value"));
        over = std::max(over, r[i].values.at("max_overshoot"));
      }
      v.detail = "max violation " + num(viol) + ", min u " + num(mn) + ", max overshoot " + num(over);
      return v;
    };
    list.push_back(std::move(c));
  }

  list.push_back({"asymptotic profile",
                  {make("asymptotic-profile", 3), make("asymptotic-profile", 1)},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    Verdict a, b;
                    checks_into(a, r[0], "N=3");
                    checks_into(b, r[1], "N=1");
                    v.passed = a.passed && b.passed;
                    v.detail = "distance ratio N=3 " + num(r[0].values.at("distance_ratio")) + ", N=1 " +
                               num(r[1].values.at("distance_ratio")) + "; envelope bound " +
                               (v.passed ? "holds" : "see checks: " + a.detail + " " + b.detail);
                    return v;
                  }});

  list.push_back({"gaussian profile",
                  {make("gaussian-profile", 3)},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    Verdict inner;
                    checks_into(inner, r[0], "");
                    v.passed = inner.passed;
                    v.detail = "distance ratio " + num(r[0].values.at("distance_ratio")) + " (<= 0.6)";
                    return v;
                  }});

  list.push_back({"test-function suite",
                  {make("testfn-suite", 1, [](ScenarioConfig& c) { c.p = 2.0; }),
                   make("testfn-suite", 2, [](ScenarioConfig& c) { c.p = 2.0; }), make("testfn-suite", 3)},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    std::string d;
                    for (std::size_t i = 0; i < r.size(); ++i) {
                      Verdict inner;
                      checks_into(inner, r[i], "");
                      v.passed = v.passed && inner.passed;
                      d += (i ? ", " : "") + std::string("N=") + std::to_string(i + 1) + " variation " +
                           num(r[i].values.at("cutoff_variation")) + " theta " + num(r[i].values.at("theta_power"));
                    }
                    v.detail = d;
                    return v;
                  }});

  list.push_back({"integral lemmas",
                  {preset("integral-lemmas")},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    Verdict inner;
                    checks_into(inner, r[0], "");
                    v.passed = inner.passed;
                    v.detail = "equality error " + num(r[0].values.at("equality_error")) + "; " + r[0].messages.back();
                    return v;
                  }});

  list.push_back({"indicator limit",
                  {preset("indicator-limit")},
                  [](const std::vector<RunResult>& r) {
                    Verdict v;
                    v.passed = r[0].passed();
                    v.detail = "|S(t)1 - 0.5| at r=2: " + num(r[0].values.at("deviation_first")) + " (t=10) -> " +
                               num(r[0].values.at("deviation_last")) + " (t=100)";
                    return v;
                  }});

  return list;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  auto list = criteria();
  std::vector<ScenarioConfig> all;
  std::vector<std::size_t> offset;
  for (const auto& c : list) {
    offset.push_back(all.size());
    all.insert(all.end(), c.runs.begin(), c.runs.end());
  }
  const auto results = run_all(all);

  int unexpected = 0, known = 0;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::vector<RunResult> mine(results.begin() + offset[k], results.begin() + offset[k] + list[k].runs.size());
    Verdict v;
    try {
      v = list[k].judge(mine);
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail = std::string("evaluation failed: ") + e.what();
      for (const auto& r : mine)
        if (const auto* f = r.first_failure()) v.detail += "; " + f->name + ": " + f->detail;
    }
    const auto kf = kKnownFailures.find(list[k].name);
    std::string suffix;
    if (!v.passed && kf != kKnownFailures.end()) {
      ++known;
      suffix = " [known: " + kf->second + "]";
    } else if (!v.passed) {
      ++unexpected;
    } else if (kf != kKnownFailures.end()) {
      suffix = " [listed as known failure but passed]";
    }
    std::printf("%s %s: %s%s\n", v.passed ? "PASS" : "FAIL", list[k].name.c_str(), v.detail.c_str(), suffix.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu criteria, %d unexpected failures, %d known failures, %.1f s\n", list.size(), unexpected, known, secs);
  return unexpected == 0 ? 0 : 1;
}
