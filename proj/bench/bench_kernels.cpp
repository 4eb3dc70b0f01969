#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "exheat/grid_ops.hpp"

namespace ops = exheat::grid_ops;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  f();
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

volatile double sink = 0.0;

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4'000'000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
  std::vector<double> x(n), y(n), w(n), phi(n), out(n), lo(n, 1.0), di(n, -2.0), up(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(i) / n;
    x[i] = std::sin(7.0 * r) + 0.1;
    y[i] = std::cos(3.0 * r);
    w[i] = 1.0 + r;
    phi[i] = r;
  }
  const ops::Stencil st{lo, di, up};

  std::printf("n = %zu, threads = %d, reps = %d\n", n, omp_get_max_threads(), reps);
  std::printf("%-22s %12s %12s %8s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
  auto row = [&](const char* name, const std::function<void()>& s, const std::function<void()>& p) {
    const double ts = seconds(s, reps), tp = seconds(p, reps);
    std::printf("%-22s %12.3f %12.3f %8.2f\n", name, 1e3 * ts, 1e3 * tp, ts / tp);
  };
  row("apply_shifted", [&] { ops::serial::apply_shifted(st, x, 0.5, out); },
      [&] { ops::apply_shifted(st, x, 0.5, out); });
  row("power_map", [&] { ops::serial::power_map(x, 2.5, out); }, [&] { ops::power_map(x, 2.5, out); });
  row("axpy", [&] { ops::serial::axpy(1e-9, y, out); }, [&] { ops::axpy(1e-9, y, out); });
  row("trapezoid_accumulate", [&] { ops::serial::trapezoid_accumulate(0.5, x, y, out); },
      [&] { ops::trapezoid_accumulate(0.5, x, y, out); });
  row("weighted_dot", [&] { sink = ops::serial::weighted_dot(w, phi, x); },
      [&] { sink = ops::weighted_dot(w, phi, x); });
  row("weighted_abs_dot", [&] { sink = ops::serial::weighted_abs_dot(w, phi, y); },
      [&] { sink = ops::weighted_abs_dot(w, phi, y); });
  row("max_abs", [&] { sink = ops::serial::max_abs(y); }, [&] { sink = ops::max_abs(y); });
  row("all_finite", [&] { sink = ops::serial::all_finite(y); }, [&] { sink = ops::all_finite(y); });
  return 0;
}
