#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "exheat/grid_ops.hpp"

namespace exheat::grid_ops {

namespace {

constexpr std::size_t kBlock = 1024;

using Index = std::ptrdiff_t;

// Sums term(i) over [0, n) in blocks of kBlock; partial sums are combined
// in block order so the result is independent of the team size.
template <typename Term>
double blocked_sum(std::size_t n, Term term) {
  const Index blocks = static_cast<Index>((n + kBlock - 1) / kBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (Index b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace

void apply_shifted(const Stencil& a, std::span<const double> x, double scale, std::span<double> out) {
  const Index n = static_cast<Index>(x.size());
  out[0] = 0.0;
  out[static_cast<std::size_t>(n - 1)] = 0.0;
#pragma omp parallel for schedule(static) if (x.size() >= kParallelThreshold)
  for (Index i = 1; i < n - 1; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = x[k] + scale * (a.lower[k] * x[k - 1] + a.diag[k] * x[k] + a.upper[k] * x[k + 1]);
  }
}

void power_map(std::span<const double> x, double p, std::span<double> out) {
  const Index n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelThreshold)
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = x[k] > 0.0 ? std::pow(x[k], p) : 0.0;
  }
}

void axpy(double scale, std::span<const double> y, std::span<double> x) {
  const Index n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelThreshold)
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    x[k] += scale * y[k];
  }
}

double clamp_nonnegative(std::span<double> x, std::span<const double> w, std::span<const double> phi) {
  return blocked_sum(x.size(), [&](std::size_t i) {
    if (x[i] >= 0.0) return 0.0;
    const double removed = -x[i];
    x[i] = 0.0;
    return w[i] * phi[i] * removed;
  });
}

void trapezoid_accumulate(double half_dt, std::span<const double> f0, std::span<const double> f1, std::span<double> acc) {
  const Index n = static_cast<Index>(acc.size());
#pragma omp parallel for schedule(static) if (acc.size() >= kParallelThreshold)
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    acc[k] += half_dt * (f0[k] + f1[k]);
  }
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return blocked_sum(w.size(), [&](std::size_t i) { return w[i] * a[i] * b[i]; });
}

double weighted_abs_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return blocked_sum(w.size(), [&](std::size_t i) { return w[i] * a[i] * std::abs(b[i]); });
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  const Index n = static_cast<Index>(x.size());
#pragma omp parallel for reduction(max : m) schedule(static) if (x.size() >= kParallelThreshold)
  for (Index i = 0; i < n; ++i) m = std::max(m, std::abs(x[static_cast<std::size_t>(i)]));
  return m;
}

bool all_finite(std::span<const double> x) {
  int bad = 0;
  const Index n = static_cast<Index>(x.size());
#pragma omp parallel for reduction(+ : bad) schedule(static) if (x.size() >= kParallelThreshold)
  for (Index i = 0; i < n; ++i) bad += std::isfinite(x[static_cast<std::size_t>(i)]) ? 0 : 1;
  return bad == 0;
}

}  // namespace exheat::grid_ops
