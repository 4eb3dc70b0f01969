#include <algorithm>
#include <cmath>

#include "exheat/grid_ops.hpp"

namespace exheat::grid_ops::serial {

void apply_shifted(const Stencil& a, std::span<const double> x, double scale, std::span<double> out) {
  const std::size_t n = x.size();
  out[0] = 0.0;
  out[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = x[i] + scale * (a.lower[i] * x[i - 1] + a.diag[i] * x[i] + a.upper[i] * x[i + 1]);
}

void power_map(std::span<const double> x, double p, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? std::pow(x[i], p) : 0.0;
}

void axpy(double scale, std::span<const double> y, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += scale * y[i];
}

double clamp_nonnegative(std::span<double> x, std::span<const double> w, std::span<const double> phi) {
  double removed = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) {
      removed += w[i] * phi[i] * -x[i];
      x[i] = 0.0;
    }
  }
  return removed;
}

void trapezoid_accumulate(double half_dt, std::span<const double> f0, std::span<const double> f1, std::span<double> acc) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += half_dt * (f0[i] + f1[i]);
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

double weighted_abs_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * std::abs(b[i]);
  return s;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace exheat::grid_ops::serial
