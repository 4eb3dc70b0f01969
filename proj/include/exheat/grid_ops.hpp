#pragma once

#include <span>

namespace exheat::grid_ops {

/// Three-point operator rows; row i acts on (x[i-1], x[i], x[i+1]).
/// Rows 0 and n-1 are Dirichlet rows and are never applied.
struct Stencil {
  std::span<const double> lower;
  std::span<const double> diag;
  std::span<const double> upper;
};

// OpenMP kernels. Reductions sum fixed-size blocks in index order, so the
// result does not depend on the thread count.

/// out = x + scale * (A x) on interior rows, 0 on boundary rows.
void apply_shifted(const Stencil& a, std::span<const double> x, double scale, std::span<double> out);
/// out[i] = max(x[i], 0)^p
void power_map(std::span<const double> x, double p, std::span<double> out);
/// x[i] += scale * y[i]
void axpy(double scale, std::span<const double> y, std::span<double> x);
/// x[i] = max(x[i], 0); returns sum of w[i] * phi[i] * |removed part|.
double clamp_nonnegative(std::span<double> x, std::span<const double> w, std::span<const double> phi);
/// acc[i] += half_dt * (f0[i] + f1[i])
void trapezoid_accumulate(double half_dt, std::span<const double> f0, std::span<const double> f1, std::span<double> acc);
/// sum w[i] * a[i] * b[i]
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
/// sum w[i] * a[i] * |b[i]|
double weighted_abs_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> x);
bool all_finite(std::span<const double> x);

/// Serial reference kernels with the textbook loop order; the OpenMP
/// versions are tested against these.
namespace serial {
void apply_shifted(const Stencil& a, std::span<const double> x, double scale, std::span<double> out);
void power_map(std::span<const double> x, double p, std::span<double> out);
void axpy(double scale, std::span<const double> y, std::span<double> x);
double clamp_nonnegative(std::span<double> x, std::span<const double> w, std::span<const double> phi);
void trapezoid_accumulate(double half_dt, std::span<const double> f0, std::span<const double> f1, std::span<double> acc);
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double weighted_abs_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> x);
bool all_finite(std::span<const double> x);
}  // namespace serial

/// Threshold below which the OpenMP kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 8192;

}  // namespace exheat::grid_ops
