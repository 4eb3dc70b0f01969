#pragma once

#include <functional>

namespace exheat::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct Tolerance {
  double absolute = 1e-10;
  double relative = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) with bisection of the interval
/// carrying the largest error estimate.
Result integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol = {});

/// Integral over [a, inf) via s = a + sigma / (1 - sigma).
Result integrate_to_infinity(const std::function<double(double)>& f, double a, Tolerance tol = {});

}  // namespace exheat::quad
