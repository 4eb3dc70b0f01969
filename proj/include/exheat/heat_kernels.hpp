#pragma once

#include <map>
#include <string>
#include <vector>

#include "exheat/field.hpp"

namespace exheat::kernels {

/// Whole-space heat kernel (4 pi t)^{-N/2} exp(-r^2 / 4t).
double gaussian(int dimension, double t, double r);
double log_gaussian(int dimension, double t, double r);

/// Dirichlet heat semigroup on (0, inf) by odd reflection:
///   int_0^inf [G1(t, x - y) - G1(t, x + y)] u0(y) dy
/// with the trapezoid rule on the data grid (u0 must live on an N = 1 grid).
double halfline_image_solution(double t, double x, const Field& u0);

/// Same kernel evaluated at every node of u0's grid.
std::vector<double> halfline_image_profile(double t, const Field& u0);

/// Radial Dirichlet semigroup outside B(0, r0) in R^3 via w = r u, which
/// turns the problem into the half-line one in s = r - r0.
double exterior_ball_image_solution_3d(double t, double r, const Field& u0);
std::vector<double> exterior_ball_image_profile_3d(double t, const Field& u0);

/// (1+t)^power * (1 + log(1+t))^log_power.
struct RatePair {
  double power_exponent = 0.0;
  double log_exponent = 0.0;

  double operator()(double t) const;
};

/// Extra decay of the exterior problem relative to R^N.
RatePair rate_E(int dimension);
/// Decay of the absorbed tail in the non-vanishing regime.
RatePair rate_E_tilde(int dimension, double p);

enum class Regime {
  PowerGrowth,      // r > -1
  LogGrowth,        // r = -1, m > -1
  LogLogEquality,   // r = -1, m = -1
  Bounded,          // otherwise (finite integral)
  PowerTail,        // tail integral, r < -1
  LogTail,          // tail integral, r = -1, m < -1
  Divergent,        // tail integral, otherwise
};

std::string to_string(Regime regime);

/// Bound constants indexed by regime, calibrated on a probe lattice.
using BoundConstants = std::map<Regime, double>;

struct IntegralBound {
  double quadrature = 0.0;
  double shape = 0.0;  // bound without its constant
  double bound = 0.0;  // constant * shape
  Regime regime = Regime::Bounded;
  bool divergent = false;
};

/// (1+s)^r (1 + log(1+s))^m.
double log_power_weight(double r, double m, double s);

Regime regime_0_t(double r, double m);
Regime regime_t_inf(double r, double m);

/// int_0^t (1+s)^r (1+log(1+s))^m ds with its four-case bound.
IntegralBound integral_0_t_bound(double r, double m, double t, const BoundConstants& constants = {});

/// int_t^inf of the same weight; divergent cases are tagged, never truncated.
IntegralBound integral_t_inf_bound(double r, double m, double t, const BoundConstants& constants = {});

struct ProbeLattice {
  std::vector<double> r_values;
  std::vector<double> m_values;
  std::vector<double> t_values;
};

ProbeLattice default_probe_lattice();
ProbeLattice default_validation_lattice();

/// One constant per regime: the largest quadrature/shape ratio on the lattice.
BoundConstants calibrate_0_t(const ProbeLattice& probe);
BoundConstants calibrate_t_inf(const ProbeLattice& probe);

}  // namespace exheat::kernels
