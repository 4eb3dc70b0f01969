#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "exheat/field.hpp"
#include "exheat/grid_ops.hpp"

namespace exheat {

enum class Scheme { Linear, Semilinear };

std::string to_string(Scheme scheme);

struct SolverConfig {
  Scheme scheme = Scheme::Semilinear;
  double p = 2.0;  // ignored by the linear flow
  double dt_initial = 1e-3;
  double dt_growth = 1.025;
  double dt_cap_factor = 0.1;  // dt <= dt_cap_factor * (1 + t)
  double t_end = 1.0;
  std::vector<double> output_times;  // subset of (0, t_end]; t_end is always added
  int startup_steps = 2;             // implicit Euler steps (two half-steps each) before Crank-Nicolson

  void validate() const;
};

/// Raised when the outer truncation boundary has absorbed more than 1e-4 of
/// the current phi-weighted L1 norm.
class BoundaryFluxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scalars recorded after every time step (and once at t = 0).
struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  double max_abs = 0.0;
  double mass_phi = 0.0;
  double absorbed_phi = 0.0;   // int_0^t sum w phi u^p, trapezoid in t
  double boundary_loss = 0.0;  // cumulative phi-mass through R_max
  double clamped = 0.0;        // cumulative phi-mass removed by clamping
};

struct Snapshot {
  double t = 0.0;
  Field u;
  std::vector<double> absorbed;  // A_i(t) = int_0^t u(s, r_i)^p ds
};

struct Trajectory {
  SolverConfig config;
  GridPtr grid;
  std::vector<Snapshot> snapshots;  // first entry is t = 0
  std::vector<StepRecord> steps;    // first entry is t = 0
  std::vector<std::string> warnings;
  bool flux_warning = false;
  double max_clamped_fraction = 0.0;  // worst per-step clamped mass / phi-mass

  const Snapshot& initial() const { return snapshots.front(); }
  const Snapshot& final() const { return snapshots.back(); }
  std::vector<double> times() const;
};

/// phi-corrected flux-form radial Laplacian. Rows are chosen so that the
/// sampled harmonic weight is an exact null vector, which makes the discrete
/// phi-mass sum w_i phi_i u_i change only through the outer boundary.
class RadialOperator {
 public:
  explicit RadialOperator(const RadialGrid& grid);

  grid_ops::Stencil stencil() const { return {lower_, diag_, upper_}; }
  std::span<const double> phi() const { return phi_; }
  std::span<const double> weights() const { return weights_; }

  /// Rate at which phi-mass leaves through R_max.
  double outer_flux(std::span<const double> u) const;

  /// Solves (I - scale * A) x = rhs with homogeneous Dirichlet rows.
  void solve_shifted(double scale, std::span<const double> rhs, std::span<double> x) const;

 private:
  std::vector<double> lower_, diag_, upper_;
  std::vector<double> phi_, weights_;
  double outer_coefficient_ = 0.0;
  mutable std::vector<double> scratch_c_, scratch_d_;
};

/// One IMEX step: Crank-Nicolson diffusion, absorption -u^p evaluated at an
/// implicit-Euler half-step predictor, clamped at zero.
Field step(const Field& u, double dt, const SolverConfig& cfg);

Trajectory evolve(const Field& u0, const SolverConfig& cfg);

/// S(t) u0 with the default step control.
Field apply_semigroup(const Field& u0, double t);
Field apply_semigroup(const Field& u0, double t, SolverConfig control);

struct IndicatorLimitSeries {
  std::vector<double> t;
  std::vector<double> window_discrepancy;           // max |S(t)1 - phi| on [r0, r0 + 2]
  std::vector<std::vector<double>> probe_values;    // S(t)1 at each probe radius
  std::vector<double> probe_radii;
  double indicator_edge = 0.0;                      // indicator is 1 on (r0, edge]
};

/// S(t) applied to the indicator of (r0, R_max - 8 sqrt(t_max)]. Requires N >= 3.
IndicatorLimitSeries indicator_limit_check(const DomainSpec& domain, const RadialGrid& grid,
                                           const std::vector<double>& t_list,
                                           const std::vector<double>& probe_radii = {});

/// Linear interpolation of a field at radius r.
double interpolate(const Field& u, double r);

namespace detail {
struct StepHooks {
  bool diffusion = true;
};
Field step_with_hooks(const Field& u, double dt, const SolverConfig& cfg, StepHooks hooks);
}  // namespace detail

}  // namespace exheat
