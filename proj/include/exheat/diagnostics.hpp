#pragma once

#include <string>
#include <vector>

#include "exheat/field.hpp"
#include "exheat/heat_kernels.hpp"
#include "exheat/solver.hpp"

namespace exheat::diag {

struct Series {
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const { return t.size(); }
  void push(double time, double v) {
    t.push_back(time);
    value.push_back(v);
  }
};

/// Samples with t in [t_lo, t_hi].
Series window(const Series& s, double t_lo, double t_hi);
/// Linear interpolation; clamps outside the sampled range.
double value_at(const Series& s, double t);

double mass_phi(const Field& u, const HarmonicWeight& phi);

/// Unweighted L^q norm by radial quadrature (max for q = inf). With a weight,
/// returns ||u phi^{1/q}||_q.
double lq_norm(const Field& u, double q, const HarmonicWeight* weight = nullptr);

/// |M(t) + int_0^t int u^p phi - M(0)| / M(0) at each snapshot.
Series energy_identity_residual(const Trajectory& traj, const HarmonicWeight& phi);

struct UInfinity {
  Field u;
  double mass = 0.0;          // M(u_inf)
  double tail_mass = 0.0;     // phi-mass of the estimated int_{t_end}^inf u^p
  double tail_exponent = 0.0; // fitted decay exponent of the absorption rate
  double uncertainty = 0.0;
  bool flagged = false;       // uncertainty above 20% of |M(u_inf)|
};

/// u_inf = u0 - A(t_end) - tail, the tail extrapolated from the last decade
/// of the absorption rate sum w phi u^p.
UInfinity compute_u_infty(const Trajectory& traj, const HarmonicWeight& phi);

/// h(t) = (1 + (p-1) int_0^t ||S(tau) u0||_inf^{p-1} dtau)^{-1/(p-1)} at every
/// step of a linear trajectory.
Series subsolution_factor(const Trajectory& linear, double p);

struct ComparisonReport {
  double max_violation = 0.0;       // max (h S u0 - u)_+ over snapshots and nodes
  double mass_violation = 0.0;      // max (h M(u0) - M(u(t)))_+
  double max_overshoot = 0.0;       // max (u - ||u0||_inf)_+
  double min_value = 0.0;
};

ComparisonReport comparison_check(const Trajectory& semilinear, const Trajectory& linear, const Series& h,
                                  const HarmonicWeight& phi);

/// tilde-E(t) + (1/t) int_0^t tilde-E(s) ds.
double profile_envelope(int dimension, double p, double t);

struct ProfileDistance {
  Series distance;  // (1+t)^{N(1-1/q)/2} E_N(t) ||u(t) - S(t) u_inf||_q
  Series envelope;
};

/// S(t) u_inf is computed by a fresh linear evolution with the trajectory's
/// step control and snapshot times.
ProfileDistance profile_distance_S_u_infty(const Trajectory& traj, const Field& u_inf, double q);

/// t^{N(1-1/q)/2} ||u(t) - M_inf phi G(t, .)||_q over snapshots with t > 0.
Series profile_distance_gaussian(const Trajectory& traj, double m_inf, const HarmonicWeight& phi, double q);

/// Largest distance/envelope ratio over snapshots with 0 < t <= t_probe_max.
double calibrate_envelope_constant(const ProfileDistance& pd, double t_probe_max);

enum class TimeAxis { Shifted, Plain };

struct RateFit {
  double a = 0.0;
  double b = 0.0;
  double log_c = 0.0;
  double residual = 0.0;  // RMS in log space
  double t_lo = 0.0;
  double t_hi = 0.0;
  bool with_log = false;
};

/// Least squares for log v = log c + a log T + b log(1 + log T), T = 1 + t
/// (Shifted) or t (Plain). b is fixed at 0 unless with_log.
RateFit fit_rate(const Series& s, bool with_log, TimeAxis axis = TimeAxis::Shifted);

struct MassExtrapolation {
  double limit = 0.0;
  double coefficient = 0.0;
  double uncertainty = 0.0;
};

/// Fits M(t) = M_inf + c * shape(t) on the samples of `mass`.
MassExtrapolation extrapolate_mass(const Series& mass, const kernels::RatePair& shape);

struct MassReport {
  Series mass;
  Series absorbed;
  Series residual;
  MassExtrapolation extrapolated;
};

/// Mass bookkeeping for a semilinear trajectory; the limit uses the
/// tilde-E shape over the last decade. When tilde-E does not decay the limit is
/// the last mass with infinite uncertainty.
MassReport mass_report(const Trajectory& traj, const HarmonicWeight& phi);

/// Snapshot series of ||u(t)||_q.
Series norm_series(const Trajectory& traj, double q);
Series mass_series(const Trajectory& traj, const HarmonicWeight& phi);

}  // namespace exheat::diag
