#pragma once

#include <string>
#include <vector>

#include "exheat/geometry.hpp"
#include "exheat/heat_kernels.hpp"
#include "exheat/solver.hpp"

namespace exheat::testfn {

struct EtaValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Quintic smoothstep bridge: 0 for s <= 1/2, 1 for s >= 1, C^2 and
/// nondecreasing in between.
EtaValue eta(double s);

/// eta restricted to [1/2, 1].
double eta_star(double s);

/// phi_R = eta(xi_R)^{2p'}, xi_R(t, r) = ((r - R1)_+^2 + t) / R.
struct CutoffFamily {
  int dimension = 1;
  double p = 2.0;
  double R = 1.0;
  double R1 = 0.0;  // r0 for N >= 2, 0 for N = 1

  double conjugate() const { return p / (p - 1.0); }
  double xi(double t, double r) const;
  double value(double t, double r) const;
  double value_star(double t, double r) const;
};

CutoffFamily make_cutoff(const DomainSpec& domain, double p, double R);

/// Largest R (|d_t(phi phi_R)| + |Lap(phi phi_R)|) / (phi (phi_R*)^{1/p}) over
/// the (t, r) lattice, restricted to 1/2 < xi_R <= 1 and phi > 0.
double cutoff_bound_ratio(const CutoffFamily& family, const DomainSpec& domain, const std::vector<double>& t_grid,
                          const std::vector<double>& r_grid);

/// Same, on a lattice scaled to the support: t = R b, r = R1 + sqrt(R) a.
double cutoff_bound_ratio(const CutoffFamily& family, const DomainSpec& domain, int resolution = 200);

/// (1/R) int_0^R int_{Omega, (r-R1)^2 + t <= R} phi dx dt by nested quadrature.
double theta_base(const DomainSpec& domain, double R);
/// The inner integral in closed form, outer integral by quadrature.
double theta_base_closed_form(const DomainSpec& domain, double R);
/// Theta(R) = theta_base^{p-1}.
double theta(const DomainSpec& domain, double p, double R);

enum class Outcome { Vanishing, NonVanishing };
std::string to_string(Outcome outcome);

struct Classification {
  Outcome outcome = Outcome::Vanishing;  // p <= min{2, 1 + 2/N}
  double theta_power = 0.0;              // fitted large-R exponents of 1/Theta
  double theta_log_power = 0.0;
  bool theta_divergent = false;          // int^inf 1/Theta dR = inf
  kernels::Regime rate_regime = kernels::Regime::Bounded;
  bool rate_divergent = false;           // int^inf ((1+t)^{N/2} E_N)^{1-p} dt = inf
  bool agree = false;
};

Classification classify_dichotomy(int dimension, double p);

enum class YForm { UpperTail, Literal };

struct YSeries {
  std::vector<double> R;
  std::vector<double> Y;
  std::vector<double> rhs;  // log 2 * iint u^p phi phi_R
  bool truncated = false;   // ladder extends past the end of the trajectory
};

/// Y(R) on a log-spaced ladder in [rho_min, rho_max]. UpperTail integrates
/// rho over [R, rho_max]; Literal over [rho_min, R]. Time integrals use the
/// snapshot accumulator increments.
YSeries Y_functional(const Trajectory& traj, const HarmonicWeight& phi, double rho_min, double rho_max,
                     YForm form = YForm::UpperTail, int points_per_decade = 16);

}  // namespace exheat::testfn
