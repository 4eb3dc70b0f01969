#include "exheat/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exheat/diagnostics.hpp"
#include "exheat/quadrature.hpp"

namespace exheat::testfn {

EtaValue eta(double s) {
  if (s <= 0.5) return {0.0, 0.0, 0.0};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  const double x = 2.0 * (s - 0.5);
  const double x2 = x * x;
  const double value = x2 * x * (10.0 - 15.0 * x + 6.0 * x2);
  const double dq = 30.0 * x2 * (1.0 - x) * (1.0 - x);
  const double ddq = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
  return {value, 2.0 * dq, 4.0 * ddq};
}

double eta_star(double s) { return (s >= 0.5 && s <= 1.0) ? eta(s).value : 0.0; }

double CutoffFamily::xi(double t, double r) const {
  const double d = std::max(r - R1, 0.0);
  return (d * d + t) / R;
}

double CutoffFamily::value(double t, double r) const { return std::pow(eta(xi(t, r)).value, 2.0 * conjugate()); }

double CutoffFamily::value_star(double t, double r) const { return std::pow(eta_star(xi(t, r)), 2.0 * conjugate()); }

CutoffFamily make_cutoff(const DomainSpec& domain, double p, double R) {
  if (!(p > 1.0)) throw std::invalid_argument("make_cutoff: p must exceed 1");
  if (!(R > 0.0)) throw std::invalid_argument("make_cutoff: R must be positive");
  CutoffFamily f;
  f.dimension = domain.dimension();
  f.p = p;
  f.R = R;
  f.R1 = domain.dimension() == 1 ? 0.0 : domain.inner_radius();
  return f;
}

double cutoff_bound_ratio(const CutoffFamily& family, const DomainSpec& domain, const std::vector<double>& t_grid,
                          const std::vector<double>& r_grid) {
  const double R = family.R;
  const double pc = family.conjugate();
  const int N = family.dimension;
  double worst = 0.0;
  for (double r : r_grid) {
    if (r < domain.inner_radius()) continue;
    const double phi = phi_weight(domain, r);
    if (!(phi > 0.0)) continue;
    const double dphi = phi_weight_derivative(domain, r);
    const double d = std::max(r - family.R1, 0.0);
    const double xi_r = 2.0 * d / R;
    const double xi_rr = d > 0.0 ? 2.0 / R : 0.0;
    const double lap_xi = xi_rr + (N - 1) / r * xi_r;
    for (double t : t_grid) {
      const double s = family.xi(t, r);
      if (!(s > 0.5 && s <= 1.0)) continue;
      const EtaValue e = eta(s);
      // eta~ = eta^{2p'}; divided by eta^{2/(p-1)} = (phi_R*)^{1/p}.
      const double d1 = 2.0 * pc * e.value * e.d1;
      const double d2 = 2.0 * pc * (2.0 * pc - 1.0) * e.d1 * e.d1 + 2.0 * pc * e.value * e.d2;
      const double dt_term = phi * d1 / R;
      const double lap_term = (2.0 * dphi * xi_r + phi * lap_xi) * d1 + phi * xi_r * xi_r * d2;
      worst = std::max(worst, R * (std::abs(dt_term) + std::abs(lap_term)) / phi);
    }
  }
  return worst;
}

double cutoff_bound_ratio(const CutoffFamily& family, const DomainSpec& domain, int resolution) {
  if (resolution < 4) throw std::invalid_argument("cutoff_bound_ratio: resolution too small");
  const double sqR = std::sqrt(family.R);
  std::vector<double> t_grid, r_grid;
  for (int j = 0; j <= resolution; ++j) t_grid.push_back(family.R * j / resolution);
  // Uniform in a plus a geometric cluster near the obstacle.
  for (int j = 1; j <= resolution; ++j) r_grid.push_back(family.R1 + sqR * j / resolution);
  for (int j = 1; j <= resolution; ++j)
    r_grid.push_back(family.R1 + sqR * std::pow(10.0, -6.0 * j / resolution) / resolution);
  if (family.dimension == 1) r_grid.push_back(1e-12);
  return cutoff_bound_ratio(family, domain, t_grid, r_grid);
}

namespace {

double effective_R1(const DomainSpec& domain) { return domain.dimension() == 1 ? 0.0 : domain.inner_radius(); }

// int_{R1}^{rho} phi(r) |S^{N-1}| r^{N-1} dr
double inner_closed_form(const DomainSpec& domain, double rho) {
  const int N = domain.dimension();
  const double r0 = domain.inner_radius();
  if (N == 1) return 0.5 * rho * rho;
  if (N == 2)
    return 2.0 * std::numbers::pi * (0.5 * rho * rho * std::log(rho / r0) - 0.25 * rho * rho + 0.25 * r0 * r0);
  return sphere_area(N) *
         ((std::pow(rho, N) - std::pow(r0, N)) / N - std::pow(r0, N - 2) * (rho * rho - r0 * r0) / 2.0);
}

double inner_quadrature(const DomainSpec& domain, double rho) {
  const int N = domain.dimension();
  const double area = sphere_area(N);
  const double lo = effective_R1(domain);
  if (rho <= lo) return 0.0;
  quad::Tolerance tol;
  tol.absolute = 0.0;
  tol.relative = 1e-10;
  return quad::integrate([&](double r) { return phi_weight(domain, r) * area * std::pow(r, N - 1); }, lo, rho, tol)
      .value;
}

// (1/R) int_0^R I(R1 + sqrt(R - t)) dt with t = R (1 - v^2).
template <typename Inner>
double outer(const DomainSpec& domain, double R, Inner inner) {
  if (!(R > 0.0)) throw std::invalid_argument("theta: R must be positive");
  const double R1 = effective_R1(domain);
  const double sqR = std::sqrt(R);
  quad::Tolerance tol;
  tol.absolute = 0.0;
  tol.relative = 1e-9;
  return 2.0 * quad::integrate([&](double v) { return inner(domain, R1 + sqR * v) * v; }, 0.0, 1.0, tol).value;
}

}  // namespace

double theta_base(const DomainSpec& domain, double R) { return outer(domain, R, inner_quadrature); }

double theta_base_closed_form(const DomainSpec& domain, double R) { return outer(domain, R, inner_closed_form); }

double theta(const DomainSpec& domain, double p, double R) { return std::pow(theta_base(domain, R), p - 1.0); }

std::string to_string(Outcome outcome) { return outcome == Outcome::Vanishing ? "vanishing" : "non-vanishing"; }

Classification classify_dichotomy(int dimension, double p) {
  if (dimension < 1) throw std::invalid_argument("classify_dichotomy: N must be >= 1");
  if (!(p > 1.0)) throw std::invalid_argument("classify_dichotomy: p must exceed 1");
  Classification c;
  const double critical = std::min(2.0, 1.0 + 2.0 / dimension);
  c.outcome = p <= critical + 1e-12 ? Outcome::Vanishing : Outcome::NonVanishing;

  // (a) large-R behaviour of 1/Theta.
  const DomainSpec domain(dimension, 1.0, 2.0);
  diag::Series inv;
  for (int k = 0; k <= 24; ++k) {
    const double R = std::pow(10.0, 6.0 + 8.0 * k / 24.0);
    inv.push(R, 1.0 / theta(domain, p, R));
  }
  const auto fit = diag::fit_rate(inv, true, diag::TimeAxis::Plain);
  c.theta_power = fit.a;
  c.theta_log_power = fit.b;
  if (std::abs(fit.a + 1.0) <= 0.02)
    c.theta_divergent = fit.b > -1.5;
  else
    c.theta_divergent = fit.a > -1.0;

  // (b) tail of ((1+t)^{N/2} E_N(t))^{1-p}.
  const auto E = kernels::rate_E(dimension);
  const double r = (1.0 - p) * (0.5 * dimension + E.power_exponent);
  const double m = (1.0 - p) * E.log_exponent;
  c.rate_regime = kernels::regime_t_inf(r, m);
  c.rate_divergent = c.rate_regime == kernels::Regime::Divergent;

  const bool vanishing = c.outcome == Outcome::Vanishing;
  c.agree = c.theta_divergent == vanishing && c.rate_divergent == vanishing;
  return c;
}

YSeries Y_functional(const Trajectory& traj, const HarmonicWeight& phi, double rho_min, double rho_max, YForm form,
                     int points_per_decade) {
  if (traj.config.scheme != Scheme::Semilinear) throw std::invalid_argument("Y_functional: semilinear trajectory required");
  if (!(rho_min > 0.0 && rho_max > rho_min)) throw std::invalid_argument("Y_functional: bad rho range");
  if (points_per_decade < 1) throw std::invalid_argument("Y_functional: points_per_decade must be positive");
  if (traj.snapshots.size() < 2) throw std::invalid_argument("Y_functional: need at least two snapshots");

  const auto& grid = *traj.grid;
  const auto w = grid.weights();
  const auto nodes = grid.nodes();
  const double p = traj.config.p;
  const CutoffFamily base = make_cutoff(grid.domain(), p, 1.0);

  const double decades = std::log10(rho_max / rho_min);
  const int count = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  std::vector<double> ladder(count);
  for (int k = 0; k < count; ++k) ladder[k] = rho_min * std::pow(rho_max / rho_min, static_cast<double>(k) / (count - 1));

  // iint u^p phi g(t, r) with the time integral over each snapshot interval
  // taken as the accumulator increment times the mean of g at its ends.
  auto double_integral = [&](auto g) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
      const auto& a = traj.snapshots[k];
      const auto& b = traj.snapshots[k + 1];
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double inc = b.absorbed[i] - a.absorbed[i];
        if (inc == 0.0 || phi.values[i] == 0.0) continue;
        total += w[i] * phi.values[i] * inc * 0.5 * (g(a.t, nodes[i]) + g(b.t, nodes[i]));
      }
    }
    return total;
  };

  std::vector<double> F(count);
  for (int k = 0; k < count; ++k) {
    CutoffFamily fam = base;
    fam.R = ladder[k];
    F[k] = double_integral([&](double t, double r) { return fam.value_star(t, r); });
  }

  // Trapezoid in log(rho) for int F(rho) d rho / rho.
  const double dlog = std::log(rho_max / rho_min) / (count - 1);
  std::vector<double> cumulative(count, 0.0);
  for (int k = 1; k < count; ++k) cumulative[k] = cumulative[k - 1] + 0.5 * dlog * (F[k - 1] + F[k]);

  YSeries out;
  out.truncated = rho_max > traj.final().t;
  for (int k = 0; k < count; ++k) {
    CutoffFamily fam = base;
    fam.R = ladder[k];
    out.R.push_back(ladder[k]);
    out.Y.push_back(form == YForm::UpperTail ? cumulative.back() - cumulative[k] : cumulative[k]);
    out.rhs.push_back(std::log(2.0) * double_integral([&](double t, double r) { return fam.value(t, r); }));
  }
  return out;
}

}  // namespace exheat::testfn
