#include "exheat/heat_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "exheat/quadrature.hpp"

namespace exheat::kernels {

double log_gaussian(int dimension, double t, double r) {
  if (!(t > 0.0)) throw std::domain_error("gaussian: t must be positive");
  return -0.5 * dimension * std::log(4.0 * std::numbers::pi * t) - r * r / (4.0 * t);
}

double gaussian(int dimension, double t, double r) { return std::exp(log_gaussian(dimension, t, r)); }

namespace {

// G1(t, x - y) - G1(t, x + y) = G1(t, x - y) * (1 - exp(-x y / t)).
double image_kernel(double t, double x, double y, double log_prefactor) {
  const double d = x - y;
  const double exponent = log_prefactor - d * d / (4.0 * t);
  if (exponent < -745.0) return 0.0;
  return std::exp(exponent) * -std::expm1(-x * y / t);
}

void require_halfline(const Field& u0) {
  if (!u0.grid || u0.grid->domain().dimension() != 1)
    throw std::invalid_argument("halfline_image_solution: data must live on an N = 1 grid");
}

}  // namespace

double halfline_image_solution(double t, double x, const Field& u0) {
  require_halfline(u0);
  if (!(t > 0.0)) throw std::domain_error("halfline_image_solution: t must be positive");
  if (x <= 0.0) return 0.0;
  const double log_prefactor = -0.5 * std::log(4.0 * std::numbers::pi * t);
  const auto& grid = *u0.grid;
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (u0.values[j] == 0.0) continue;
    sum += grid.weight(j) * u0.values[j] * image_kernel(t, x, grid.node(j), log_prefactor);
  }
  return sum;
}

std::vector<double> halfline_image_profile(double t, const Field& u0) {
  require_halfline(u0);
  std::vector<double> out(u0.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = halfline_image_solution(t, u0.grid->node(i), u0);
  return out;
}

namespace {

Field to_halfline(const Field& u0) {
  const auto& grid = *u0.grid;
  const auto& dom = grid.domain();
  if (dom.dimension() != 3) throw std::invalid_argument("exterior_ball_image_solution_3d: data must be on an N = 3 grid");
  auto line = share(RadialGrid(DomainSpec(1, 0.0, dom.truncation_radius() - dom.inner_radius()), grid.num_cells()));
  Field w(line);
  for (std::size_t i = 0; i < grid.size(); ++i) w.values[i] = grid.node(i) * u0.values[i];
  return w;
}

}  // namespace

double exterior_ball_image_solution_3d(double t, double r, const Field& u0) {
  const double r0 = u0.grid->domain().inner_radius();
  if (r < r0) throw std::domain_error("exterior_ball_image_solution_3d: r below inner radius");
  return halfline_image_solution(t, r - r0, to_halfline(u0)) / r;
}

std::vector<double> exterior_ball_image_profile_3d(double t, const Field& u0) {
  const Field w = to_halfline(u0);
  const auto& grid = *u0.grid;
  const double r0 = grid.domain().inner_radius();
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = halfline_image_solution(t, grid.node(i) - r0, w) / grid.node(i);
  return out;
}

double RatePair::operator()(double t) const {
  const double lp = std::log1p(t);
  return std::pow(1.0 + t, power_exponent) * std::pow(1.0 + lp, log_exponent);
}

RatePair rate_E(int dimension) {
  if (dimension < 1) throw std::invalid_argument("rate_E: dimension must be >= 1");
  if (dimension == 1) return {0.5, 0.0};
  if (dimension == 2) return {0.0, 1.0};
  return {0.0, 0.0};
}

RatePair rate_E_tilde(int dimension, double p) {
  if (dimension < 1) throw std::invalid_argument("rate_E_tilde: dimension must be >= 1");
  if (!(p > 1.0)) throw std::invalid_argument("rate_E_tilde: p must exceed 1");
  if (dimension == 1) return {2.0 - p, 0.0};
  if (dimension == 2) return {2.0 - p, 1.0 - p};
  return {1.0 - 0.5 * dimension * (p - 1.0), 0.0};
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::PowerGrowth: return "r>-1";
    case Regime::LogGrowth: return "r=-1,m>-1";
    case Regime::LogLogEquality: return "r=-1,m=-1";
    case Regime::Bounded: return "bounded";
    case Regime::PowerTail: return "r<-1";
    case Regime::LogTail: return "r=-1,m<-1";
    case Regime::Divergent: return "divergent";
  }
  return "unknown";
}

namespace {

constexpr double kExponentTol = 1e-12;

bool is_minus_one(double v) { return std::abs(v + 1.0) <= kExponentTol; }

double constant_for(const BoundConstants& constants, Regime regime) {
  auto it = constants.find(regime);
  return it == constants.end() ? 1.0 : it->second;
}

// Integrand after u = log(1 + s): e^{(r+1) u} (1 + u)^m.
double log_variable_weight(double r, double m, double u) {
  return std::exp((r + 1.0) * u) * std::pow(1.0 + u, m);
}

}  // namespace

double log_power_weight(double r, double m, double s) {
  return std::pow(1.0 + s, r) * std::pow(1.0 + std::log1p(s), m);
}

Regime regime_0_t(double r, double m) {
  if (is_minus_one(r)) {
    if (is_minus_one(m)) return Regime::LogLogEquality;
    if (m > -1.0) return Regime::LogGrowth;
    return Regime::Bounded;
  }
  return r > -1.0 ? Regime::PowerGrowth : Regime::Bounded;
}

Regime regime_t_inf(double r, double m) {
  if (is_minus_one(r)) return (m < -1.0 && !is_minus_one(m)) ? Regime::LogTail : Regime::Divergent;
  return r < -1.0 ? Regime::PowerTail : Regime::Divergent;
}

IntegralBound integral_0_t_bound(double r, double m, double t, const BoundConstants& constants) {
  if (!(t > 0.0)) throw std::domain_error("integral_0_t_bound: t must be positive");
  IntegralBound out;
  out.regime = regime_0_t(r, m);
  const double upper = std::log1p(t);
  out.quadrature = quad::integrate([&](double u) { return log_variable_weight(r, m, u); }, 0.0, upper).value;
  const double log_term = 1.0 + upper;
  switch (out.regime) {
    case Regime::PowerGrowth:
      out.shape = std::pow(1.0 + t, r + 1.0) * std::pow(log_term, m);
      break;
    case Regime::LogGrowth:
      out.shape = std::pow(log_term, m + 1.0);
      break;
    case Regime::LogLogEquality:
      out.shape = std::log(log_term);
      out.bound = out.shape;
      return out;
    default:
      out.shape = 1.0;
      break;
  }
  out.bound = constant_for(constants, out.regime) * out.shape;
  return out;
}

IntegralBound integral_t_inf_bound(double r, double m, double t, const BoundConstants& constants) {
  if (!(t >= 0.0)) throw std::domain_error("integral_t_inf_bound: t must be nonnegative");
  IntegralBound out;
  out.regime = regime_t_inf(r, m);
  const double lower = std::log1p(t);
  const double log_term = 1.0 + lower;
  if (out.regime == Regime::Divergent) {
    out.divergent = true;
    out.quadrature = out.shape = out.bound = std::numeric_limits<double>::infinity();
    return out;
  }
  if (out.regime == Regime::PowerTail) {
    out.quadrature = quad::integrate_to_infinity([&](double u) { return log_variable_weight(r, m, u); }, lower).value;
    out.shape = std::pow(1.0 + t, r + 1.0) * std::pow(log_term, m);
  } else {
    // int_U^inf (1+u)^m du: quadrature on a finite window plus the analytic tail.
    const double window_end = lower + 50.0;
    const double head = quad::integrate([&](double u) { return std::pow(1.0 + u, m); }, lower, window_end).value;
    const double tail = std::pow(1.0 + window_end, m + 1.0) / std::abs(m + 1.0);
    out.quadrature = head + tail;
    out.shape = std::pow(log_term, m + 1.0);
  }
  out.bound = constant_for(constants, out.regime) * out.shape;
  return out;
}

ProbeLattice default_probe_lattice() {
  return {{-2.5, -1.5, -1.0, -0.5, 0.5, 1.5},
          {-3.5, -2.0, -1.5, -0.5, 0.5, 1.5},
          {0.5, 2.0, 5.0, 20.0, 50.0, 200.0, 500.0}};
}

ProbeLattice default_validation_lattice() {
  return {{-3.0, -1.0, 0.0, 1.0}, {-3.0, -1.0, 0.0, 1.0}, {1.0, 10.0, 100.0}};
}

namespace {

template <typename Eval>
BoundConstants calibrate(const ProbeLattice& probe, Eval eval) {
  BoundConstants constants;
  for (double r : probe.r_values)
    for (double m : probe.m_values)
      for (double t : probe.t_values) {
        const IntegralBound b = eval(r, m, t);
        if (b.divergent || b.regime == Regime::LogLogEquality) continue;
        const double ratio = b.quadrature / b.shape;
        auto [it, inserted] = constants.try_emplace(b.regime, ratio);
        if (!inserted) it->second = std::max(it->second, ratio);
      }
  return constants;
}

}  // namespace

BoundConstants calibrate_0_t(const ProbeLattice& probe) {
  return calibrate(probe, [](double r, double m, double t) { return integral_0_t_bound(r, m, t); });
}

BoundConstants calibrate_t_inf(const ProbeLattice& probe) {
  return calibrate(probe, [](double r, double m, double t) { return integral_t_inf_bound(r, m, t); });
}

}  // namespace exheat::kernels
