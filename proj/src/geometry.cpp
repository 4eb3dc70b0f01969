#include "exheat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exheat {

DomainSpec::DomainSpec(int dimension, double inner_radius, double truncation_radius)
    : dimension_(dimension),
      inner_radius_(dimension == 1 ? 0.0 : inner_radius),
      truncation_radius_(truncation_radius) {
  if (dimension < 1) throw std::invalid_argument("DomainSpec: dimension must be >= 1");
  if (!std::isfinite(inner_radius_) || !std::isfinite(truncation_radius_))
    throw std::invalid_argument("DomainSpec: non-finite radius");
  if (dimension >= 2 && !(inner_radius_ > 0.0))
    throw std::invalid_argument("DomainSpec: inner radius must be > 0 for N >= 2");
  if (!(truncation_radius_ > inner_radius_))
    throw std::invalid_argument("DomainSpec: truncation radius must exceed inner radius");
}

double sphere_area(int dimension) {
  if (dimension < 1) throw std::invalid_argument("sphere_area: dimension must be >= 1");
  if (dimension == 1) return 1.0;
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double annulus_volume(int dimension, double r0, double R) {
  const double n = dimension;
  return sphere_area(dimension) * (std::pow(R, n) - std::pow(r0, n)) / n;
}

namespace {

// h * int_0^1 (1 - x) (a + sign*h*x)^k dx, expanded binomially so no
// cancellation occurs for a >> h.
double half_hat_moment(double a, double h, int k, double sign) {
  double sum = 0.0;
  double binom = 1.0;
  double hpow = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double term = binom * std::pow(a, k - j) * hpow / ((j + 1.0) * (j + 2.0));
    sum += term;
    binom = binom * (k - j) / (j + 1.0);
    hpow *= sign * h;
  }
  return h * sum;
}

}  // namespace

RadialGrid::RadialGrid(DomainSpec domain, int num_cells)
    : domain_(domain), num_cells_(num_cells) {
  if (num_cells < 8) throw std::invalid_argument("make_grid: num_cells must be >= 8");
  const double r0 = domain_.inner_radius();
  const double R = domain_.truncation_radius();
  spacing_ = (R - r0) / num_cells;
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
    throw std::invalid_argument("make_grid: degenerate geometry");

  const std::size_t n = static_cast<std::size_t>(num_cells) + 1;
  nodes_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = r0 + static_cast<double>(i) * spacing_;
  nodes_.back() = R;

  const int k = domain_.dimension() - 1;
  const double area = sphere_area(domain_.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0.0;
    if (i > 0) w += half_hat_moment(nodes_[i], spacing_, k, -1.0);
    if (i + 1 < n) w += half_hat_moment(nodes_[i], spacing_, k, +1.0);
    weights_[i] = area * w;
  }
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return domain_ == other.domain_ && num_cells_ == other.num_cells_;
}

RadialGrid make_grid(const DomainSpec& domain, int num_cells) { return RadialGrid(domain, num_cells); }

double phi_weight(const DomainSpec& domain, double r) {
  const double r0 = domain.inner_radius();
  if (!(r >= r0)) throw std::domain_error("phi_weight: r below inner radius");
  switch (domain.dimension()) {
    case 1:
      return r;
    case 2:
      return std::log(r / r0);
    default:
      return 1.0 - std::pow(r0 / r, domain.dimension() - 2);
  }
}

double phi_weight_derivative(const DomainSpec& domain, double r) {
  const double r0 = domain.inner_radius();
  switch (domain.dimension()) {
    case 1:
      return 1.0;
    case 2:
      return 1.0 / r;
    default: {
      const int m = domain.dimension() - 2;
      return m * std::pow(r0 / r, m) / r;
    }
  }
}

double phi_reference_profile(int dimension, double r) {
  switch (dimension) {
    case 1:
      return r;
    case 2:
      return std::log(r);
    default:
      return 1.0 - std::pow(r, 2 - dimension);
  }
}

HarmonicWeight make_harmonic_weight(const RadialGrid& grid) {
  HarmonicWeight w;
  const auto& dom = grid.domain();
  w.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) w.values[i] = phi_weight(dom, grid.node(i));
  w.values.front() = 0.0;
  const int n = dom.dimension();
  w.reference_profile = [n](double r) { return phi_reference_profile(n, r); };
  return w;
}

double phi_sandwich_check(const DomainSpec& domain, const RadialGrid& grid) {
  if (domain.dimension() < 2) throw std::invalid_argument("phi_sandwich_check: requires N >= 2");
  const double r0 = domain.inner_radius();
  const double R0 = r0;
  double worst = 0.0;
  for (double r : grid.nodes()) {
    const double phi = phi_weight(domain, r);
    const double lower = phi_reference_profile(domain.dimension(), r / R0);
    const double upper = phi_reference_profile(domain.dimension(), r / r0);
    worst = std::max({worst, lower - phi, phi - upper});
  }
  return worst;
}

std::vector<double> radial_laplacian(const RadialGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("radial_laplacian: size mismatch");
  const double h = grid.spacing();
  const double lateral = grid.domain().dimension() - 1.0;
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double second = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
    const double first = (values[i + 1] - values[i - 1]) / (2.0 * h);
    out[i] = second + lateral / grid.node(i) * first;
  }
  return out;
}

}  // namespace exheat
