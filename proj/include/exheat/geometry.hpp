#pragma once

#include <functional>
#include <span>
#include <vector>

namespace exheat {

/// Exterior of the ball B(0, r0) in R^N, truncated at R_max.
/// For N = 1 the domain is the half-line (0, inf) and r0 is forced to 0.
class DomainSpec {
 public:
  DomainSpec(int dimension, double inner_radius, double truncation_radius);

  int dimension() const { return dimension_; }
  double inner_radius() const { return inner_radius_; }
  double truncation_radius() const { return truncation_radius_; }

  bool operator==(const DomainSpec&) const = default;

 private:
  int dimension_;
  double inner_radius_;
  double truncation_radius_;
};

/// Surface measure of the unit sphere used by the radial volume element.
/// Returns 1 for N = 1 (half-line convention), 2 pi^{N/2} / Gamma(N/2) otherwise.
double sphere_area(int dimension);

/// Volume of {r0 < |x| < R} under the same convention.
double annulus_volume(int dimension, double r0, double R);

/// Uniform radial grid with P1 (hat-function) quadrature weights for the
/// volume element sphere_area(N) r^{N-1} dr. The weights sum to the annulus
/// volume up to rounding and equal sphere_area * r_i^{N-1} * h + O(h^2).
class RadialGrid {
 public:
  RadialGrid(DomainSpec domain, int num_cells);

  const DomainSpec& domain() const { return domain_; }
  int num_cells() const { return num_cells_; }
  std::size_t size() const { return nodes_.size(); }
  double spacing() const { return spacing_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  bool same_as(const RadialGrid& other) const;

 private:
  DomainSpec domain_;
  int num_cells_;
  double spacing_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

RadialGrid make_grid(const DomainSpec& domain, int num_cells);

/// Positive harmonic function on the exterior of B(0, r0) vanishing on the
/// sphere: r (N=1), log(r/r0) (N=2), 1 - (r0/r)^{N-2} (N>=3).
double phi_weight(const DomainSpec& domain, double r);
double phi_weight_derivative(const DomainSpec& domain, double r);

/// Unit-ball profile x, log|x|, 1 - |x|^{2-N}.
double phi_reference_profile(int dimension, double r);

struct HarmonicWeight {
  std::vector<double> values;
  std::function<double(double)> reference_profile;
};

HarmonicWeight make_harmonic_weight(const RadialGrid& grid);

/// Max over nodes of the violation of phi0(r/R0) <= phi(r) <= phi0(r/r0)
/// with R0 = r0 (ball obstacle). Requires N >= 2.
double phi_sandwich_check(const DomainSpec& domain, const RadialGrid& grid);

/// Textbook central stencil u'' + (N-1)/r u' on interior nodes; boundary
/// entries are zero.
std::vector<double> radial_laplacian(const RadialGrid& grid, std::span<const double> values);

}  // namespace exheat
