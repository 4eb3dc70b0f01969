#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "exheat/geometry.hpp"

namespace exheat {

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Grid function at one instant. Value type; the grid is shared.
struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  Field(GridPtr g, std::vector<double> v);
  explicit Field(GridPtr g);

  std::size_t size() const { return values.size(); }
  std::span<const double> view() const { return values; }
  double max_abs() const;
};

GridPtr share(RadialGrid grid);

/// Samples f at interior nodes; both boundary nodes are set to 0.
Field sample(GridPtr grid, const std::function<double(double)>& f);

/// Smooth compact bump amplitude * exp(1 - 1/(1 - z^2)), z = (r - center)/width.
double bump_profile(double r, double center, double width, double amplitude);

/// Largest node radius with a nonzero value, or the inner radius if none.
double support_radius(const Field& u);

}  // namespace exheat
