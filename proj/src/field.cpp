#include "exheat/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exheat {

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("Field: null grid");
  if (values.size() != grid->size()) throw std::invalid_argument("Field: value count does not match grid");
}

Field::Field(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("Field: null grid");
  values.assign(grid->size(), 0.0);
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

GridPtr share(RadialGrid grid) { return std::make_shared<const RadialGrid>(std::move(grid)); }

Field sample(GridPtr grid, const std::function<double(double)>& f) {
  Field u(std::move(grid));
  for (std::size_t i = 1; i + 1 < u.size(); ++i) u.values[i] = f(u.grid->node(i));
  return u;
}

double bump_profile(double r, double center, double width, double amplitude) {
  const double z = (r - center) / width;
  const double gap = 1.0 - z * z;
  if (gap <= 0.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / gap);
}

double support_radius(const Field& u) {
  for (std::size_t i = u.size(); i-- > 0;)
    if (u.values[i] != 0.0) return u.grid->node(i);
  return u.grid->domain().inner_radius();
}

}  // namespace exheat
