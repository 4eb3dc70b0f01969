#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "exheat/geometry.hpp"

using namespace exheat;
using std::numbers::pi;

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == 1.0);
  CHECK(sphere_area(2) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(sphere_area(4) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
  CHECK(sphere_area(5) == doctest::Approx(8 * pi * pi / 3).epsilon(1e-15));
}

TEST_CASE("domain validation") {
  CHECK_THROWS(DomainSpec(0, 1.0, 2.0));
  CHECK_THROWS(DomainSpec(3, 0.0, 2.0));
  CHECK_THROWS(DomainSpec(3, 2.0, 1.0));
  DomainSpec half(1, 5.0, 10.0);
  CHECK(half.inner_radius() == 0.0);
  CHECK_THROWS(RadialGrid(DomainSpec(2, 1.0, 2.0), 4));
}

TEST_CASE("quadrature weights sum to the annulus volume") {
  for (int N = 1; N <= 5; ++N) {
    const DomainSpec d(N, 1.0, 37.0);
    for (int cells : {8, 100, 2000}) {
      const RadialGrid g(d, cells);
      double sum = 0.0;
      for (double w : g.weights()) sum += w;
      const double vol = annulus_volume(N, d.inner_radius(), d.truncation_radius());
      CHECK(std::abs(sum / vol - 1.0) <= 1e-12);
    }
  }
  CHECK(annulus_volume(3, 1.0, 2.0) == doctest::Approx(4 * pi * 7 / 3).epsilon(1e-14));
  CHECK(annulus_volume(1, 0.0, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("harmonic weight closed forms") {
  CHECK(phi_weight(DomainSpec(1, 0.0, 10.0), 3.5) == 3.5);
  CHECK(phi_weight(DomainSpec(2, 2.0, 10.0), 2.0 * std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_weight(DomainSpec(3, 1.0, 10.0), 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi_weight(DomainSpec(5, 1.0, 10.0), 2.0) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK_THROWS_AS(phi_weight(DomainSpec(3, 1.0, 10.0), 0.5), std::domain_error);
  for (int N = 2; N <= 4; ++N) {
    const DomainSpec d(N, 1.5, 10.0);
    const double r = 3.0, e = 1e-5;
    const double fd = (phi_weight(d, r + e) - phi_weight(d, r - e)) / (2 * e);
    CHECK(phi_weight_derivative(d, r) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("phi lies between the scaled reference profiles") {
  for (int N = 2; N <= 4; ++N) {
    const DomainSpec d(N, 1.0, 50.0);
    CHECK(phi_sandwich_check(d, RadialGrid(d, 500)) <= 1e-14);
  }
}

TEST_CASE("central stencil annihilates phi to second order") {
  // Residual at r = 3, a node of both grids.
  auto residual = [](int N, int cells) {
    const DomainSpec d(N, 1.0, 11.0);
    const RadialGrid g(d, cells);
    const auto hw = make_harmonic_weight(g);
    const auto lap = radial_laplacian(g, hw.values);
    return std::abs(lap[static_cast<std::size_t>(cells / 5)]);
  };
  CHECK(residual(1, 200) <= 1e-12);
  // r phi is linear for N = 3, so the leading error terms cancel.
  CHECK(residual(3, 200) <= 1e-9);
  for (int N : {2, 4, 5}) {
    const double ratio = residual(N, 200) / residual(N, 400);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
  }
}

TEST_CASE("grid layout") {
  const RadialGrid g(DomainSpec(3, 1.0, 3.0), 8);
  CHECK(g.size() == 9);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.node(0) == 1.0);
  CHECK(g.node(8) == 3.0);
  CHECK(g.same_as(RadialGrid(DomainSpec(3, 1.0, 3.0), 8)));
  CHECK_FALSE(g.same_as(RadialGrid(DomainSpec(3, 1.0, 3.0), 16)));
}
