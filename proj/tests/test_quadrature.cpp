#include <cmath>
#include <numbers>

#include "doctest.h"
#include "exheat/quadrature.hpp"

using namespace exheat;

TEST_CASE("smooth integrands") {
  const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("endpoint singularity is resolved by bisection") {
  const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.intervals > 1);
}

TEST_CASE("semi-infinite range") {
  CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0).value ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(quad::integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0).value ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));
  CHECK(quad::integrate_to_infinity([](double x) { return 1.0 / (x * x); }, 2.0).value ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("empty and reversed intervals") {
  CHECK(quad::integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
  CHECK(quad::integrate([](double) { return 1.0; }, 2.0, 1.0).value == doctest::Approx(-1.0));
}
