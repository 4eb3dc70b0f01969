#include <omp.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "exheat/grid_ops.hpp"

namespace ops = exheat::grid_ops;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("OpenMP kernels match the serial reference") {
  for (std::size_t n : {std::size_t{17}, std::size_t{9000}, std::size_t{100003}}) {
    const auto x = random_vector(n, 1), y = random_vector(n, 2), w = random_vector(n, 3, 0.0, 2.0),
               phi = random_vector(n, 4, 0.0, 1.0), lo = random_vector(n, 5), di = random_vector(n, 6),
               up = random_vector(n, 7);
    const ops::Stencil st{lo, di, up};
    std::vector<double> a(n), b(n);

    ops::apply_shifted(st, x, 0.3, a);
    ops::serial::apply_shifted(st, x, 0.3, b);
    CHECK(a == b);

    ops::power_map(x, 2.5, a);
    ops::serial::power_map(x, 2.5, b);
    CHECK(a == b);

    a = y;
    b = y;
    ops::axpy(0.7, x, a);
    ops::serial::axpy(0.7, x, b);
    CHECK(a == b);

    a = x;
    b = x;
    const double ra = ops::clamp_nonnegative(a, w, phi);
    const double rb = ops::serial::clamp_nonnegative(b, w, phi);
    CHECK(a == b);
    CHECK(ra == doctest::Approx(rb).epsilon(1e-12));

    a = y;
    b = y;
    ops::trapezoid_accumulate(0.25, x, y, a);
    ops::serial::trapezoid_accumulate(0.25, x, y, b);
    CHECK(a == b);

    CHECK(ops::weighted_dot(w, phi, x) == doctest::Approx(ops::serial::weighted_dot(w, phi, x)).epsilon(1e-12));
    CHECK(ops::weighted_abs_dot(w, phi, x) == doctest::Approx(ops::serial::weighted_abs_dot(w, phi, x)).epsilon(1e-12));
    CHECK(ops::max_abs(x) == ops::serial::max_abs(x));
    CHECK(ops::all_finite(x));
  }
}

TEST_CASE("reductions do not depend on the thread count") {
  const std::size_t n = 200001;
  const auto w = random_vector(n, 11, 0.0, 1.0), a = random_vector(n, 12), b = random_vector(n, 13);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = ops::weighted_dot(w, a, b);
  const double one_abs = ops::weighted_abs_dot(w, a, b);
  omp_set_num_threads(4);
  const double four = ops::weighted_dot(w, a, b);
  const double four_abs = ops::weighted_abs_dot(w, a, b);
  omp_set_num_threads(saved);
  CHECK(one == four);
  CHECK(one_abs == four_abs);
}

TEST_CASE("non-finite detection and clamping") {
  std::vector<double> v(10000, 1.0);
  v[9876] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(ops::all_finite(v));
  CHECK_FALSE(ops::serial::all_finite(v));
  std::vector<double> x = {0.5, -0.25, 1.0};
  const std::vector<double> w = {1.0, 2.0, 1.0}, phi = {1.0, 0.5, 1.0};
  CHECK(ops::clamp_nonnegative(x, w, phi) == doctest::Approx(0.25));
  CHECK(x[1] == 0.0);
}
