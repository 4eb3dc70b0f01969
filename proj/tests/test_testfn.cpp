#include <cmath>

#include "doctest.h"
#include "exheat/testfn.hpp"

using namespace exheat;
using namespace exheat::testfn;

TEST_CASE("eta values") {
  CHECK(eta(0.4).value == 0.0);
  CHECK(eta(0.5).value == 0.0);
  CHECK(eta(1.2).value == 1.0);
  CHECK(eta(0.75).value == doctest::Approx(0.5));
  CHECK(eta_star(1.2) == 0.0);
  CHECK(eta_star(0.9) == eta(0.9).value);
  double prev = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double v = eta(0.5 + 0.005 * k).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("eta derivatives match finite differences") {
  const double h = 1e-5;
  for (double s : {0.55, 0.62, 0.75, 0.9, 0.98}) {
    const auto e = eta(s);
    CHECK(e.d1 == doctest::Approx((eta(s + h).value - eta(s - h).value) / (2 * h)).epsilon(1e-7));
    CHECK(e.d2 == doctest::Approx((eta(s + h).d1 - eta(s - h).d1) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("cut-off ratio at a point against finite differences") {
  const DomainSpec d(3, 1.0, 1000.0);
  const double p = 2.0, R = 100.0;
  const auto fam = make_cutoff(d, p, R);
  const double t = 30.0, r = 8.0, h = 1e-3;
  auto F = [&](double tt, double rr) { return phi_weight(d, rr) * fam.value(tt, rr); };
  const double Ft = (F(t + h, r) - F(t - h, r)) / (2 * h);
  const double Fr = (F(t, r + h) - F(t, r - h)) / (2 * h);
  const double Frr = (F(t, r + h) - 2 * F(t, r) + F(t, r - h)) / (h * h);
  const double lap = Frr + 2.0 / r * Fr;
  const double denom = phi_weight(d, r) * std::pow(eta(fam.xi(t, r)).value, 2.0 / (p - 1.0));
  const double oracle = R * (std::abs(Ft) + std::abs(lap)) / denom;
  CHECK(cutoff_bound_ratio(fam, d, {t}, {r}) == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("cut-off ratio is bounded uniformly in R") {
  for (auto [N, p] : {std::pair{1, 2.0}, std::pair{3, 5.0 / 3.0}}) {
    const DomainSpec d(N, 1.0, 2.0);
    double lo = 1e300, hi = 0.0;
    for (double R : {10.0, 1e2, 1e3, 1e4}) {
      const double v = cutoff_bound_ratio(make_cutoff(d, p, R), d, 120);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi > 0.0);
    CHECK(hi / lo < 1.1);
  }
}

TEST_CASE("Theta quadrature against closed forms") {
  const DomainSpec one(1, 0.0, 2.0);
  for (double R : {1.0, 1e3, 1e8}) CHECK(theta_base(one, R) == doctest::Approx(R / 4.0).epsilon(1e-10));
  for (int N : {2, 3, 4})
    for (double R : {5.0, 1e4, 1e9}) {
      const DomainSpec d(N, 1.0, 2.0);
      CHECK(theta_base(d, R) == doctest::Approx(theta_base_closed_form(d, R)).epsilon(1e-9));
    }
  CHECK(theta(DomainSpec(3, 1.0, 2.0), 2.0, 1e4) == doctest::Approx(theta_base(DomainSpec(3, 1.0, 2.0), 1e4)));
}

TEST_CASE("large-R exponents of 1/Theta") {
  for (auto [N, p] : {std::pair{1, 2.0}, std::pair{3, 1.5}, std::pair{4, 2.5}}) {
    const auto c = classify_dichotomy(N, p);
    const double expected = N == 1 ? -(p - 1.0) : -(p - 1.0) * N / 2.0;
    CHECK(c.theta_power == doctest::Approx(expected).epsilon(1e-3));
  }
  const auto two = classify_dichotomy(2, 2.0);
  CHECK(two.theta_power == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(two.theta_log_power == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("classification examples") {
  CHECK(classify_dichotomy(1, 2.0).outcome == Outcome::Vanishing);
  CHECK(classify_dichotomy(1, 2.1).outcome == Outcome::NonVanishing);
  CHECK(classify_dichotomy(2, 2.0).outcome == Outcome::Vanishing);
  CHECK(classify_dichotomy(3, 1.6).outcome == Outcome::Vanishing);
  CHECK(classify_dichotomy(3, 1.7).outcome == Outcome::NonVanishing);
  CHECK(classify_dichotomy(3, 5.0 / 3.0).outcome == Outcome::Vanishing);
  CHECK(to_string(Outcome::NonVanishing) == "non-vanishing");
  CHECK_THROWS(classify_dichotomy(0, 2.0));
  CHECK_THROWS(classify_dichotomy(3, 1.0));
}

TEST_CASE("both criteria agree on a lattice") {
  for (int N = 1; N <= 5; ++N)
    for (int k = 1; k <= 29; ++k) {
      const double p = 1.0 + 0.1 * k;
      const auto c = classify_dichotomy(N, p);
      CHECK_MESSAGE(c.agree, "N=" << N << " p=" << p);
    }
}

TEST_CASE("Y functional against its bound") {
  auto g = share(make_grid(DomainSpec(3, 1.0, 101.0), 1000));
  const Field u0 = sample(g, [](double r) { return bump_profile(r, 2.0, 1.0, 1.0); });
  SolverConfig cfg;
  cfg.p = 2.0;
  cfg.t_end = 100.0;
  for (int k = 0; k <= 60; ++k) cfg.output_times.push_back(0.1 * std::pow(10.0, k / 20.0));
  const auto traj = evolve(u0, cfg);
  const auto phi = make_harmonic_weight(*g);
  const auto y = Y_functional(traj, phi, 1.0, 100.0);
  CHECK_FALSE(y.truncated);
  for (std::size_t k = 0; k < y.R.size(); ++k) {
    CHECK(y.Y[k] >= 0.0);
    CHECK(y.Y[k] <= y.rhs[k] * (1.0 + 1e-12));
    if (k) CHECK(y.Y[k] <= y.Y[k - 1]);
  }
  const auto lit = Y_functional(traj, phi, 1.0, 100.0, YForm::Literal);
  bool violated = false;
  for (std::size_t k = 0; k < lit.R.size(); ++k) violated = violated || lit.Y[k] > lit.rhs[k];
  CHECK(violated);
  CHECK(Y_functional(traj, phi, 1.0, 1000.0).truncated);
}
