#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "exheat/diagnostics.hpp"
#include "exheat/heat_kernels.hpp"
#include "exheat/solver.hpp"

using namespace exheat;

namespace {

GridPtr grid_for(int N, double r0, double R, int cells) { return share(make_grid(DomainSpec(N, r0, R), cells)); }

Field bump(GridPtr g, double c, double w, double a = 1.0) {
  return sample(g, [=](double r) { return bump_profile(r, c, w, a); });
}

SolverConfig fixed_step(Scheme scheme, double dt, double t_end, double p = 2.0) {
  SolverConfig c;
  c.scheme = scheme;
  c.p = p;
  c.dt_initial = dt;
  c.dt_growth = 1.0;
  c.dt_cap_factor = 1e9;
  c.t_end = t_end;
  return c;
}

double ode_error(double dt, double p) {
  auto g = grid_for(1, 0.0, 1.0, 10);
  Field u(g, std::vector<double>(g->size(), 0.8));
  u.values.front() = u.values.back() = 0.0;
  const auto cfg = fixed_step(Scheme::Semilinear, dt, 1.0, p);
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k < n; ++k) u = detail::step_with_hooks(u, dt, cfg, {.diffusion = false});
  const double exact = std::pow(std::pow(0.8, 1.0 - p) + (p - 1.0), -1.0 / (p - 1.0));
  return std::abs(u.values[5] - exact);
}

double oracle_error(int N, int cells, double dt) {
  const double r0 = N == 1 ? 0.0 : 1.0;
  auto g = grid_for(N, r0, r0 + 20.0, cells);
  const Field u0 = bump(g, r0 + 6.0, 2.0);
  const auto traj = evolve(u0, fixed_step(Scheme::Linear, dt, 1.0));
  const auto exact = N == 1 ? kernels::halfline_image_profile(1.0, u0) : kernels::exterior_ball_image_profile_3d(1.0, u0);
  double err = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) err = std::max(err, std::abs(traj.final().u.values[i] - exact[i]));
  return err;
}

}  // namespace

TEST_CASE("absorption ODE is integrated to second order") {
  for (double p : {1.5, 2.0, 3.0}) {
    const double e1 = ode_error(0.02, p), e2 = ode_error(0.01, p);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("linear flow converges to the image-kernel solution at second order") {
  for (int N : {1, 3}) {
    const double coarse = oracle_error(N, 500, 4e-3);
    const double fine = oracle_error(N, 1000, 2e-3);
    CHECK(coarse < 1e-4);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.12));
  }
}

TEST_CASE("phi-mass of the linear flow is conserved") {
  for (int N : {1, 2, 3, 5}) {
    const double r0 = N == 1 ? 0.0 : 1.0;
    auto g = grid_for(N, r0, r0 + 60.0, 600);
    SolverConfig cfg;
    cfg.scheme = Scheme::Linear;
    cfg.t_end = 20.0;
    const auto traj = evolve(bump(g, r0 + 2.0, 1.0), cfg);
    const double m0 = traj.steps.front().mass_phi;
    for (const auto& s : traj.steps) CHECK(std::abs(s.mass_phi + s.boundary_loss - m0) <= 1e-10 * m0);
  }
}

TEST_CASE("invalid input is rejected") {
  auto g = grid_for(3, 1.0, 10.0, 50);
  Field u = bump(g, 3.0, 1.0);
  SolverConfig cfg;
  cfg.p = 1.0;
  CHECK_THROWS_AS(evolve(u, cfg), std::invalid_argument);
  cfg = {};
  cfg.dt_growth = 0.9;
  CHECK_THROWS_AS(evolve(u, cfg), std::invalid_argument);
  cfg = {};
  cfg.output_times = {2.0};
  CHECK_THROWS_AS(evolve(u, cfg), std::invalid_argument);
  cfg = {};
  Field neg = u;
  neg.values[10] = -1.0;
  CHECK_THROWS_AS(evolve(neg, cfg), std::invalid_argument);
  Field edge = u;
  edge.values.back() = 1.0;
  CHECK_THROWS_AS(evolve(edge, cfg), std::invalid_argument);
  Field nan = u;
  nan.values[3] = std::nan("");
  CHECK_THROWS_AS(evolve(nan, cfg), NonFiniteError);
  CHECK_THROWS_AS(step(u, 0.0, cfg), std::invalid_argument);
}

TEST_CASE("mass reaching the truncation radius raises") {
  auto g = grid_for(3, 1.0, 8.0, 200);
  SolverConfig cfg;
  cfg.scheme = Scheme::Linear;
  cfg.t_end = 50.0;
  const Field u0 = bump(g, 5.0, 1.0);
  CHECK_THROWS_AS(evolve(u0, cfg), BoundaryFluxError);
}

TEST_CASE("comparison and bounds on random data") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> c(1.5, 4.0), a(0.2, 3.0);
  for (int trial = 0; trial < 4; ++trial) {
    auto g = grid_for(3, 1.0, 61.0, 600);
    const double centre = c(rng), amp = a(rng);
    const Field lo = bump(g, centre, 0.5, amp);
    Field hi = lo;
    const Field extra = bump(g, c(rng), 0.4, a(rng));
    for (std::size_t i = 0; i < hi.size(); ++i) hi.values[i] += extra.values[i];
    SolverConfig cfg;
    cfg.t_end = 10.0;
    cfg.output_times = {0.1, 1.0};
    const auto tl = evolve(lo, cfg), th = evolve(hi, cfg);
    for (std::size_t k = 0; k < tl.snapshots.size(); ++k)
      for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(tl.snapshots[k].u.values[i] <= th.snapshots[k].u.values[i] + 1e-14);
        CHECK(tl.snapshots[k].u.values[i] >= 0.0);
        CHECK(tl.snapshots[k].u.values[i] <= amp * (1.0 + 1e-12));
      }
  }
}

TEST_CASE("discrete scaling symmetry") {
  // u_l(t, r) = l^{2/(p-1)} u(l^2 t, l r) on the domain scaled by 1/l.
  const double p = 3.0, l = 2.0;
  auto g1 = grid_for(3, 2.0, 40.0, 400);
  auto g2 = grid_for(3, 1.0, 20.0, 400);
  const Field u1 = bump(g1, 5.0, 2.0);
  const Field u2 = sample(g2, [&](double r) { return l * bump_profile(l * r, 5.0, 2.0, 1.0); });
  const auto t1 = evolve(u1, fixed_step(Scheme::Semilinear, 0.01, 2.0, p));
  const auto t2 = evolve(u2, fixed_step(Scheme::Semilinear, 0.0025, 0.5, p));
  REQUIRE(t1.steps.size() == t2.steps.size());
  for (std::size_t i = 0; i < g1->size(); ++i)
    CHECK(t2.final().u.values[i] == doctest::Approx(l * t1.final().u.values[i]).epsilon(1e-10).scale(1e-12));
}

TEST_CASE("evolution is deterministic") {
  auto g = grid_for(2, 1.0, 50.0, 20000);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  const Field u0 = bump(g, 3.0, 1.0);
  const auto a = evolve(u0, cfg), b = evolve(u0, cfg);
  CHECK(a.final().u.values == b.final().u.values);
  CHECK(a.steps.back().absorbed_phi == b.steps.back().absorbed_phi);
}

TEST_CASE("interpolation and snapshots") {
  auto g = grid_for(1, 0.0, 40.0, 40);
  const Field u = sample(g, [](double r) { return r < 10.0 ? r * (10.0 - r) : 0.0; });
  CHECK(interpolate(u, 2.5) == doctest::Approx(0.5 * (16.0 + 21.0)));
  SolverConfig cfg;
  cfg.scheme = Scheme::Linear;
  cfg.t_end = 1.0;
  cfg.output_times = {0.5, 0.25, 0.5};
  const auto traj = evolve(u, cfg);
  const auto ts = traj.times();
  CHECK(ts == std::vector<double>{0.0, 0.25, 0.5, 1.0});
}

TEST_CASE("indicator semigroup approaches phi near the obstacle") {
  const DomainSpec d(3, 1.0, 201.0);
  const auto grid = make_grid(d, 2000);
  const auto s = indicator_limit_check(d, grid, {10.0, 100.0}, {2.0});
  REQUIRE(s.window_discrepancy.size() == 2);
  CHECK(s.window_discrepancy[1] < s.window_discrepancy[0]);
  CHECK(s.probe_values[1][0] == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS(indicator_limit_check(DomainSpec(2, 1.0, 50.0), make_grid(DomainSpec(2, 1.0, 50.0), 100), {1.0}));
}
