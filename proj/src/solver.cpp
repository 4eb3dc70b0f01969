#include "exheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace exheat {

std::string to_string(Scheme scheme) { return scheme == Scheme::Linear ? "linear" : "semilinear"; }

void SolverConfig::validate() const {
  if (scheme == Scheme::Semilinear && !(p > 1.0)) throw std::invalid_argument("SolverConfig: p must exceed 1");
  if (!(dt_initial > 0.0)) throw std::invalid_argument("SolverConfig: dt_initial must be positive");
  if (!(dt_growth >= 1.0)) throw std::invalid_argument("SolverConfig: dt_growth must be >= 1");
  if (!(dt_cap_factor > 0.0)) throw std::invalid_argument("SolverConfig: dt_cap_factor must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("SolverConfig: t_end must be positive");
  if (startup_steps < 0) throw std::invalid_argument("SolverConfig: startup_steps must be >= 0");
  for (double t : output_times)
    if (!(t > 0.0 && t <= t_end)) throw std::invalid_argument("SolverConfig: output times must lie in (0, t_end]");
}

std::vector<double> Trajectory::times() const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(s.t);
  return out;
}

RadialOperator::RadialOperator(const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const auto& dom = grid.domain();
  const double h = grid.spacing();
  const double area = sphere_area(dom.dimension());
  const int k = dom.dimension() - 1;

  phi_.resize(n);
  for (std::size_t i = 0; i < n; ++i) phi_[i] = phi_weight(dom, grid.node(i));
  phi_.front() = 0.0;
  weights_.assign(grid.weights().begin(), grid.weights().end());

  lower_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  upper_.assign(n, 0.0);
  auto face = [&](std::size_t i) {  // r_{i+1/2}^{N-1}
    return std::pow(grid.node(i) + 0.5 * h, k);
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double scale = area / (h * weights_[i]);
    const double left = face(i - 1);
    const double right = face(i);
    lower_[i] = scale * left;
    upper_[i] = scale * right;
    diag_[i] = -scale * (right * phi_[i + 1] + left * phi_[i - 1]) / phi_[i];
  }
  outer_coefficient_ = area / h * face(n - 2) * phi_[n - 1];
  scratch_c_.resize(n);
  scratch_d_.resize(n);
}

double RadialOperator::outer_flux(std::span<const double> u) const {
  return outer_coefficient_ * u[u.size() - 2];
}

void RadialOperator::solve_shifted(double scale, std::span<const double> rhs, std::span<double> x) const {
  const std::size_t n = rhs.size();
  auto& c = scratch_c_;
  auto& d = scratch_d_;
  // Row 0 is the identity with zero right-hand side.
  c[0] = 0.0;
  d[0] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = -scale * lower_[i];
    const double b = 1.0 - scale * diag_[i];
    const double up = -scale * upper_[i];
    const double denom = b - a * c[i - 1];
    if (denom == 0.0) throw std::runtime_error("solve_shifted: singular tridiagonal system");
    c[i] = up / denom;
    d[i] = (rhs[i] - a * d[i - 1]) / denom;
  }
  x[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 1;) x[i] = d[i] - c[i] * x[i + 1];
  x[0] = 0.0;
}

namespace {

struct StepInfo {
  double boundary_loss = 0.0;
  double clamped = 0.0;
  double absorbed_phi = 0.0;  // sum w phi (int over the step of u^p), trapezoid
};

class Stepper {
 public:
  Stepper(const RadialGrid& grid, const SolverConfig& cfg, detail::StepHooks hooks)
      : op_(grid), cfg_(cfg), hooks_(hooks), n_(grid.size()) {
    f0_.resize(n_);
    f1_.resize(n_);
    rhs_.resize(n_);
    pred_.resize(n_);
  }

  const RadialOperator& op() const { return op_; }

  // Advances u by dt; accumulates int u^p ds into acc when non-null.
  StepInfo advance(std::vector<double>& u, double dt, bool implicit_euler, std::vector<double>* acc) {
    StepInfo info;
    if (implicit_euler) {
      for (int half = 0; half < 2; ++half) accumulate(info, euler_substep(u, 0.5 * dt, info), acc);
    } else {
      accumulate(info, crank_nicolson(u, dt, info), acc);
    }
    return info;
  }

 private:
  double diffusion_scale(double s) const { return hooks_.diffusion ? s : 0.0; }
  bool semilinear() const { return cfg_.scheme == Scheme::Semilinear; }

  void solve(double scale, std::vector<double>& out) {
    if (hooks_.diffusion) {
      op_.solve_shifted(scale, rhs_, out);
    } else {
      out = rhs_;
      out.front() = 0.0;
      out.back() = 0.0;
    }
  }

  double euler_substep(std::vector<double>& u, double tau, StepInfo& info) {
    if (semilinear()) grid_ops::power_map(u, cfg_.p, f0_);
    rhs_ = u;
    if (semilinear()) grid_ops::axpy(-tau, f0_, rhs_);
    solve(diffusion_scale(tau), u);
    finish(u, tau, tau, info);
    return tau;
  }

  double crank_nicolson(std::vector<double>& u, double dt, StepInfo& info) {
    const double loss_before = op_.outer_flux(u);
    if (semilinear()) {
      grid_ops::power_map(u, cfg_.p, f0_);
      rhs_ = u;
      grid_ops::axpy(-0.5 * dt, f0_, rhs_);
      solve(diffusion_scale(0.5 * dt), pred_);
      grid_ops::clamp_nonnegative(pred_, op_.weights(), op_.phi());
      grid_ops::power_map(pred_, cfg_.p, f1_);
    }
    if (hooks_.diffusion) {
      grid_ops::apply_shifted(op_.stencil(), u, 0.5 * dt, rhs_);
    } else {
      rhs_ = u;
    }
    if (semilinear()) grid_ops::axpy(-dt, f1_, rhs_);
    solve(diffusion_scale(0.5 * dt), u);
    info.boundary_loss += hooks_.diffusion ? 0.5 * dt * loss_before : 0.0;
    finish(u, dt, 0.5 * dt, info);
    return dt;
  }

  // Clamps, books the outer-boundary loss of the new state, and leaves u^p of
  // the new state in f1_.
  void finish(std::vector<double>& u, double dt, double loss_weight, StepInfo& info) {
    if (semilinear()) {
      info.clamped += grid_ops::clamp_nonnegative(u, op_.weights(), op_.phi());
      grid_ops::power_map(u, cfg_.p, f1_);
    }
    if (hooks_.diffusion) info.boundary_loss += loss_weight * op_.outer_flux(u);
    (void)dt;
  }

  void accumulate(StepInfo& info, double tau, std::vector<double>* acc) {
    if (!semilinear()) return;
    const double rate_before = grid_ops::weighted_dot(op_.weights(), op_.phi(), f0_);
    const double rate_after = grid_ops::weighted_dot(op_.weights(), op_.phi(), f1_);
    info.absorbed_phi += 0.5 * tau * (rate_before + rate_after);
    if (acc) grid_ops::trapezoid_accumulate(0.5 * tau, f0_, f1_, *acc);
  }

  RadialOperator op_;
  SolverConfig cfg_;
  detail::StepHooks hooks_;
  std::size_t n_;
  std::vector<double> f0_, f1_, rhs_, pred_;
};

void check_field(const Field& u, const SolverConfig& cfg) {
  if (!u.grid) throw std::invalid_argument("evolve: field without grid");
  if (u.values.size() != u.grid->size()) throw std::invalid_argument("evolve: field size mismatch");
  if (u.values.front() != 0.0 || u.values.back() != 0.0)
    throw std::invalid_argument("evolve: field violates the Dirichlet boundary condition");
  if (!grid_ops::all_finite(u.values)) throw NonFiniteError("evolve: non-finite initial data");
  if (cfg.scheme == Scheme::Semilinear)
    for (double v : u.values)
      if (v < 0.0) throw std::invalid_argument("evolve: semilinear flow requires nonnegative data");
}

}  // namespace

Field detail::step_with_hooks(const Field& u, double dt, const SolverConfig& cfg, StepHooks hooks) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  check_field(u, cfg);
  Stepper stepper(*u.grid, cfg, hooks);
  Field out = u;
  stepper.advance(out.values, dt, false, nullptr);
  if (!grid_ops::all_finite(out.values)) throw NonFiniteError("step: non-finite values");
  return out;
}

Field step(const Field& u, double dt, const SolverConfig& cfg) { return detail::step_with_hooks(u, dt, cfg, {}); }

Trajectory evolve(const Field& u0, const SolverConfig& cfg_in) {
  cfg_in.validate();
  check_field(u0, cfg_in);

  Trajectory traj;
  traj.config = cfg_in;
  traj.grid = u0.grid;
  auto& outputs = traj.config.output_times;
  outputs.push_back(traj.config.t_end);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  const SolverConfig& cfg = traj.config;

  const RadialGrid& grid = *u0.grid;
  const double R = grid.domain().truncation_radius();
  if (support_radius(u0) + 6.0 * std::sqrt(cfg.t_end) > R) {
    std::ostringstream msg;
    msg << "initial support " << support_radius(u0) << " is within 6 sqrt(t_end) of R_max = " << R;
    traj.warnings.push_back(msg.str());
  }

  Stepper stepper(grid, cfg, {});
  const auto& op = stepper.op();
  std::vector<double> u = u0.values;
  std::vector<double> acc(u.size(), 0.0);

  StepRecord rec;
  rec.max_abs = grid_ops::max_abs(u);
  rec.mass_phi = grid_ops::weighted_dot(op.weights(), op.phi(), u);
  traj.steps.push_back(rec);
  traj.snapshots.push_back({0.0, u0, acc});

  double t = 0.0;
  double dt = cfg.dt_initial;
  int taken = 0;
  for (double target : outputs) {
    while (t < target) {
      const double dt_try = std::min(dt, cfg.dt_cap_factor * (1.0 + t));
      const bool landing = t + dt_try >= target - 1e-12 * std::max(1.0, target);
      const double dt_step = landing ? target - t : dt_try;
      const double mass_before = rec.mass_phi;

      const StepInfo info = stepper.advance(u, dt_step, taken < cfg.startup_steps, &acc);
      ++taken;
      t = landing ? target : t + dt_step;
      dt = dt_try * cfg.dt_growth;

      if (!grid_ops::all_finite(u)) {
        std::ostringstream msg;
        msg << "evolve: non-finite values at t = " << t << " (dt = " << dt_step << ")";
        throw NonFiniteError(msg.str());
      }

      rec.t = t;
      rec.dt = dt_step;
      rec.max_abs = grid_ops::max_abs(u);
      rec.mass_phi = grid_ops::weighted_dot(op.weights(), op.phi(), u);
      rec.absorbed_phi += info.absorbed_phi;
      rec.boundary_loss += info.boundary_loss;
      rec.clamped += info.clamped;
      traj.steps.push_back(rec);
      if (std::abs(mass_before) > 0.0)
        traj.max_clamped_fraction = std::max(traj.max_clamped_fraction, info.clamped / std::abs(mass_before));

      const double scale = grid_ops::weighted_abs_dot(op.weights(), op.phi(), u);
      const double leaked = std::abs(rec.boundary_loss);
      if (leaked > 1e-4 * scale && leaked > 0.0) {
        std::ostringstream msg;
        msg << "evolve: outer boundary absorbed " << leaked << " of phi-mass (current " << scale << ") by t = " << t;
        throw BoundaryFluxError(msg.str());
      }
      if (!traj.flux_warning && leaked > 1e-8 * scale && leaked > 0.0) {
        traj.flux_warning = true;
        std::ostringstream msg;
        msg << "outer boundary flux exceeded 1e-8 of the phi-mass at t = " << t;
        traj.warnings.push_back(msg.str());
      }
    }
    traj.snapshots.push_back({t, Field(u0.grid, u), acc});
  }
  return traj;
}

Field apply_semigroup(const Field& u0, double t) {
  SolverConfig control;
  control.scheme = Scheme::Linear;
  return apply_semigroup(u0, t, control);
}

Field apply_semigroup(const Field& u0, double t, SolverConfig control) {
  if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be nonnegative");
  if (t == 0.0) return u0;
  control.scheme = Scheme::Linear;
  control.t_end = t;
  control.output_times.clear();
  return evolve(u0, control).final().u;
}

double interpolate(const Field& u, double r) {
  const auto& grid = *u.grid;
  const double r0 = grid.domain().inner_radius();
  const double pos = (r - r0) / grid.spacing();
  if (pos <= 0.0) return u.values.front();
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= grid.size()) return u.values.back();
  const double frac = pos - static_cast<double>(i);
  return (1.0 - frac) * u.values[i] + frac * u.values[i + 1];
}

IndicatorLimitSeries indicator_limit_check(const DomainSpec& domain, const RadialGrid& grid,
                                           const std::vector<double>& t_list,
                                           const std::vector<double>& probe_radii) {
  if (domain.dimension() < 3) throw std::invalid_argument("indicator_limit_check: requires N >= 3");
  if (!(grid.domain() == domain)) throw std::invalid_argument("indicator_limit_check: grid/domain mismatch");
  if (t_list.empty()) throw std::invalid_argument("indicator_limit_check: empty time list");
  const double t_max = *std::max_element(t_list.begin(), t_list.end());
  const double r0 = domain.inner_radius();
  const double edge = domain.truncation_radius() - 8.0 * std::sqrt(t_max);
  if (edge <= r0 + 2.0) throw std::invalid_argument("indicator_limit_check: R_max too small for the requested times");

  auto shared = share(grid);
  Field one = sample(shared, [edge](double r) { return r <= edge ? 1.0 : 0.0; });

  SolverConfig cfg;
  cfg.scheme = Scheme::Linear;
  cfg.dt_initial = 1e-4;
  cfg.t_end = t_max;
  cfg.output_times = t_list;
  const Trajectory traj = evolve(one, cfg);

  IndicatorLimitSeries out;
  out.indicator_edge = edge;
  out.probe_radii = probe_radii;
  for (const auto& snap : traj.snapshots) {
    if (snap.t == 0.0) continue;
    if (std::find(t_list.begin(), t_list.end(), snap.t) == t_list.end()) continue;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size() && grid.node(i) <= r0 + 2.0; ++i)
      worst = std::max(worst, std::abs(snap.u.values[i] - phi_weight(domain, grid.node(i))));
    out.t.push_back(snap.t);
    out.window_discrepancy.push_back(worst);
    std::vector<double> probes;
    for (double r : probe_radii) probes.push_back(interpolate(snap.u, r));
    out.probe_values.push_back(std::move(probes));
  }
  return out;
}

}  // namespace exheat
