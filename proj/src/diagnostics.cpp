#include "exheat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "exheat/grid_ops.hpp"
#include "exheat/quadrature.hpp"

namespace exheat::diag {

namespace {

void require_same_grid(const Field& u, std::size_t n, const char* who) {
  if (u.values.size() != n) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

bool is_inf(double q) { return std::isinf(q) && q > 0.0; }

// Fits y = c0 + c1 * x over the samples; returns {c0, c1, rms}.
struct Line {
  double intercept, slope, rms;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit: degenerate abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - intercept - slope * x[i];
    ss += e * e;
  }
  return {intercept, slope, std::sqrt(ss / n)};
}

}  // namespace

Series window(const Series& s, double t_lo, double t_hi) {
  Series out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.t[i] >= t_lo && s.t[i] <= t_hi) out.push(s.t[i], s.value[i]);
  return out;
}

double value_at(const Series& s, double t) {
  if (s.size() == 0) throw std::invalid_argument("value_at: empty series");
  if (t <= s.t.front()) return s.value.front();
  if (t >= s.t.back()) return s.value.back();
  const auto it = std::lower_bound(s.t.begin(), s.t.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - s.t.begin());
  if (s.t[j] == t) return s.value[j];
  const double f = (t - s.t[j - 1]) / (s.t[j] - s.t[j - 1]);
  return (1.0 - f) * s.value[j - 1] + f * s.value[j];
}

double mass_phi(const Field& u, const HarmonicWeight& phi) {
  require_same_grid(u, phi.values.size(), "mass_phi");
  return grid_ops::weighted_dot(u.grid->weights(), phi.values, u.values);
}

double lq_norm(const Field& u, double q, const HarmonicWeight* weight) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  if (weight) require_same_grid(u, weight->values.size(), "lq_norm");
  if (is_inf(q)) return grid_ops::max_abs(u.values);
  const auto w = u.grid->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u.values[i]);
    if (a == 0.0) continue;
    sum += w[i] * (weight ? weight->values[i] : 1.0) * (q == 1.0 ? a : std::pow(a, q));
  }
  return q == 1.0 ? sum : std::pow(sum, 1.0 / q);
}

Series energy_identity_residual(const Trajectory& traj, const HarmonicWeight& phi) {
  Series out;
  const double m0 = mass_phi(traj.initial().u, phi);
  if (m0 == 0.0) {
    for (const auto& s : traj.snapshots) out.push(s.t, 0.0);
    return out;
  }
  const auto w = traj.grid->weights();
  for (const auto& s : traj.snapshots) {
    const double m = mass_phi(s.u, phi);
    const double absorbed = grid_ops::weighted_dot(w, phi.values, s.absorbed);
    out.push(s.t, std::abs(m + absorbed - m0) / std::abs(m0));
  }
  return out;
}

namespace {

// Linear least squares of y = limit + coefficient * shape over the samples.
MassExtrapolation extrapolate_with_shape(const std::vector<double>& t, const std::vector<double>& y,
                                         const kernels::RatePair& shape) {
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = shape(t[i]);
  const Line line = fit_line(x, y);
  return {line.intercept, line.slope, line.rms};
}

}  // namespace

UInfinity compute_u_infty(const Trajectory& traj, const HarmonicWeight& phi) {
  UInfinity out;
  const Field& u0 = traj.initial().u;
  out.u = u0;
  if (traj.config.scheme == Scheme::Linear) {
    out.mass = mass_phi(u0, phi);
    return out;
  }
  const Snapshot& last = traj.final();
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u.values[i] -= last.absorbed[i];

  const int dim = traj.grid->domain().dimension();
  const double p = traj.config.p;
  const double t_end = last.t;
  const auto shape = kernels::rate_E_tilde(dim, p);

  std::vector<double> t, absorbed;
  for (const auto& rec : traj.steps)
    if (rec.t >= 0.1 * t_end) {
      t.push_back(rec.t);
      absorbed.push_back(rec.absorbed_phi);
    }

  std::vector<double> rate(out.u.size());
  grid_ops::power_map(last.u.values, p, rate);
  const double rate_mass = grid_ops::weighted_dot(traj.grid->weights(), phi.values, rate);

  if (shape.power_exponent < 0.0 && t.size() >= 4 && rate_mass > 0.0) {
    // absorbed(t) = A_inf - c * tilde-E(t)  =>  tail = c * tilde-E(t_end).
    const auto full = extrapolate_with_shape(t, absorbed, shape);
    out.tail_mass = std::max(0.0, -full.coefficient * shape(t_end));
    const std::size_t half = t.size() / 2;
    const std::vector<double> t1(t.begin(), t.begin() + half + 1), a1(absorbed.begin(), absorbed.begin() + half + 1);
    const std::vector<double> t2(t.begin() + half, t.end()), a2(absorbed.begin() + half, absorbed.end());
    double spread = 0.0;
    if (t1.size() >= 3 && t2.size() >= 3) {
      const double tail1 = -extrapolate_with_shape(t1, a1, shape).coefficient * shape(t_end);
      const double tail2 = -extrapolate_with_shape(t2, a2, shape).coefficient * shape(t_end);
      spread = std::abs(tail1 - tail2);
    }
    out.uncertainty = std::max(spread + full.uncertainty, 0.1 * out.tail_mass);
    const double fitted = kernels::RatePair{shape.power_exponent - 1.0, shape.log_exponent}(t_end);
    out.tail_exponent = fitted > 0.0 ? shape.power_exponent - 1.0 : 0.0;
    const double scale = out.tail_mass / rate_mass;
    for (std::size_t i = 0; i < out.u.size(); ++i) out.u.values[i] -= scale * rate[i];
  } else {
    // No integrable tail shape: report the whole current absorption scale.
    out.uncertainty = std::numeric_limits<double>::infinity();
  }
  out.mass = mass_phi(out.u, phi);
  out.flagged = !(out.uncertainty <= 0.2 * std::abs(out.mass));
  if (out.mass == 0.0 && out.uncertainty == 0.0) out.flagged = false;
  return out;
}

Series subsolution_factor(const Trajectory& linear, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("subsolution_factor: p must exceed 1");
  Series out;
  double integral = 0.0;
  const auto& steps = linear.steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) {
      const double dt = steps[i].t - steps[i - 1].t;
      integral += 0.5 * dt * (std::pow(steps[i - 1].max_abs, p - 1.0) + std::pow(steps[i].max_abs, p - 1.0));
    }
    out.push(steps[i].t, std::pow(1.0 + (p - 1.0) * integral, -1.0 / (p - 1.0)));
  }
  return out;
}

ComparisonReport comparison_check(const Trajectory& semilinear, const Trajectory& linear, const Series& h,
                                  const HarmonicWeight& phi) {
  ComparisonReport rep;
  const double sup0 = semilinear.initial().u.max_abs();
  const double m0 = mass_phi(semilinear.initial().u, phi);
  rep.min_value = std::numeric_limits<double>::infinity();
  for (const auto& s : semilinear.snapshots) {
    const auto it = std::find_if(linear.snapshots.begin(), linear.snapshots.end(),
                                 [&](const Snapshot& l) { return l.t == s.t; });
    if (it == linear.snapshots.end()) throw std::invalid_argument("comparison_check: snapshot times differ");
    require_same_grid(s.u, it->u.size(), "comparison_check");
    const double factor = value_at(h, s.t);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      rep.max_violation = std::max(rep.max_violation, factor * it->u.values[i] - s.u.values[i]);
      rep.max_overshoot = std::max(rep.max_overshoot, s.u.values[i] - sup0);
      rep.min_value = std::min(rep.min_value, s.u.values[i]);
    }
    rep.mass_violation = std::max(rep.mass_violation, factor * m0 - mass_phi(s.u, phi));
  }
  return rep;
}

double profile_envelope(int dimension, double p, double t) {
  const auto e = kernels::rate_E_tilde(dimension, p);
  if (t <= 0.0) return 2.0 * e(0.0);
  const double integral = quad::integrate([&](double s) { return e(s); }, 0.0, t).value;
  return e(t) + integral / t;
}

namespace {

double distance_weight(int dim, double q, double t) {
  const double frac = is_inf(q) ? 1.0 : 1.0 - 1.0 / q;
  return std::pow(1.0 + t, 0.5 * dim * frac) * kernels::rate_E(dim)(t);
}

double difference_norm(const Field& a, std::span<const double> b, double q) {
  Field diff = a;
  for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] -= b[i];
  return lq_norm(diff, q);
}

}  // namespace

ProfileDistance profile_distance_S_u_infty(const Trajectory& traj, const Field& u_inf, double q) {
  SolverConfig cfg = traj.config;
  cfg.scheme = Scheme::Linear;
  cfg.output_times.clear();
  for (const auto& s : traj.snapshots)
    if (s.t > 0.0) cfg.output_times.push_back(s.t);
  const Trajectory free_flow = evolve(u_inf, cfg);

  const int dim = traj.grid->domain().dimension();
  ProfileDistance out;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    const auto& f = free_flow.snapshots[k];
    if (f.t != s.t) throw std::logic_error("profile_distance_S_u_infty: snapshot times differ");
    out.distance.push(s.t, distance_weight(dim, q, s.t) * difference_norm(s.u, f.u.values, q));
    out.envelope.push(s.t, traj.config.scheme == Scheme::Semilinear ? profile_envelope(dim, traj.config.p, s.t) : 0.0);
  }
  return out;
}

Series profile_distance_gaussian(const Trajectory& traj, double m_inf, const HarmonicWeight& phi, double q) {
  const int dim = traj.grid->domain().dimension();
  const double frac = is_inf(q) ? 1.0 : 1.0 - 1.0 / q;
  const auto nodes = traj.grid->nodes();
  Series out;
  std::vector<double> profile(nodes.size());
  for (const auto& s : traj.snapshots) {
    if (s.t <= 0.0) continue;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      profile[i] = m_inf * phi.values[i] * kernels::gaussian(dim, s.t, nodes[i]);
    out.push(s.t, std::pow(s.t, 0.5 * dim * frac) * difference_norm(s.u, profile, q));
  }
  return out;
}

double calibrate_envelope_constant(const ProfileDistance& pd, double t_probe_max) {
  double c = 0.0;
  for (std::size_t i = 0; i < pd.distance.size(); ++i) {
    const double t = pd.distance.t[i];
    if (t <= 0.0 || t > t_probe_max) continue;
    c = std::max(c, pd.distance.value[i] / pd.envelope.value[i]);
  }
  return c;
}

RateFit fit_rate(const Series& s, bool with_log, TimeAxis axis) {
  if (s.size() < 8) throw std::invalid_argument("fit_rate: need at least 8 samples");
  const double t_lo = s.t.front();
  const double t_hi = s.t.back();
  if (!(t_hi >= 10.0 * t_lo)) throw std::invalid_argument("fit_rate: window spans less than a factor 10 in t");

  const std::size_t n = s.size();
  std::vector<double> x1(n), x2(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.value[i] > 0.0)) throw std::invalid_argument("fit_rate: series must be positive");
    const double T = axis == TimeAxis::Shifted ? 1.0 + s.t[i] : s.t[i];
    if (!(T > 0.0)) throw std::invalid_argument("fit_rate: nonpositive time coordinate");
    x1[i] = std::log(T);
    x2[i] = std::log1p(std::log(T));
    y[i] = std::log(s.value[i]);
  }

  RateFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.with_log = with_log;
  if (!with_log) {
    const Line line = fit_line(x1, y);
    fit.a = line.slope;
    fit.log_c = line.intercept;
    fit.residual = line.rms;
    return fit;
  }

  double m1 = 0, m2 = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += x1[i];
    m2 += x2[i];
    my += y[i];
  }
  m1 /= n;
  m2 /= n;
  my /= n;
  double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = x1[i] - m1, d2 = x2[i] - m2, dy = y[i] - my;
    s11 += d1 * d1;
    s12 += d1 * d2;
    s22 += d2 * d2;
    s1y += d1 * dy;
    s2y += d2 * dy;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(det > 1e-14 * s11 * s22)) throw std::invalid_argument("fit_rate: ill-conditioned joint fit");
  fit.a = (s22 * s1y - s12 * s2y) / det;
  fit.b = (s11 * s2y - s12 * s1y) / det;
  fit.log_c = my - fit.a * m1 - fit.b * m2;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.log_c - fit.a * x1[i] - fit.b * x2[i];
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

MassExtrapolation extrapolate_mass(const Series& mass, const kernels::RatePair& shape) {
  if (mass.size() < 3) throw std::invalid_argument("extrapolate_mass: need at least 3 samples");
  return extrapolate_with_shape(mass.t, mass.value, shape);
}

Series mass_series(const Trajectory& traj, const HarmonicWeight& phi) {
  Series out;
  for (const auto& s : traj.snapshots) out.push(s.t, mass_phi(s.u, phi));
  return out;
}

Series norm_series(const Trajectory& traj, double q) {
  Series out;
  for (const auto& s : traj.snapshots) out.push(s.t, lq_norm(s.u, q));
  return out;
}

MassReport mass_report(const Trajectory& traj, const HarmonicWeight& phi) {
  MassReport rep;
  const double t_end = traj.final().t;
  for (const auto& rec : traj.steps) {
    rep.mass.push(rec.t, rec.mass_phi);
    rep.absorbed.push(rec.t, rec.absorbed_phi);
  }
  rep.residual = energy_identity_residual(traj, phi);
  if (traj.config.scheme == Scheme::Semilinear) {
    const auto shape = kernels::rate_E_tilde(traj.grid->domain().dimension(), traj.config.p);
    const bool decays = shape.power_exponent < 0.0 || (shape.power_exponent == 0.0 && shape.log_exponent < 0.0);
    const Series last = window(rep.mass, 0.1 * t_end, t_end);
    if (decays && last.size() >= 3) {
      rep.extrapolated = extrapolate_mass(last, shape);
    } else {
      // No decaying tail shape to fit against.
      rep.extrapolated = {rep.mass.value.back(), 0.0, std::numeric_limits<double>::infinity()};
    }
  } else {
    rep.extrapolated = {rep.mass.value.back(), 0.0, 0.0};
  }
  return rep;
}

}  // namespace exheat::diag
