#include "exheat/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace exheat::quad {

namespace {

// Kronrod abscissae (nonnegative half, descending) and weights; odd indices
// of the Kronrod set are the Gauss 7-point nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrod[j] * sum;
    if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate: non-finite bounds");
  if (a == b) return {0.0, 0.0, 0, true};
  if (b < a) {
    Result r = integrate(f, b, a, tol);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Segment> heap;
  Segment first = rule(f, a, b);
  heap.push(first);
  double value = first.value;
  double error = first.error;
  int intervals = 1;

  while (error > std::max(tol.absolute, tol.relative * std::abs(value)) && intervals < tol.max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Segment left = rule(f, worst.a, mid);
    Segment right = rule(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, intervals, error <= std::max(tol.absolute, tol.relative * std::abs(value))};
}

Result integrate_to_infinity(const std::function<double(double)>& f, double a, Tolerance tol) {
  auto mapped = [&](double sigma) {
    const double gap = 1.0 - sigma;
    if (gap <= 0.0) return 0.0;
    const double s = a + sigma / gap;
    const double v = f(s) / (gap * gap);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, tol);
}

}  // namespace exheat::quad
