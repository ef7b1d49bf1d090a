#include "isoball/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "isoball/errors.hpp"

namespace isoball::numerics {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

} // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                int max_intervals) {
  if (!(abs_tol > 0.0)) throw std::domain_error("integrate_gk15: abs_tol must be > 0");
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  out.evaluations = 15;
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > abs_tol) {
    if (static_cast<int>(heap.size()) >= max_intervals)
      throw ConvergenceError("integrate_gk15: tolerance not reached within the interval budget");
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw ConvergenceError("integrate_gk15: interval collapsed before reaching tolerance");
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the running-update rounding.
  value = 0.0;
  error = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.abs_error = error;
  return out;
}

namespace {

struct DpStep {
  double y_new;
  double f_new;
  double err;
};

// One Dormand-Prince 5(4) step of y' = f(y); k1 = f(y) is reused (FSAL).
DpStep dp_step(const std::function<double(double)>& f, double y, double k1, double h, int& evals) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  const double k2 = f(y + h * a21 * k1);
  const double k3 = f(y + h * (a31 * k1 + a32 * k2));
  const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const double k7 = f(y_new);
  evals += 6;
  const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {y_new, k7, err};
}

} // namespace

EventResult integrate_until(const std::function<double(double)>& f, double y0, double target,
                            const OdeOptions& options) {
  EventResult out;
  out.trajectory.push_back({0.0, y0});
  if (y0 >= target) return out;

  double t = 0.0;
  double y = y0;
  double fy = f(y);
  out.rhs_evaluations = 1;
  if (!(fy > 0.0)) throw ConvergenceError("integrate_until: right-hand side must be positive");
  double h = 0.01 * (target - y0) / fy;

  for (int step = 0; step < options.max_steps; ++step) {
    if (h < options.min_step) throw ConvergenceError("integrate_until: step size underflow");
    const DpStep s = dp_step(f, y, fy, h, out.rhs_evaluations);
    const double scale = options.abs_tol + options.rel_tol * std::max(std::fabs(y), std::fabs(s.y_new));
    const double err = std::fabs(s.err) / scale;
    if (!(err <= 1.0)) {
      ++out.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }
    ++out.accepted_steps;
    if (s.y_new >= target) {
      // Cubic Hermite on [t, t+h], then Newton on exact steps from t.
      auto hermite = [&](double tau) {
        const double u = tau / h;
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        return h00 * y + h10 * h * fy + h01 * s.y_new + h11 * h * s.f_new;
      };
      double lo = 0.0, hi = h;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * h; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hermite(mid) < target ? lo : hi) = mid;
      }
      double tau = 0.5 * (lo + hi);
      for (int it = 0; it < 4; ++it) {
        const DpStep exact = dp_step(f, y, fy, tau, out.rhs_evaluations);
        const double miss = target - exact.y_new;
        if (std::fabs(miss) <= 1e-15 * std::fabs(target)) break;
        tau += miss / exact.f_new;
      }
      out.t_event = t + tau;
      out.trajectory.push_back({out.t_event, target});
      return out;
    }
    t += h;
    y = s.y_new;
    fy = s.f_new;
    out.trajectory.push_back({t, y});
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-30), -0.2)));
  }
  throw ConvergenceError("integrate_until: step budget exhausted");
}

} // namespace isoball::numerics
