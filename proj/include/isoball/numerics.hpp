#pragma once

#include <functional>
#include <vector>

namespace isoball::numerics {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below abs_tol. Throws ConvergenceError past max_intervals.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                int max_intervals = 2000);

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double min_step = 1e-14;
  int max_steps = 100000;
};

struct OdeStep {
  double t;
  double y;
};

struct EventResult {
  double t_event = 0.0;
  std::vector<OdeStep> trajectory;
  int rhs_evaluations = 0;
  int accepted_steps = 0;
  int rejected_steps = 0;
};

/// Integrates the scalar autonomous ODE y' = f(y) from y(0) = y0 with the
/// Dormand-Prince 5(4) pair until y reaches `target` (approached from below,
/// so f must be positive). The crossing time is located on the continuous
/// extension and polished with short exact steps.
/// Throws ConvergenceError on step-size underflow or an exhausted budget.
EventResult integrate_until(const std::function<double(double)>& f, double y0, double target,
                            const OdeOptions& options);

} // namespace isoball::numerics
