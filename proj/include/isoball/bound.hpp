#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoball/numerics.hpp"

namespace isoball {

/// One point (eps, M(eps, n)) of the isoperimetric profile. When the lens
/// solver fails at this eps, `error` carries the message and m_value is NaN.
struct IsoPoint {
  double eps = 0.0;
  double m_value = 0.0;
  int n = 0;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// M(v, n): free area of the orthogonal lens of volume v, flat cut at v = 1/2.
/// Only defined for v in (0, 1/2]; larger v is a domain error.
double iso_value(int n, double v);

/// Right-hand side of the growth ODE: M(v) for v <= 1/2 and, by complement
/// symmetry, M(1 - v) beyond. The lens solver never sees v > 1/2.
double growth_rate(int n, double v);

std::vector<IsoPoint> iso_profile(int n, std::span<const double> eps_grid);

struct DistanceValue {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

/// D(eps, n) = 2 * integral_eps^{1/2} dv / M(v, n) by adaptive Gauss-Kronrod.
DistanceValue distance_bound_detail(int n, double eps, double quad_tol = 1e-8);
double distance_bound(int n, double eps, double quad_tol = 1e-8);

struct GrowthResult {
  double expansion_time = 0.0;
  std::vector<numerics::OdeStep> trajectory;
  int evaluations = 0;
};

/// Time for v' = M(v, n), v(0) = eps, to reach 1/2 (Dormand-Prince 5(4)).
GrowthResult growth_ode(int n, double eps, double step_tol = 1e-9);

struct DistanceCurve {
  int n = 0;
  std::vector<std::pair<double, double>> samples;  // (eps, D)
  double quadrature_error = 0.0;
};

DistanceCurve distance_curve(int n, std::span<const double> eps_grid, double quad_tol = 1e-8);

struct ScanRow {
  int n = 0;
  double d_value = 0.0;
  double abs_error = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct DimensionScan {
  double eps = 0.0;
  std::vector<ScanRow> rows;
  double sup_d = 0.0;
  int sup_n = 0;
  /// differences[i] = D(row i+1) - D(row i) over successful consecutive rows.
  std::vector<double> differences;
  /// First index from which |differences| is strictly decreasing to the end.
  std::optional<std::size_t> knee;
};

/// D(eps, n) for each n (rows in input order, failures isolated per row).
DimensionScan dimension_scan(double eps, std::span<const int> n_list, double quad_tol = 1e-8, int threads = 0);

/// Smallest index k with |values[k]| > |values[k+1]| > ... ; nullopt if empty.
std::optional<std::size_t> monotone_tail_start(std::span<const double> values);

} // namespace isoball
