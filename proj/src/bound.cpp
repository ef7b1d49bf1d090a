#include "isoball/bound.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isoball/lens.hpp"
#include "isoball/parallel.hpp"

namespace isoball {

double iso_value(int n, double v) {
  if (!(v > 0.0 && v <= 0.5)) throw std::domain_error("iso_value: volume must lie in (0, 1/2]");
  const LensShape shape = v == 0.5 ? flat_cut_lens(n) : solve_rho_for_volume(n, v, 1e-12);
  return lens_free_area(shape);
}

double growth_rate(int n, double v) {
  if (!(v > 0.0 && v < 1.0)) throw std::domain_error("growth_rate: volume must lie in (0, 1)");
  return iso_value(n, v <= 0.5 ? v : 1.0 - v);
}

std::vector<IsoPoint> iso_profile(int n, std::span<const double> eps_grid) {
  if (n < 2) throw std::domain_error("iso_profile: n must be >= 2");
  std::vector<IsoPoint> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    IsoPoint p{eps, std::numeric_limits<double>::quiet_NaN(), n, {}};
    try {
      p.m_value = iso_value(n, eps);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

DistanceValue distance_bound_detail(int n, double eps, double quad_tol) {
  if (n < 2) throw std::domain_error("distance_bound: n must be >= 2");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::domain_error("distance_bound: eps must lie in (0, 1/2]");
  if (eps == 0.5) return {};
  // The quadrature error budget is on D = 2 * integral.
  const auto q = numerics::integrate_gk15([n](double v) { return 1.0 / iso_value(n, v); }, eps, 0.5,
                                          0.5 * quad_tol);
  return {2.0 * q.value, 2.0 * q.abs_error, q.evaluations};
}

double distance_bound(int n, double eps, double quad_tol) { return distance_bound_detail(n, eps, quad_tol).value; }

GrowthResult growth_ode(int n, double eps, double step_tol) {
  if (n < 2) throw std::domain_error("growth_ode: n must be >= 2");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::domain_error("growth_ode: eps must lie in (0, 1/2]");
  if (!(step_tol > 0.0)) throw std::domain_error("growth_ode: step_tol must be > 0");
  numerics::OdeOptions opt;
  opt.rel_tol = step_tol;
  opt.abs_tol = 1e-3 * step_tol;
  const auto r = numerics::integrate_until([n](double v) { return growth_rate(n, v); }, eps, 0.5, opt);
  return {r.t_event, r.trajectory, r.rhs_evaluations};
}

DistanceCurve distance_curve(int n, std::span<const double> eps_grid, double quad_tol) {
  DistanceCurve c;
  c.n = n;
  for (double eps : eps_grid) {
    const auto d = distance_bound_detail(n, eps, quad_tol);
    c.samples.emplace_back(eps, d.value);
    c.quadrature_error = std::max(c.quadrature_error, d.abs_error);
  }
  return c;
}

std::optional<std::size_t> monotone_tail_start(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  std::size_t k = values.size() - 1;
  while (k > 0 && std::fabs(values[k - 1]) > std::fabs(values[k])) --k;
  return k;
}

DimensionScan dimension_scan(double eps, std::span<const int> n_list, double quad_tol, int threads) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::domain_error("dimension_scan: eps must lie in (0, 1/2]");
  if (n_list.empty()) throw std::domain_error("dimension_scan: n_list must be nonempty");
  DimensionScan scan;
  scan.eps = eps;
  scan.rows.resize(n_list.size());
  parallel_for(
      n_list.size(),
      [&](std::size_t i) {
        ScanRow& row = scan.rows[i];
        row.n = n_list[i];
        try {
          const auto d = distance_bound_detail(row.n, eps, quad_tol);
          row.d_value = d.value;
          row.abs_error = d.abs_error;
        } catch (const std::exception& e) {
          row.d_value = std::numeric_limits<double>::quiet_NaN();
          row.error = e.what();
        }
      },
      threads);

  bool first = true;
  const ScanRow* prev = nullptr;
  for (const auto& row : scan.rows) {
    if (!row.ok()) {
      prev = nullptr;
      continue;
    }
    if (first || row.d_value > scan.sup_d) {
      scan.sup_d = row.d_value;
      scan.sup_n = row.n;
      first = false;
    }
    if (prev) scan.differences.push_back(row.d_value - prev->d_value);
    prev = &row;
  }
  scan.knee = monotone_tail_start(scan.differences);
  return scan;
}

} // namespace isoball
