#include "isoball/lens.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "isoball/errors.hpp"

namespace isoball {

namespace {

constexpr double kPi = std::numbers::pi;

void require_n(int n) {
  if (n < 2) throw std::domain_error("n must be >= 2");
}

// Circumradius-style rim radius of two spheres (radii R, rho, centres d apart),
// Heron form to stay accurate when the intersection is nearly tangent.
double heron_rim(double R, double rho, double d) {
  const double p = (d + R + rho) * (d + R - rho) * (d - R + rho) * (-d + R + rho);
  return p > 0.0 ? std::sqrt(p) / (2.0 * d) : 0.0;
}

} // namespace

double LensShape::rim_radius() const {
  if (flat_cut) return ambient.radius();
  return ambient.radius() * rho / center_dist;
}

bool LensShape::contains(std::span<const double> point) const {
  const double R = ambient.radius();
  double r2 = 0.0;
  for (double v : point) r2 += v * v;
  if (r2 > R * R) return false;
  if (flat_cut) return point[0] >= 0.0;
  // |p - d e0|^2 <= rho^2  <=>  p0 >= (|p|^2 + R^2) / (2d), using d^2 = R^2 + rho^2.
  return point[0] >= (r2 + R * R) / (2.0 * center_dist);
}

GeneralCap::GeneralCap(BallGeometry ambient_, double rho_, double center_dist_)
    : ambient(ambient_), rho(rho_), center_dist(center_dist_) {
  const double R = ambient.radius();
  if (!(rho > 0.0)) throw std::domain_error("GeneralCap: rho must be > 0");
  if (!(center_dist > std::fabs(R - rho) && center_dist < R + rho))
    throw std::domain_error("GeneralCap: balls must intersect properly (|R - rho| < d < R + rho)");
}

double GeneralCap::plane_offset_u() const {
  const double R = ambient.radius();
  return (center_dist * center_dist + R * R - rho * rho) / (2.0 * center_dist);
}

double GeneralCap::rim_radius() const { return heron_rim(ambient.radius(), rho, center_dist); }

double GeneralCap::theta_u() const { return std::atan2(rim_radius(), plane_offset_u()); }

double GeneralCap::theta_b() const { return std::atan2(rim_radius(), center_dist - plane_offset_u()); }

double GeneralCap::volume() const {
  const int n = ambient.n();
  return cap_volume(CapSpec(ambient, theta_u())) + cap_volume(CapSpec(BallGeometry(n, rho), theta_b()));
}

double GeneralCap::free_area() const {
  return cap_area(CapSpec(BallGeometry(ambient.n(), rho), theta_b()));
}

LensShape lens_from_rho(int n, double rho) {
  require_n(n);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::domain_error("lens_from_rho: rho must be > 0");
  const auto U = BallGeometry::unit_ball(n);
  const double R = U.radius();
  LensShape s{U};
  s.rho = rho;
  s.center_dist = std::hypot(R, rho);
  s.plane_offset_u = R * (R / s.center_dist);
  s.plane_offset_b = rho * (rho / s.center_dist);
  s.theta_u = std::atan2(rho, R);
  s.theta_b = std::atan2(R, rho);
  return s;
}

LensShape flat_cut_lens(int n) {
  require_n(n);
  LensShape s{BallGeometry::unit_ball(n)};
  s.theta_u = 0.5 * kPi;
  s.flat_cut = true;
  return s;
}

double lens_volume(const LensShape& shape) {
  if (shape.flat_cut) return 0.5;
  const int n = shape.ambient.n();
  return cap_volume(CapSpec(shape.ambient, shape.theta_u)) + std::exp(log_cap_volume(n, shape.rho, shape.theta_b));
}

double lens_free_area(const LensShape& shape) {
  const int n = shape.ambient.n();
  if (shape.flat_cut) return std::exp(log_unit_ball_volume(n - 1) + (n - 1) * std::log(shape.ambient.radius()));
  return std::exp(log_cap_area(n, shape.rho, shape.theta_b));
}

LensShape solve_rho_for_volume(int n, double eps, double tol) {
  require_n(n);
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("solve_rho_for_volume: eps must lie in (0, 1/2)");
  if (!(tol > 0.0)) throw std::domain_error("solve_rho_for_volume: tol must be > 0");
  if (0.5 - eps <= tol) return flat_cut_lens(n);

  const double R = unit_volume_radius(n);
  auto volume_at = [n](double log_rho) { return lens_volume(lens_from_rho(n, std::exp(log_rho))); };

  double lo = std::log(R);
  double hi = lo;
  double v_lo = volume_at(lo);
  double v_hi = v_lo;
  while (v_lo > eps) {
    hi = lo;
    v_hi = v_lo;
    lo -= std::log(4.0);
    if (lo < -650.0) throw ConvergenceError("solve_rho_for_volume: could not bracket eps from below");
    v_lo = volume_at(lo);
  }
  while (v_hi < eps) {
    lo = hi;
    v_lo = v_hi;
    hi += std::log(4.0);
    if (hi > std::log(R) + 35.0) return flat_cut_lens(n);
    v_hi = volume_at(hi);
  }

  constexpr int max_iter = 200;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = volume_at(mid);
    if (v == eps) {
      lo = hi = mid;
      v_lo = v_hi = v;
      break;
    }
    if (v < eps) {
      lo = mid;
      v_lo = v;
    } else {
      hi = mid;
      v_hi = v;
    }
  }
  const double best = (eps - v_lo) <= (v_hi - eps) ? lo : hi;
  const double err = std::min(eps - v_lo, v_hi - eps);
  if (err > tol)
    throw ConvergenceError("solve_rho_for_volume: |volume - eps| = " + std::to_string(err) +
                           " exceeds tol after bisection");
  return lens_from_rho(n, std::exp(best));
}

double cap_colatitude_for_volume(const BallGeometry& ball, double eps) {
  if (!(eps >= 0.0 && eps <= 0.5 * ball.volume()))
    throw std::domain_error("cap_colatitude_for_volume: eps must lie in [0, volume/2]");
  if (eps == 0.0) return 0.0;
  if (eps == 0.5 * ball.volume()) return 0.5 * kPi;
  double lo = 0.0;
  double hi = 0.5 * kPi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cap_volume(CapSpec(ball, mid)) < eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double flat_cut_free_area(int n, double eps) {
  require_n(n);
  if (!(eps > 0.0 && eps <= 0.5)) throw std::domain_error("flat_cut_free_area: eps must lie in (0, 1/2]");
  const auto U = BallGeometry::unit_ball(n);
  const double theta = cap_colatitude_for_volume(U, eps);
  const double rim = U.radius() * std::sin(theta);
  return std::exp(log_unit_ball_volume(n - 1) + (n - 1) * std::log(rim));
}

double general_cap_rho_at_volume(int n, double eps, double d) {
  require_n(n);
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("general_cap: eps must lie in (0, 1)");
  if (!(d > 0.0)) throw std::domain_error("general_cap: d must be > 0");
  const auto U = BallGeometry::unit_ball(n);
  const double R = U.radius();
  double lo = std::fabs(d - R);
  double hi = d + R;
  // Volume at the lower end: empty (d >= R) or B internally tangent (d < R).
  const double v_floor = d >= R ? 0.0 : ball_volume(n, R - d);
  if (eps <= v_floor)
    throw NoSolutionError("general_cap: no radius gives volume " + std::to_string(eps) +
                          " at centre distance " + std::to_string(d));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = GeneralCap(U, mid, d).volume();
    if (v < eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double general_cap_free_area_at_volume(int n, double eps, double d) {
  const double rho = general_cap_rho_at_volume(n, eps, d);
  return GeneralCap(BallGeometry::unit_ball(n), rho, d).free_area();
}

double rim_normal_cosine(const BallGeometry& ambient, double rho, double center_dist) {
  const double R = ambient.radius();
  const double a = (center_dist * center_dist + R * R - rho * rho) / (2.0 * center_dist);
  const double r = heron_rim(R, rho, center_dist);
  // Rim point p = (a, r); outward normals p/R and (p - d e0)/rho.
  const double nu[2] = {a / R, r / R};
  const double nb[2] = {(a - center_dist) / rho, r / rho};
  return std::fabs(nu[0] * nb[0] + nu[1] * nb[1]);
}

} // namespace isoball
