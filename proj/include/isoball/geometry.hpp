#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace isoball {

/// An n-dimensional Euclidean ball centred at the origin.
///
/// The dimension is at least 2 everywhere in the library: the constructions
/// downstream need a normal direction and a rotation axis.
class BallGeometry {
public:
  BallGeometry(int n, double radius);

  /// The ball of volume exactly 1 in dimension n.
  static BallGeometry unit_ball(int n);

  int n() const { return n_; }
  double radius() const { return radius_; }
  double volume() const { return volume_; }

private:
  BallGeometry(int n, double radius, double volume) : n_(n), radius_(radius), volume_(volume) {}

  int n_;
  double radius_;
  double volume_;
};

/// A spherical cap of a ball, parametrized by its colatitude: the angle at the
/// centre between the pole and the rim, in [0, pi].
class CapSpec {
public:
  CapSpec(BallGeometry geometry, double colatitude);

  const BallGeometry& geometry() const { return geometry_; }
  double colatitude() const { return colatitude_; }

private:
  BallGeometry geometry_;
  double colatitude_;
};

/// log Gamma(x) for x > 0. Reentrant (does not touch signgam).
double log_gamma(double x);

/// log of the volume of the unit n-ball, log(pi^{n/2} / Gamma(n/2 + 1)).
double log_unit_ball_volume(int n);
double unit_ball_volume(int n);

double ball_volume(int n, double radius);

/// Radius R_n of the n-ball of unit volume.
double unit_volume_radius(int n);

/// (n-1)-dimensional area of the sphere bounding the n-ball of the given radius.
double sphere_area(int n, double radius);

/// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double x, double a, double b);

/// log I_x(a, b) with y = 1 - x passed separately so callers that know both
/// (e.g. sin^2 and cos^2 of an angle) avoid cancellation. Returns -inf at x = 0.
double log_reg_inc_beta(double x, double y, double a, double b);

double cap_volume(const CapSpec& spec);

/// Lateral ((n-1)-dimensional) area of the spherical cap.
double cap_area(const CapSpec& spec);

/// log of cap_volume / cap_area for colatitude <= pi/2; stays finite when the
/// ball radius is huge and the cap tiny.
double log_cap_volume(int n, double radius, double colatitude);
double log_cap_area(int n, double radius, double colatitude);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t hits = 0;
  std::int64_t samples = 0;
};

using PointPredicate = std::function<bool(std::span<const double>)>;

/// Hit-or-miss Monte Carlo estimate of vol({x in U : indicator(x)}).
///
/// Samples are drawn uniformly in U (Gaussian direction, radius R*u^{1/n}).
/// The budget is split into fixed-size chunks, each with its own seeded
/// stream, so the result depends only on (samples, seed) and never on the
/// number of worker threads. `threads <= 0` means default_threads().
McEstimate mc_volume_estimate(const PointPredicate& indicator, const BallGeometry& geometry,
                              std::int64_t samples, std::uint64_t seed, int threads = 0);

} // namespace isoball
