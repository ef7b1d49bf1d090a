#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isoball/geometry.hpp"
#include "isoball/lens.hpp"

namespace isoball {

/// Relative clip tolerance: a node is clipped when r >= bound - kClipTolerance * R.
inline constexpr double kClipTolerance = 1e-9;

/// A body of revolution about the x_0 axis inside U, sampled on a grid.
///
/// radii[i] is the radius of the (n-1)-ball cross-section at axis coordinate
/// grid[i]. A node is clipped when it sits on ∂U. If an end node is clipped
/// and the grid stops short of the pole, the body continues along ∂U up to
/// the pole; that remainder is v0 and carries no free area.
struct Profile {
  BallGeometry ambient;
  std::vector<double> grid;
  std::vector<double> radii;
  std::vector<std::uint8_t> clip_mask;
  double v0 = 0.0;

  /// Validates the grid and the inside-U bound, then derives clip_mask and v0.
  static Profile from_radii(BallGeometry ambient, std::vector<double> grid, std::vector<double> radii);

  std::size_t size() const { return grid.size(); }
  /// sqrt(R^2 - x_i^2)
  double bound(std::size_t i) const;
};

/// m equal intervals on [-R, R] (m + 1 nodes, endpoints exact).
std::vector<double> uniform_grid(double radius, int m);

Profile lens_profile(const LensShape& lens, std::span<const double> grid);
/// U-cap of volume eps on the +x side, i.e. the region x >= x_c.
Profile flat_cut_profile(int n, double eps, std::span<const double> grid);

double profile_volume(const Profile& p);

/// Free lateral area of the polyline surface of revolution: each unclipped
/// segment is an exact frustum, integral of sigma_{n-2} r^{n-2} ds; segments
/// with both ends clipped contribute nothing; a nonzero unclipped end radius
/// adds a flat end disk kappa_{n-1} r^{n-1}.
double profile_free_area(const Profile& p);

/// Gradients of the two discretized functionals w.r.t. the radii, with the
/// clip mask held fixed.
std::vector<double> profile_free_area_gradient(const Profile& p);
std::vector<double> profile_volume_gradient(const Profile& p);

/// max |H - lambda| over interior nodes (node and both neighbours unclipped,
/// all three radii > 0), where H is the sum of principal curvatures of the
/// revolution hypersurface. The meridian curvature and normal come from the
/// circle through three consecutive profile points, a second-order stencil
/// that stays accurate where r'(x) is unbounded. +inf without such a node.
///
/// edge_layer > 0 additionally drops the nodes within that many positions of
/// the end of an interior run (the axis tip, the clip junction). On an
/// optimized profile the tip can only sit on a grid node, which leaves an
/// O(1) curvature defect in the first few nodes that does not shrink with m.
double euler_lagrange_residual(const Profile& p, double lambda, int edge_layer = 0);

struct VariationalOptions {
  int starts = 5;
  /// Nodes outside [support_lo, support_hi] are held at r = 0.
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  double volume_tol = 1e-8;
  int max_outer = 40;
  int max_inner = 200;
  int threads = 0;
};

struct StartReport {
  std::string label;
  double area = 0.0;
  double constraint_violation = 0.0;
  bool converged = false;
};

struct VariationalResult {
  Profile profile;
  double area = 0.0;
  /// Lagrange multiplier of the volume constraint (dA/dV at the optimum).
  double multiplier = 0.0;
  double constraint_violation = 0.0;
  bool converged = false;
  std::string warning;
  std::size_t best_start = 0;
  std::vector<StartReport> starts;
};

/// Locally minimizes profile_free_area subject to profile_volume = eps and
/// 0 <= r_i <= bound_i. Augmented Lagrangian outer loop; the inner loop is a
/// two-metric projected Newton method (tridiagonal Hessian plus the rank-one
/// penalty term). Starts: the orthogonal lens, the flat cut, and seeded
/// perturbations of the lens. Returns the best feasible local optimum.
VariationalResult minimize_profile(int n, double eps, int m, std::uint64_t seed,
                                   const VariationalOptions& options = {});

void write_profile_csv(std::ostream& os, const Profile& p);
Profile read_profile_csv(std::istream& is, BallGeometry ambient);

} // namespace isoball
