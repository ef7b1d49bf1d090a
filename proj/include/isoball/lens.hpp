#pragma once

#include <span>

#include "isoball/geometry.hpp"

namespace isoball {

/// U ∩ B where U is the unit-volume ball centred at the origin and B is a
/// second ball of radius rho whose boundary meets ∂U at right angles.
///
/// B is centred at distance center_dist on the +e_0 axis. The radical plane
/// x_0 = plane_offset_u splits the lens into a cap of U (colatitude theta_u)
/// and a cap of B facing the origin (colatitude theta_b).
///
/// The half-ball cut by the central hyperplane is the limit rho -> infinity;
/// it is stored with flat_cut = true, theta_u = pi/2, and rho, center_dist,
/// plane_offset_b and theta_b set to 0 (they have no finite value).
struct LensShape {
  BallGeometry ambient;
  double rho = 0.0;
  double center_dist = 0.0;
  double plane_offset_u = 0.0;
  double plane_offset_b = 0.0;
  double theta_u = 0.0;
  double theta_b = 0.0;
  bool flat_cut = false;

  /// Radius of the (n-2)-sphere where ∂U and ∂B meet.
  double rim_radius() const;
  bool contains(std::span<const double> point) const;
};

/// A second ball not constrained to meet ∂U orthogonally.
struct GeneralCap {
  BallGeometry ambient;
  double rho;
  double center_dist;

  GeneralCap(BallGeometry ambient, double rho, double center_dist);

  double plane_offset_u() const;
  double rim_radius() const;
  double theta_u() const;
  double theta_b() const;
  double volume() const;
  double free_area() const;
};

LensShape lens_from_rho(int n, double rho);
LensShape flat_cut_lens(int n);

double lens_volume(const LensShape& shape);
double lens_free_area(const LensShape& shape);

/// Orthogonal lens of volume eps. Bisection in log(rho); returns the flat-cut
/// member when 1/2 - eps <= tol.
LensShape solve_rho_for_volume(int n, double eps, double tol = 1e-12);

/// Free area of the flat hyperplane cut that removes volume eps from U.
double flat_cut_free_area(int n, double eps);

/// Colatitude of the U-cap of volume eps, for eps in [0, 1/2].
double cap_colatitude_for_volume(const BallGeometry& ball, double eps);

/// For a fixed centre distance d, the free area of the (generally
/// non-orthogonal) lens U ∩ B(d e_0, rho) whose volume is eps.
/// Throws NoSolutionError when no rho gives volume eps at this d.
double general_cap_free_area_at_volume(int n, double eps, double d);

/// Radius rho solving volume(U ∩ B(d e_0, rho)) = eps.
double general_cap_rho_at_volume(int n, double eps, double d);

/// |cos| of the angle between the outward normals of ∂U and ∂B at a rim
/// point; zero for an orthogonal lens.
double rim_normal_cosine(const BallGeometry& ambient, double rho, double center_dist);

} // namespace isoball
