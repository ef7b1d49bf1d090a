#include <cmath>
#include <stdexcept>
#include <sstream>

#include "doctest.h"
#include "isoball/geometry.hpp"
#include "isoball/lens.hpp"
#include "isoball/variational.hpp"
#include "oracles.hpp"

using namespace isoball;
using doctest::Approx;

namespace {

Profile full_clip(int n, int m) {
  const BallGeometry U = BallGeometry::unit_ball(n);
  auto grid = uniform_grid(U.radius(), m);
  std::vector<double> r(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    r[i] = std::sqrt(std::max(0.0, U.radius() * U.radius() - grid[i] * grid[i]));
  return Profile::from_radii(U, grid, r);
}

}  // namespace

TEST_SUITE("variational") {
  TEST_CASE("profile_volume") {
    CHECK(std::fabs(profile_volume(full_clip(3, 2000)) - 1.0) < 1e-6);
    const BallGeometry U = BallGeometry::unit_ball(3);
    const auto grid = uniform_grid(U.radius(), 2000);
    CHECK(std::fabs(profile_volume(lens_profile(solve_rho_for_volume(3, 0.2), grid)) - 0.2) < 1e-6);
    CHECK(profile_volume(Profile::from_radii(U, grid, std::vector<double>(grid.size(), 0.0))) == 0.0);
  }

  TEST_CASE("profile_free_area") {
    const BallGeometry U = BallGeometry::unit_ball(3);
    const auto grid = uniform_grid(U.radius(), 4000);
    const LensShape l = solve_rho_for_volume(3, 0.1);
    CHECK(profile_free_area(lens_profile(l, grid)) == Approx(lens_free_area(l)).epsilon(1e-3));
    CHECK(profile_free_area(full_clip(3, 4000)) == 0.0);
    CHECK(profile_free_area(flat_cut_profile(3, 0.5, grid)) == Approx(flat_cut_free_area(3, 0.5)).epsilon(1e-3));
  }

  TEST_CASE("gradients match finite differences") {
    const BallGeometry U = BallGeometry::unit_ball(4);
    const auto grid = uniform_grid(U.radius(), 200);
    const Profile p = lens_profile(solve_rho_for_volume(4, 0.15), grid);
    const auto ga = profile_free_area_gradient(p);
    const auto gv = profile_volume_gradient(p);
    for (std::size_t i : {std::size_t(120), std::size_t(150), std::size_t(170)}) {
      if (p.clip_mask[i] || p.radii[i] <= 0.0) continue;
      auto r = p.radii;
      const double step = 1e-7;
      r[i] += step;
      const Profile hi = Profile::from_radii(U, grid, r);
      r[i] -= 2 * step;
      const Profile lo = Profile::from_radii(U, grid, r);
      CHECK(ga[i] == Approx((profile_free_area(hi) - profile_free_area(lo)) / (2 * step)).epsilon(1e-5));
      CHECK(gv[i] == Approx((profile_volume(hi) - profile_volume(lo)) / (2 * step)).epsilon(1e-5));
    }
  }

  TEST_CASE("minimize_profile reaches the lens") {
    const auto r = minimize_profile(3, 0.1, 2000, 7);
    const double lens = lens_free_area(solve_rho_for_volume(3, 0.1));
    CHECK(r.converged);
    CHECK(std::fabs(r.area - lens) / lens <= 5e-3);
    CHECK(std::fabs(profile_volume(r.profile) - 0.1) < 1e-6);
  }

  TEST_CASE("planar optimum is a circular arc") {
    const auto r = minimize_profile(2, 0.25, 2000, 3);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.profile.size(); ++i)
      if (!r.profile.clip_mask[i] && r.profile.radii[i] > 0.0) {
        x.push_back(r.profile.grid[i]);
        y.push_back(r.profile.radii[i]);
      }
    REQUIRE(x.size() > 10);
    CHECK(oracle::circle_fit_deviation(x, y) <= 1e-3 * r.profile.ambient.radius());
  }

  TEST_CASE("near one half the optimum approaches the flat cut") {
    const auto r = minimize_profile(3, 0.499, 1000, 1);
    CHECK(r.area == Approx(flat_cut_free_area(3, 0.5)).epsilon(1e-2));
  }

  TEST_CASE("a wider support cannot do worse") {
    VariationalOptions narrow;
    narrow.support_lo = 0.0;
    narrow.starts = 2;
    VariationalOptions wide = narrow;
    wide.support_lo = -0.3;
    const auto a = minimize_profile(3, 0.05, 400, 1, narrow);
    const auto b = minimize_profile(3, 0.05, 400, 1, wide);
    CHECK(b.area <= a.area * (1 + 1e-9));
  }

  TEST_CASE("euler_lagrange_residual") {
    for (int n : {2, 3, 5}) {
      const BallGeometry U = BallGeometry::unit_ball(n);
      const LensShape l = solve_rho_for_volume(n, 0.15);
      const Profile p = lens_profile(l, uniform_grid(U.radius(), 4000));
      CAPTURE(n);
      CHECK(euler_lagrange_residual(p, (n - 1) / l.rho) <= 1e-3);
    }
    const BallGeometry U = BallGeometry::unit_ball(3);
    const auto grid = uniform_grid(U.radius(), 1000);
    std::vector<double> cyl(grid.size(), 0.0), cone(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::fabs(grid[i]) <= 0.4) {
        cyl[i] = 0.2;
        cone[i] = 0.1 + 0.2 * (grid[i] + 0.4);
      }
    CHECK(euler_lagrange_residual(Profile::from_radii(U, grid, cyl), 1.0 / 0.2) <= 1e-6);
    const Profile cp = Profile::from_radii(U, grid, cone);
    for (double lambda : {0.0, 3.0, 5.0, 8.0}) CHECK(euler_lagrange_residual(cp, lambda) >= 0.1);
  }

  TEST_CASE("profile csv round trip") {
    const BallGeometry U = BallGeometry::unit_ball(3);
    const Profile p = lens_profile(solve_rho_for_volume(3, 0.2), uniform_grid(U.radius(), 300));
    std::stringstream ss;
    write_profile_csv(ss, p);
    const Profile q = read_profile_csv(ss, U);
    CHECK(q.radii == p.radii);
    CHECK(q.grid == p.grid);
  }

  TEST_CASE("argument validation") {
    CHECK_THROWS_AS(minimize_profile(3, 0.1, 50, 1), std::domain_error);
    CHECK_THROWS_AS(minimize_profile(3, 0.0, 500, 1), std::domain_error);
  }
}
