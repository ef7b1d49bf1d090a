#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "isoball/bound.hpp"
#include "isoball/geometry.hpp"
#include "isoball/parallel.hpp"

using namespace isoball;
using doctest::Approx;

TEST_SUITE("bound") {
  TEST_CASE("iso_profile values at one half") {
    const double half[] = {0.5};
    CHECK(iso_profile(2, half)[0].m_value == Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-13));
    const double R3 = unit_volume_radius(3);
    CHECK(iso_profile(3, half)[0].m_value == Approx(std::numbers::pi * R3 * R3).epsilon(1e-13));
  }

  TEST_CASE("iso_profile is strictly increasing on a log grid") {
    std::vector<double> grid(50);
    for (int i = 0; i < 50; ++i) grid[i] = std::exp(std::log(1e-4) + i * (std::log(0.5) - std::log(1e-4)) / 49);
    grid.back() = 0.5;
    const auto pts = iso_profile(3, grid);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      REQUIRE(pts[i].ok());
      CHECK(pts[i].m_value > pts[i - 1].m_value);
    }
  }

  TEST_CASE("iso_profile isolates failures per point") {
    const double grid[] = {0.1, 0.7, 0.2};
    const auto pts = iso_profile(3, grid);
    CHECK(pts[0].ok());
    CHECK_FALSE(pts[1].ok());
    CHECK(std::isnan(pts[1].m_value));
    CHECK(pts[2].ok());
  }

  TEST_CASE("distance_bound near one half and at one half") {
    CHECK(distance_bound(4, 0.5) == 0.0);
    const double d = distance_bound(4, 0.4999);
    CHECK(d > 0.0);
    CHECK(d < 1e-3);
  }

  TEST_CASE("distance_bound against a dense midpoint rule") {
    const int N = 1000000;
    const double a = 0.1, b = 0.5, step = (b - a) / N;
    const int workers = default_threads();
    std::vector<double> partial(workers, 0.0);
    parallel_for(workers, [&](std::size_t w) {
      double s = 0.0;
      for (int i = static_cast<int>(w); i < N; i += workers) s += 1.0 / iso_value(2, a + (i + 0.5) * step);
      partial[w] = s;
    });
    double sum = 0.0;
    for (double s : partial) sum += s;
    CHECK(std::fabs(distance_bound(2, 0.1) - 2.0 * step * sum) < 1e-5);
  }

  TEST_CASE("growth ODE agrees with the quadrature") {
    for (int n : {2, 7, 30})
      for (double eps : {0.02, 0.2}) {
        CAPTURE(n);
        CAPTURE(eps);
        CHECK(std::fabs(2.0 * growth_ode(n, eps).expansion_time - distance_bound(n, eps)) <= 1e-4);
      }
    CHECK(growth_ode(3, 0.5).expansion_time == 0.0);
  }

  TEST_CASE("growth trajectory is increasing") {
    const auto g = growth_ode(5, 0.01);
    REQUIRE(g.trajectory.size() > 2);
    for (std::size_t i = 1; i < g.trajectory.size(); ++i) {
      CHECK(g.trajectory[i].t > g.trajectory[i - 1].t);
      CHECK(g.trajectory[i].y > g.trajectory[i - 1].y);
    }
  }

  TEST_CASE("dimension_scan is deterministic") {
    const int ns[] = {3, 3, 3};
    const auto s = dimension_scan(0.1, ns);
    CHECK(s.rows[0].d_value == s.rows[1].d_value);
    CHECK(s.rows[1].d_value == s.rows[2].d_value);
  }

  TEST_CASE("dimension_scan near one half") {
    std::vector<int> ns;
    for (int n = 2; n <= 12; ++n) ns.push_back(n);
    const auto s = dimension_scan(0.49, ns);
    for (const auto& r : s.rows) {
      CHECK(r.d_value > 0.0);
      CHECK(r.d_value < 0.05);
    }
    REQUIRE(s.knee);
  }

  TEST_CASE("dimension_scan at eps = 0.01") {
    std::vector<int> ns;
    for (int n = 2; n <= 100; ++n) ns.push_back(n);
    const auto s = dimension_scan(0.01, ns);
    REQUIRE(s.rows.size() == 99);
    for (const auto& r : s.rows) REQUIRE(r.ok());
    REQUIRE(s.knee);
    // beyond the knee the differences fall under 1e-3 and stay there
    std::size_t below = s.differences.size();
    while (below > *s.knee && std::fabs(s.differences[below - 1]) < 1e-3) --below;
    CHECK(below < s.differences.size());
    MESSAGE("knee at n = ", s.rows[*s.knee].n, ", |dD| < 1e-3 from n = ", s.rows[below].n);
    CHECK(std::isfinite(s.sup_d));
  }

  TEST_CASE("monotone_tail_start") {
    const double a[] = {1.0, -3.0, 2.0, 1.0, -0.5, 0.1};
    CHECK(monotone_tail_start(a) == std::optional<std::size_t>(1));
    const double b[] = {1.0, 2.0};
    CHECK(monotone_tail_start(b) == std::optional<std::size_t>(1));
    CHECK_FALSE(monotone_tail_start(std::span<const double>{}).has_value());
  }

  TEST_CASE("domain checks") {
    CHECK_THROWS_AS(distance_bound(3, 0.0), std::domain_error);
    CHECK_THROWS_AS(distance_bound(1, 0.1), std::domain_error);
    CHECK_THROWS_AS(iso_value(3, 0.6), std::domain_error);
  }
}
