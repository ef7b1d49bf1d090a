#include "isoball/lemma_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "isoball/errors.hpp"
#include "isoball/lens.hpp"
#include "isoball/parallel.hpp"
#include "isoball/symmetry.hpp"

namespace isoball {

namespace {

constexpr double kPi = std::numbers::pi;
// Generic azimuths, away from the lattice symmetry planes.
constexpr double kAzimuths[] = {0.37, 1.1, 2.0};

double rel_dev(double value, double target) { return std::fabs(value / target - 1.0); }

struct Recorder {
  LemmaReport& report;

  void check(std::string lemma, std::string name, double measured, double tolerance, std::string note = {}) {
    LemmaCheck c;
    c.lemma = std::move(lemma);
    c.name = std::move(name);
    c.measured = measured;
    c.tolerance = tolerance;
    c.passed = std::isfinite(measured) && measured <= tolerance;
    c.note = std::move(note);
    report.checks.push_back(std::move(c));
  }

  void skip(std::string lemma, std::string name, double tolerance, std::string note) {
    LemmaCheck c;
    c.lemma = std::move(lemma);
    c.name = std::move(name);
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.tolerance = tolerance;
    c.skipped = true;
    c.note = std::move(note);
    report.checks.push_back(std::move(c));
  }

  void fail(std::string lemma, std::string name, double tolerance, std::string note) {
    LemmaCheck c;
    c.lemma = std::move(lemma);
    c.name = std::move(name);
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.tolerance = tolerance;
    c.note = std::move(note);
    report.checks.push_back(std::move(c));
  }

  // Runs fn; a NumericError becomes a failed check carrying its message.
  template <class Fn>
  void guarded(const std::string& lemma, const std::string& name, double tolerance, Fn&& fn) {
    try {
      fn();
    } catch (const ResolutionError& e) {
      skip(lemma, name, tolerance, std::string("resolution: ") + e.what());
    } catch (const std::exception& e) {
      fail(lemma, name, tolerance, e.what());
    }
  }
};

Vec3 random_direction(std::mt19937_64& rng) {
  for (;;) {
    Vec3 v;
    for (double& x : v) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (r2 > 1e-4 && r2 <= 1.0) return v;
  }
}

void voxel_checks(const LemmaSuiteConfig& cfg, double h, Recorder& rec) {
  const double R = BallGeometry::unit_ball(3).radius();
  const Vec3 ez{0.0, 0.0, 1.0};
  const LensShape lens = solve_rho_for_volume(3, cfg.lens_eps);
  const VoxelBody vlens = voxel_lens(lens, h);

  rec.guarded("div2", "axis_plane_halving_lens", 0.02, [&] {
    double worst = 0.0;
    for (double phi : kAzimuths) {
      const auto m = split_measures(vlens, axis_plane(ez, phi));
      worst = std::max(worst, rel_dev(m.vol_plus / (m.vol_plus + m.vol_minus), 0.5));
      worst = std::max(worst, rel_dev(m.free_plus / (m.free_plus + m.free_minus), 0.5));
    }
    rec.check("div2", "axis_plane_halving_lens", worst, 0.02, "max relative deviation of both ratios from 1/2");
  });

  rec.guarded("div2", "full_ball_halving", 0.02, [&] {
    const VoxelBody U = voxel_ball(R, h);
    const auto m = split_measures(U, CentralPlane::from_normal(Vec3{0.3, -0.5, 0.8}));
    rec.check("div2", "full_ball_halving", rel_dev(m.vol_plus / (m.vol_plus + m.vol_minus), 0.5), 0.02);
    rec.check("div2", "full_ball_free_measure", m.free_plus + m.free_minus, 0.0, "whole boundary lies on the sphere");
  });

  rec.guarded("div2", "halving_plane_symmetric_lens", 1e-3, [&] {
    const CentralPlane p = find_halving_plane(vlens, Vec3{1.0, 0.0, 0.0});
    // The symmetry plane containing e_x and the axis has normal e_y.
    const double angle = std::asin(std::min(1.0, std::hypot(p.normal()[0], p.normal()[2])));
    rec.check("div2", "halving_plane_symmetric_lens", angle, 1e-3, "angle to the mirror plane, rad");
  });

  // Seeded random bodies: halving search and reflect_glue.
  {
    const int count = cfg.random_bodies;
    std::vector<double> imbalance(count), volume_err(count), sym_err(count);
    std::vector<std::string> errors(count);
    parallel_for(
        static_cast<std::size_t>(count),
        [&](std::size_t b) {
          try {
            const std::uint64_t seed = cfg.seed * 1000003ULL + b;
            std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
            const VoxelBody body = random_blob(seed, h);
            const CentralPlane p = find_halving_plane(body, random_direction(rng));
            const auto m = split_measures(body, p);
            const double S = boundary_area(body);
            imbalance[b] = std::fabs(m.vol_plus - m.vol_minus) / (2.0 * h * S);
            const VoxelBody glued = reflect_glue(body, p, b % 2 == 0 ? Side::plus : Side::minus);
            volume_err[b] = std::fabs(glued.volume() - body.volume()) / (3.0 * h * S);
            sym_err[b] = symmetry_defect(glued, p) / h;
          } catch (const std::exception& e) {
            errors[b] = e.what();
          }
        },
        cfg.threads);
    std::string first_error;
    for (const auto& e : errors)
      if (!e.empty() && first_error.empty()) first_error = e;
    if (!first_error.empty()) {
      rec.fail("div2", "halving_plane_random_bodies", 1.0, first_error);
      rec.fail("symmetrization", "reflect_glue_volume_random_bodies", 1.0, first_error);
      rec.fail("symmetrization", "reflect_glue_mirror_symmetry_random_bodies", 1.0, first_error);
    } else {
      const std::string n = std::to_string(count) + " seeded bodies";
      rec.check("div2", "halving_plane_random_bodies", *std::max_element(imbalance.begin(), imbalance.end()), 1.0,
                n + "; |vol+ - vol-| / (2 h S)");
      rec.check("symmetrization", "reflect_glue_volume_random_bodies",
                *std::max_element(volume_err.begin(), volume_err.end()), 1.0, n + "; |dV| / (3 h S)");
      rec.check("symmetrization", "reflect_glue_mirror_symmetry_random_bodies",
                *std::max_element(sym_err.begin(), sym_err.end()), 1.0, n + "; vol(A xor mirror A) / (S h)");
    }
  }

  rec.guarded("symmetrization", "reflect_glue_lens_free_measure", 1.0, [&] {
    const CentralPlane p = axis_plane(ez, kAzimuths[0]);
    const auto m = split_measures(vlens, p);
    const Side side = m.free_plus <= m.free_minus ? Side::plus : Side::minus;
    const VoxelBody glued = reflect_glue(vlens, p, side);
    const double slack = 3.0 * h * 2.0 * kPi * lens.rim_radius();
    rec.check("symmetrization", "reflect_glue_lens_free_measure", (free_area(glued) - free_area(vlens)) / slack, 1.0,
              "(free out - free in) / (3 h rim length)");
    rec.check("symmetrization", "reflect_glue_lens_idempotent", difference_length(glued, vlens) / h, 1.0,
              "vol(out xor in) / (S h)");
  });

  rec.guarded("perp", "incidence_lens_axis_planes", 5e-3, [&] {
    double worst = 0.0;
    for (double phi : kAzimuths) worst = std::max(worst, perpendicular_incidence(vlens, axis_plane(ez, phi)));
    rec.check("perp", "incidence_lens_axis_planes", worst, 5e-3);
  });

  rec.guarded("perp", "incidence_sphere", 5e-3, [&] {
    const VoxelBody ball = voxel_ball(0.5 * R, h);
    double worst = 0.0;
    for (const Vec3& nrm : {Vec3{0.3, -0.5, 0.8}, Vec3{0.9, 0.2, -0.1}, Vec3{-0.4, 0.7, 0.6}})
      worst = std::max(worst, perpendicular_incidence(ball, CentralPlane::from_normal(nrm)));
    rec.check("perp", "incidence_sphere", worst, 5e-3);
  });

  rec.guarded("perp", "incidence_tilted_guard", 0.1, [&] {
    const double tilt = 10.0 * kPi / 180.0;
    const double measured =
        perpendicular_incidence(vlens, CentralPlane::from_normal(Vec3{std::cos(tilt), 0.0, std::sin(tilt)}));
    const double expected = lens.center_dist * std::sin(tilt) / lens.rho;
    rec.check("perp", "incidence_tilted_guard", rel_dev(measured, expected), 0.1,
              "plane tilted 10 deg off the axis; expected defect d sin(10 deg) / rho = " + std::to_string(expected));
  });

  rec.guarded("quarters", "quarters_lens", 0.03, [&] {
    const auto parts = quarters_check(vlens, axis_plane(ez, kAzimuths[0]), axis_plane(ez, kAzimuths[0] + 0.5 * kPi));
    double V = 0.0, F = 0.0;
    for (const auto& q : parts) {
      V += q.volume;
      F += q.free_measure;
    }
    double worst = 0.0;
    for (const auto& q : parts) {
      worst = std::max(worst, rel_dev(q.volume, 0.25 * V));
      worst = std::max(worst, rel_dev(q.free_measure, 0.25 * F));
    }
    rec.check("quarters", "quarters_lens", worst, 0.03, "max relative deviation from 1/4");
  });

  for (int k = 1; k <= 5; ++k) {
    const std::string name = "dyadic_sector_k" + std::to_string(k);
    rec.guarded("dyadic", name, 0.05, [&] {
      const auto f = dyadic_sector_check(vlens, k, 0.3);
      const double target = std::ldexp(1.0, -(k + 1));
      rec.check("dyadic", name, std::max(rel_dev(f.vol_fraction, target), rel_dev(f.free_fraction, target)), 0.05,
                "target 2^-" + std::to_string(k + 1));
    });
  }

  rec.guarded("dyadic", "dyadic_copy_rebuild_k3", 0.05, [&] {
    const VoxelBody total = unfold_sector(vlens, 3, 0.3);
    const double dv = rel_dev(total.volume(), vlens.volume());
    const double df = rel_dev(free_area(total), free_area(vlens));
    rec.check("dyadic", "dyadic_copy_rebuild_k3", std::max(dv, df), 0.05, "16 reflected copies of one sector");
  });
}

void polygon_checks(const LemmaSuiteConfig& cfg, double h2, Recorder& rec) {
  const LensShape lens = solve_rho_for_volume(2, cfg.lens_eps);
  const PolygonBody poly = polygon_lens(lens, h2);
  const CentralPlane axis_line = CentralPlane::from_normal(Vec2{0.0, 1.0});

  rec.guarded("div2", "planar_axis_line_halving", 0.02, [&] {
    const auto m = split_measures(poly, axis_line);
    const double worst = std::max(rel_dev(m.vol_plus / (m.vol_plus + m.vol_minus), 0.5),
                                  rel_dev(m.free_plus / (m.free_plus + m.free_minus), 0.5));
    rec.check("div2", "planar_axis_line_halving", worst, 0.02);
  });

  rec.guarded("symmetrization", "planar_reflect_glue_volume", 1.0, [&] {
    const CentralPlane p = find_halving_plane(poly);
    const PolygonBody glued = reflect_glue(poly, p, Side::plus);
    rec.check("symmetrization", "planar_reflect_glue_volume",
              std::fabs(glued.area() - poly.area()) / (3.0 * h2 * poly.perimeter()), 1.0, "|dA| / (3 h P)");
  });

  rec.guarded("perp", "planar_incidence_lens", 5e-3, [&] {
    rec.check("perp", "planar_incidence_lens", perpendicular_incidence(poly, axis_line), 5e-3);
    const double tilt = 10.0 * kPi / 180.0;
    const double measured = perpendicular_incidence(poly, CentralPlane::from_normal(Vec2{-std::sin(tilt), std::cos(tilt)}));
    const double expected = lens.center_dist * std::sin(tilt) / lens.rho;
    rec.check("perp", "planar_incidence_tilted_guard", rel_dev(measured, expected), 0.1,
              "expected d sin(10 deg) / rho = " + std::to_string(expected));
  });
}

} // namespace

bool LemmaReport::all_passed() const { return first_failure() == nullptr; }

const LemmaCheck* LemmaReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed && !c.skipped) return &c;
  return nullptr;
}

LemmaReport run_lemma_suite(const LemmaSuiteConfig& cfg) {
  if (!(cfg.resolution_divisor >= 4.0 && cfg.resolution_divisor <= 2000.0))
    throw std::domain_error("resolution divisor must lie in [4, 2000] (h = R/divisor)");
  if (cfg.random_bodies < 1) throw std::domain_error("random_bodies must be >= 1");
  if (!(cfg.lens_eps > 0.0 && cfg.lens_eps < 0.5)) throw std::domain_error("lens_eps must lie in (0, 1/2)");
  LemmaReport report;
  const double R3 = BallGeometry::unit_ball(3).radius();
  report.h = R3 / cfg.resolution_divisor;
  Recorder rec{report};
  voxel_checks(cfg, report.h, rec);
  polygon_checks(cfg, BallGeometry::unit_ball(2).radius() / cfg.resolution_divisor, rec);
  return report;
}

} // namespace isoball
