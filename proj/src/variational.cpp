#include "isoball/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "isoball/errors.hpp"
#include "isoball/parallel.hpp"

namespace isoball {

namespace {

constexpr double kPi = std::numbers::pi;

// Frustum between radii a and b over an axis step dx:
//   F = kappa_{n-1} * L * P(a, b),  L = hypot(dx, b - a),
//   P = sum_{k=0}^{n-2} a^k b^{n-2-k}
// which is the exact integral of sigma_{n-2} r^{n-2} ds along the segment.
struct SegmentTerms {
  double f = 0.0;
  double fa = 0.0, fb = 0.0;
  double faa = 0.0, fab = 0.0, fbb = 0.0;
};

SegmentTerms frustum(int n, double kappa, double dx, double a, double b, bool want_hessian) {
  const int p = n - 2;
  double pa[64], pb[64];
  std::vector<double> heap_a, heap_b;
  double* ap = pa;
  double* bp = pb;
  if (p + 1 > 64) {
    heap_a.resize(p + 1);
    heap_b.resize(p + 1);
    ap = heap_a.data();
    bp = heap_b.data();
  }
  ap[0] = bp[0] = 1.0;
  for (int k = 1; k <= p; ++k) {
    ap[k] = ap[k - 1] * a;
    bp[k] = bp[k - 1] * b;
  }
  double P = 0.0, Pa = 0.0, Pb = 0.0, Paa = 0.0, Pab = 0.0, Pbb = 0.0;
  for (int k = 0; k <= p; ++k) {
    P += ap[k] * bp[p - k];
    if (k >= 1) Pa += k * ap[k - 1] * bp[p - k];
    if (k <= p - 1) Pb += (p - k) * ap[k] * bp[p - k - 1];
    if (want_hessian) {
      if (k >= 2) Paa += k * (k - 1.0) * ap[k - 2] * bp[p - k];
      if (k >= 1 && k <= p - 1) Pab += k * (p - k) * ap[k - 1] * bp[p - k - 1];
      if (k <= p - 2) Pbb += (p - k) * (p - k - 1.0) * ap[k] * bp[p - k - 2];
    }
  }
  const double diff = b - a;
  const double L = std::hypot(dx, diff);
  const double La = -diff / L;
  const double Lb = diff / L;
  SegmentTerms t;
  t.f = kappa * L * P;
  t.fa = kappa * (La * P + L * Pa);
  t.fb = kappa * (Lb * P + L * Pb);
  if (want_hessian) {
    const double L2 = dx * dx / (L * L * L);
    t.faa = kappa * (L2 * P + 2.0 * La * Pa + L * Paa);
    t.fab = kappa * (-L2 * P + La * Pb + Lb * Pa + L * Pab);
    t.fbb = kappa * (L2 * P + 2.0 * Lb * Pb + L * Pbb);
  }
  return t;
}

bool segment_is_free(std::span<const std::uint8_t> clipped, std::span<const double> r, std::size_t i) {
  if (clipped[i] && clipped[i + 1]) return false;
  // A zero-width stretch has no boundary (matters for n = 2, where P == 1).
  if (r[i] == 0.0 && r[i + 1] == 0.0) return false;
  return true;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double power(double r, int k) { return k == 0 ? 1.0 : std::pow(r, k); }

struct Evaluation {
  double area = 0.0;
  double volume = 0.0;
};

// Discretized problem on a fixed grid; the ambient v0 is zero because the
// optimizer always works on the full [-R, R] grid (end bounds are 0).
struct Discretization {
  int n;
  double R;
  double kappa;  // kappa_{n-1}
  std::vector<double> grid, ub, w;

  Discretization(int n_, double R_, std::vector<double> grid_, std::vector<double> ub_)
      : n(n_), R(R_), kappa(unit_ball_volume(n_ - 1)), grid(std::move(grid_)), ub(std::move(ub_)),
        w(trapezoid_weights(grid)) {}

  std::size_t size() const { return grid.size(); }

  void clip_mask(std::span<const double> r, std::vector<std::uint8_t>& mask) const {
    mask.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) mask[i] = r[i] >= ub[i] - kClipTolerance * R ? 1 : 0;
  }

  Evaluation evaluate(std::span<const double> r, std::vector<std::uint8_t>& mask) const {
    clip_mask(r, mask);
    Evaluation e;
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      if (segment_is_free(mask, r, i)) e.area += frustum(n, kappa, grid[i + 1] - grid[i], r[i], r[i + 1], false).f;
    for (std::size_t i : {std::size_t{0}, r.size() - 1})
      if (r[i] > 0.0 && !mask[i]) e.area += kappa * power(r[i], n - 1);
    for (std::size_t i = 0; i < r.size(); ++i) e.volume += w[i] * power(r[i], n - 1);
    e.volume *= kappa;
    return e;
  }

  // Gradient and tridiagonal Hessian of the area; gradient and diagonal
  // Hessian of the volume. Mask held fixed.
  void derivatives(std::span<const double> r, std::span<const std::uint8_t> mask, std::vector<double>& gA,
                   std::vector<double>& hA_diag, std::vector<double>& hA_off, std::vector<double>& gV,
                   std::vector<double>& hV_diag) const {
    const std::size_t N = r.size();
    gA.assign(N, 0.0);
    hA_diag.assign(N, 0.0);
    hA_off.assign(N > 0 ? N - 1 : 0, 0.0);
    gV.assign(N, 0.0);
    hV_diag.assign(N, 0.0);
    for (std::size_t i = 0; i + 1 < N; ++i) {
      if (!segment_is_free(mask, r, i)) continue;
      const auto t = frustum(n, kappa, grid[i + 1] - grid[i], r[i], r[i + 1], true);
      gA[i] += t.fa;
      gA[i + 1] += t.fb;
      hA_diag[i] += t.faa;
      hA_diag[i + 1] += t.fbb;
      hA_off[i] += t.fab;
    }
    for (std::size_t i : {std::size_t{0}, N - 1}) {
      if (r[i] > 0.0 && !mask[i]) {
        gA[i] += kappa * (n - 1) * power(r[i], n - 2);
        hA_diag[i] += n >= 3 ? kappa * (n - 1) * (n - 2) * power(r[i], n - 3) : 0.0;
      }
    }
    for (std::size_t i = 0; i < N; ++i) {
      gV[i] = kappa * w[i] * (n - 1) * power(r[i], n - 2);
      hV_diag[i] = n >= 3 ? kappa * w[i] * (n - 1) * (n - 2) * power(r[i], n - 3) : 0.0;
    }
  }
};

// Solves (T + shift*I) x = rhs for symmetric tridiagonal T. Returns false
// when a pivot is not safely positive (T + shift not positive definite).
bool solve_spd_tridiagonal(std::span<const double> diag, std::span<const double> off, double shift,
                           std::span<const double> rhs1, std::span<const double> rhs2, std::vector<double>& x1,
                           std::vector<double>& x2, double pivot_floor) {
  const std::size_t N = diag.size();
  std::vector<double> d(N), l(N, 0.0);
  d[0] = diag[0] + shift;
  if (!(d[0] > pivot_floor)) return false;
  for (std::size_t i = 1; i < N; ++i) {
    l[i] = off[i - 1] / d[i - 1];
    d[i] = diag[i] + shift - l[i] * off[i - 1];
    if (!(d[i] > pivot_floor)) return false;
  }
  auto solve = [&](std::span<const double> b, std::vector<double>& x) {
    x.assign(b.begin(), b.end());
    for (std::size_t i = 1; i < N; ++i) x[i] -= l[i] * x[i - 1];
    for (std::size_t i = 0; i < N; ++i) x[i] /= d[i];
    for (std::size_t i = N - 1; i-- > 0;) x[i] -= l[i + 1] * x[i + 1];
  };
  solve(rhs1, x1);
  solve(rhs2, x2);
  return true;
}

struct RunOutcome {
  std::vector<double> r;
  double multiplier = 0.0;
  double area = 0.0;
  double violation = 0.0;
  bool converged = false;
};

class AugmentedLagrangianSolver {
public:
  AugmentedLagrangianSolver(const Discretization& disc, double eps, const VariationalOptions& opt)
      : disc_(disc), eps_(eps), opt_(opt) {}

  RunOutcome run(std::vector<double> r) {
    project(r);
    std::vector<std::uint8_t> mask;
    std::vector<double> gA, hAd, hAo, gV, hVd;
    disc_.evaluate(r, mask);
    disc_.derivatives(r, mask, gA, hAd, hAo, gV, hVd);
    {
      // Least-squares multiplier over the free nodes; over every occupied
      // node when none is free (e.g. the flat-cut start).
      double num = 0.0, den = 0.0;
      for (int pass = 0; pass < 2 && den == 0.0; ++pass) {
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (r[i] <= 0.0 || (pass == 0 && mask[i])) continue;
          num += gA[i] * gV[i];
          den += gV[i] * gV[i];
        }
      }
      lambda_ = den > 0.0 ? num / den : 1.0;
    }
    // The penalty must dominate from the first subproblem: the unconstrained
    // volume offset is about (lambda - lambda*) / mu.
    mu_ = 1e3 * std::max(1.0, std::fabs(lambda_)) / std::max(eps_, 1e-3);

    RunOutcome out;
    double prev_violation = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < opt_.max_outer; ++outer) {
      const bool inner_ok = inner(r);
      const auto e = disc_.evaluate(r, mask);
      const double c = e.volume - eps_;
      lambda_ -= mu_ * c;
      if (inner_ok && std::fabs(c) <= 0.1 * opt_.volume_tol) {
        out.converged = true;
        break;
      }
      if (std::fabs(c) > 0.25 * prev_violation) mu_ = std::min(mu_ * 10.0, 1e14);
      prev_violation = std::fabs(c);
    }
    const auto e = disc_.evaluate(r, mask);
    out.area = e.area;
    out.violation = std::fabs(e.volume - eps_);
    if (out.violation > opt_.volume_tol) out.converged = false;
    out.multiplier = lambda_;
    out.r = std::move(r);
    return out;
  }

private:
  void project(std::vector<double>& r) const {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::clamp(r[i], 0.0, disc_.ub[i]);
  }

  double merit(std::span<const double> r, std::vector<std::uint8_t>& mask) const {
    const auto e = disc_.evaluate(r, mask);
    const double c = e.volume - eps_;
    return e.area - lambda_ * c + 0.5 * mu_ * c * c;
  }

  // Returns true when the inner problem reached stationarity.
  bool inner(std::vector<double>& r) {
    const std::size_t N = r.size();
    std::vector<std::uint8_t> mask;
    std::vector<double> gA, hAd, hAo, gV, hVd, g(N), hd(N), ho(N - 1), trial(N);
    std::vector<double> rhs(N), gv_free(N), y, z;
    std::vector<std::uint8_t> active(N);
    double phi = merit(r, mask);
    int quiet = 0;

    for (int it = 0; it < opt_.max_inner; ++it) {
      const auto e = disc_.evaluate(r, mask);
      const double c = e.volume - eps_;
      disc_.derivatives(r, mask, gA, hAd, hAo, gV, hVd);
      const double coef = mu_ * c - lambda_;
      double scale = 0.0;
      double pg = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        g[i] = gA[i] + coef * gV[i];
        hd[i] = hAd[i] + coef * hVd[i];
        scale = std::max(scale, std::fabs(hd[i]));
        pg = std::max(pg, std::fabs(std::clamp(r[i] - g[i], 0.0, disc_.ub[i]) - r[i]));
      }
      if (pg <= 1e-15 * disc_.R) return true;
      const double band = std::min(1e-7 * disc_.R, pg);

      bool stepped = false;
      double new_phi = phi;
      for (int attempt = 0; attempt < 2 && !stepped; ++attempt) {
        const bool pin_all = attempt == 1;
        std::size_t free_count = 0;
        for (std::size_t i = 0; i < N; ++i) {
          const bool fixed = disc_.ub[i] <= 0.0;
          const bool at_lo = r[i] <= band;
          const bool at_hi = r[i] >= disc_.ub[i] - band;
          active[i] = fixed || (at_lo && (pin_all || g[i] > 0.0)) || (at_hi && (pin_all || g[i] < 0.0));
          if (!active[i]) ++free_count;
        }
        if (free_count == 0) return true;
        std::vector<double> diag(N), off(N - 1);
        for (std::size_t i = 0; i < N; ++i) {
          diag[i] = active[i] ? 1.0 : hd[i];
          rhs[i] = active[i] ? 0.0 : -g[i];
          gv_free[i] = active[i] ? 0.0 : gV[i];
        }
        for (std::size_t i = 0; i + 1 < N; ++i) off[i] = (active[i] || active[i + 1]) ? 0.0 : hAo[i];

        double shift = 0.0;
        const double floor = 1e-14 * std::max(scale, 1.0);
        while (!solve_spd_tridiagonal(diag, off, shift, rhs, gv_free, y, z, floor)) {
          shift = shift == 0.0 ? 1e-10 * std::max(scale, 1.0) : shift * 10.0;
          if (shift > 1e20) return false;
        }
        // Rank-one penalty term mu * gV gV^T by Sherman-Morrison.
        double gy = 0.0, gz = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          gy += gv_free[i] * y[i];
          gz += gv_free[i] * z[i];
        }
        const double factor = mu_ * gy / (1.0 + mu_ * gz);
        std::vector<double> dir(N);
        double slope = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          dir[i] = active[i] ? 0.0 : y[i] - factor * z[i];
          slope += g[i] * dir[i];
        }
        if (!(slope < 0.0)) continue;
        if (-slope < 1e-24) return true;

        for (double alpha = 1.0; alpha > 1e-10; alpha *= 0.5) {
          double decrease = 0.0;
          for (std::size_t i = 0; i < N; ++i) {
            trial[i] = std::clamp(r[i] + alpha * dir[i], 0.0, disc_.ub[i]);
            decrease += g[i] * (trial[i] - r[i]);
          }
          const double t_phi = merit(trial, mask);
          if (t_phi <= phi + 1e-4 * decrease) {
            stepped = true;
            new_phi = t_phi;
            r.swap(trial);
            break;
          }
        }
      }
      if (!stepped) return true;
      const bool small = std::fabs(phi - new_phi) <= 1e-15 * (1.0 + std::fabs(phi));
      phi = new_phi;
      quiet = small ? quiet + 1 : 0;
      if (quiet >= 2) return true;
    }
    return false;
  }

  const Discretization& disc_;
  double eps_;
  const VariationalOptions& opt_;
  double lambda_ = 0.0;
  double mu_ = 10.0;
};

} // namespace

// ---------------------------------------------------------------------------

double Profile::bound(std::size_t i) const {
  const double R = ambient.radius();
  const double x = grid[i];
  return std::sqrt(std::max(0.0, (R - x) * (R + x)));
}

Profile Profile::from_radii(BallGeometry ambient, std::vector<double> grid, std::vector<double> radii) {
  if (grid.size() < 2) throw std::domain_error("Profile: need at least two nodes");
  if (grid.size() != radii.size()) throw std::domain_error("Profile: grid and radii differ in length");
  const double R = ambient.radius();
  const double tol = kClipTolerance * R;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < -R - tol || grid[i] > R + tol) throw std::domain_error("Profile: grid leaves [-R, R]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::domain_error("Profile: grid must be strictly increasing");
  }
  Profile p{ambient, std::move(grid), std::move(radii), {}, 0.0};
  p.clip_mask.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double b = p.bound(i);
    double& r = p.radii[i];
    if (!(r >= 0.0)) throw std::domain_error("Profile: radii must be nonnegative");
    if (r > b + tol) throw std::domain_error("Profile: node outside U at index " + std::to_string(i));
    r = std::min(r, b);
    p.clip_mask[i] = r >= b - tol ? 1 : 0;
  }
  auto remainder = [&](double x_toward_pole) {
    const double t = std::acos(std::clamp(x_toward_pole / R, -1.0, 1.0));
    return cap_volume(CapSpec(ambient, t));
  };
  if (p.clip_mask.back() && p.grid.back() < R) p.v0 += remainder(p.grid.back());
  if (p.clip_mask.front() && p.grid.front() > -R) p.v0 += remainder(-p.grid.front());
  return p;
}

std::vector<double> uniform_grid(double radius, int m) {
  if (m < 1) throw std::domain_error("uniform_grid: m must be >= 1");
  std::vector<double> x(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) x[i] = -radius + 2.0 * radius * i / m;
  x.front() = -radius;
  x.back() = radius;
  return x;
}

Profile lens_profile(const LensShape& lens, std::span<const double> grid) {
  const double R = lens.ambient.radius();
  std::vector<double> r(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double ub = std::sqrt(std::max(0.0, (R - x) * (R + x)));
    if (lens.flat_cut) {
      r[i] = x >= 0.0 ? ub : 0.0;
      continue;
    }
    // rho^2 - (x - d)^2 = u (2 rho - u) with u = x - (d - rho), d - rho = R^2 / (d + rho).
    const double u = x - R * R / (lens.center_dist + lens.rho);
    const double inner = u * (2.0 * lens.rho - u);
    r[i] = std::min(ub, inner > 0.0 ? std::sqrt(inner) : 0.0);
  }
  return Profile::from_radii(lens.ambient, {grid.begin(), grid.end()}, std::move(r));
}

Profile flat_cut_profile(int n, double eps, std::span<const double> grid) {
  const auto U = BallGeometry::unit_ball(n);
  const double R = U.radius();
  const double xc = R * std::cos(cap_colatitude_for_volume(U, eps));
  std::vector<double> r(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    r[i] = x >= xc ? std::sqrt(std::max(0.0, (R - x) * (R + x))) : 0.0;
  }
  return Profile::from_radii(U, {grid.begin(), grid.end()}, std::move(r));
}

double profile_volume(const Profile& p) {
  const int n = p.ambient.n();
  const auto w = trapezoid_weights(p.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += w[i] * power(p.radii[i], n - 1);
  return unit_ball_volume(n - 1) * s + p.v0;
}

double profile_free_area(const Profile& p) {
  const int n = p.ambient.n();
  const double kappa = unit_ball_volume(n - 1);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (segment_is_free(p.clip_mask, p.radii, i))
      area += frustum(n, kappa, p.grid[i + 1] - p.grid[i], p.radii[i], p.radii[i + 1], false).f;
  for (std::size_t i : {std::size_t{0}, p.size() - 1})
    if (p.radii[i] > 0.0 && !p.clip_mask[i]) area += kappa * power(p.radii[i], n - 1);
  return area;
}

std::vector<double> profile_free_area_gradient(const Profile& p) {
  const int n = p.ambient.n();
  const double kappa = unit_ball_volume(n - 1);
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!segment_is_free(p.clip_mask, p.radii, i)) continue;
    const auto t = frustum(n, kappa, p.grid[i + 1] - p.grid[i], p.radii[i], p.radii[i + 1], false);
    g[i] += t.fa;
    g[i + 1] += t.fb;
  }
  for (std::size_t i : {std::size_t{0}, p.size() - 1})
    if (p.radii[i] > 0.0 && !p.clip_mask[i]) g[i] += kappa * (n - 1) * power(p.radii[i], n - 2);
  return g;
}

std::vector<double> profile_volume_gradient(const Profile& p) {
  const int n = p.ambient.n();
  const double kappa = unit_ball_volume(n - 1);
  const auto w = trapezoid_weights(p.grid);
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = kappa * w[i] * (n - 1) * power(p.radii[i], n - 2);
  return g;
}

double euler_lagrange_residual(const Profile& p, double lambda, int edge_layer) {
  const int n = p.ambient.n();
  const std::size_t N = p.size();
  std::vector<std::uint8_t> interior(N, 0);
  for (std::size_t i = 1; i + 1 < N; ++i)
    interior[i] = !(p.clip_mask[i - 1] || p.clip_mask[i] || p.clip_mask[i + 1]) &&
                  p.radii[i - 1] > 0.0 && p.radii[i] > 0.0 && p.radii[i + 1] > 0.0;
  auto deep_enough = [&](std::size_t i) {
    for (int k = 1; k <= edge_layer; ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      if (i < kk || i + kk >= N || !interior[i - kk] || !interior[i + kk]) return false;
    }
    return true;
  };
  double worst = -1.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    if (!interior[i] || !deep_enough(i)) continue;
    const double x1 = p.grid[i - 1], y1 = p.radii[i - 1];
    const double x2 = p.grid[i], y2 = p.radii[i];
    const double x3 = p.grid[i + 1], y3 = p.radii[i + 1];
    const double ax = x2 - x1, ay = y2 - y1;
    const double bx = x3 - x2, by = y3 - y2;
    const double cx = x3 - x1, cy = y3 - y1;
    const double cross = ax * by - ay * bx;
    const double la = std::hypot(ax, ay), lb = std::hypot(bx, by), lc = std::hypot(cx, cy);
    // Signed curvature of the circle through the three points (positive when
    // turning left); the meridian curvature of the body is its negative.
    const double k_signed = 2.0 * cross / (la * lb * lc);
    // Outward normal: the tangent (direction of increasing x) rotated by +90 degrees.
    double nx, ny;
    if (std::fabs(k_signed) * lc < 1e-12) {
      nx = -cy / lc;
      ny = cx / lc;
    } else {
      // Circumcentre.
      const double d = 2.0 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
      const double s1 = x1 * x1 + y1 * y1, s2 = x2 * x2 + y2 * y2, s3 = x3 * x3 + y3 * y3;
      const double ux = (s1 * (y2 - y3) + s2 * (y3 - y1) + s3 * (y1 - y2)) / d;
      const double uy = (s1 * (x3 - x2) + s2 * (x1 - x3) + s3 * (x2 - x1)) / d;
      nx = x2 - ux;
      ny = y2 - uy;
      const double len = std::hypot(nx, ny);
      nx /= len;
      ny /= len;
      if (nx * (-cy) + ny * cx < 0.0) {
        nx = -nx;
        ny = -ny;
      }
    }
    const double mean = -k_signed + (n - 2) * ny / y2;
    worst = std::max(worst, std::fabs(mean - lambda));
  }
  return worst < 0.0 ? std::numeric_limits<double>::infinity() : worst;
}

VariationalResult minimize_profile(int n, double eps, int m, std::uint64_t seed, const VariationalOptions& options) {
  if (n < 2) throw std::domain_error("minimize_profile: n must be >= 2");
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("minimize_profile: eps must lie in (0, 1/2)");
  if (m < 100) throw std::domain_error("minimize_profile: m must be >= 100");
  if (options.starts < 2) throw std::domain_error("minimize_profile: need at least the lens and flat-cut starts");

  const auto U = BallGeometry::unit_ball(n);
  const double R = U.radius();
  auto grid = uniform_grid(R, m);
  std::vector<double> ub(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const bool inside = x >= options.support_lo && x <= options.support_hi;
    ub[i] = inside ? std::sqrt(std::max(0.0, (R - x) * (R + x))) : 0.0;
  }
  const Discretization disc(n, R, grid, ub);

  const auto lens = solve_rho_for_volume(n, eps);
  const auto lens_start = lens_profile(lens, grid).radii;
  std::vector<std::vector<double>> inits;
  std::vector<std::string> labels;
  inits.push_back(lens_start);
  labels.emplace_back("lens");
  inits.push_back(flat_cut_profile(n, eps, grid).radii);
  labels.emplace_back("flat-cut");
  for (int s = 2; s < options.starts; ++s) {
    std::mt19937_64 gen(seed * 1000003ULL + static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double a[4];
    for (double& v : a) v = coef(gen);
    auto r = lens_start;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double t = (grid[i] + R) / (2.0 * R);
      double bump = 0.0;
      for (int k = 0; k < 4; ++k) bump += a[k] * std::sin((k + 1) * kPi * t);
      r[i] *= 1.0 + 0.05 * bump;
    }
    inits.push_back(std::move(r));
    labels.push_back("perturbed-" + std::to_string(s - 1));
  }

  std::vector<RunOutcome> runs(inits.size());
  parallel_for(
      inits.size(),
      [&](std::size_t k) {
        AugmentedLagrangianSolver solver(disc, eps, options);
        runs[k] = solver.run(inits[k]);
      },
      options.threads);

  VariationalResult result{Profile::from_radii(U, grid, runs[0].r), 0.0, 0.0, 0.0, false, {}, 0, {}};
  std::size_t best = runs.size();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    result.starts.push_back({labels[k], runs[k].area, runs[k].violation, runs[k].converged});
    if (runs[k].violation > options.volume_tol) continue;
    if (best == runs.size() || runs[k].area < runs[best].area) best = k;
  }
  if (best == runs.size()) {
    // No feasible start: report the least-infeasible one.
    best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k)
      if (runs[k].violation < runs[best].violation) best = k;
  }
  result.profile = Profile::from_radii(U, grid, runs[best].r);
  result.area = runs[best].area;
  result.multiplier = runs[best].multiplier;
  result.constraint_violation = runs[best].violation;
  result.converged = runs[best].converged;
  result.best_start = best;
  if (!result.converged)
    result.warning = "optimizer did not converge within the iteration budget; best feasible point returned";
  return result;
}

void write_profile_csv(std::ostream& os, const Profile& p) {
  os << "x,r,clipped\n";
  char buf[96];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", p.grid[i], p.radii[i], p.clip_mask[i] ? 1 : 0);
    os << buf;
  }
}

Profile read_profile_csv(std::istream& is, BallGeometry ambient) {
  std::vector<double> x, r;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("x,r", 0) != 0) throw std::runtime_error("profile CSV: missing x,r,clipped header");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
      throw std::runtime_error("profile CSV: malformed row '" + line + "'");
    x.push_back(std::stod(a));
    r.push_back(std::stod(b));
  }
  return Profile::from_radii(ambient, std::move(x), std::move(r));
}

} // namespace isoball
