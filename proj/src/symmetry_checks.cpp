#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isoball/errors.hpp"
#include "isoball/symmetry.hpp"
#include "voxel_faces.hpp"

namespace isoball {

namespace {

constexpr double kPi = std::numbers::pi;

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double side_weight(double s) { return s > 0.0 ? 1.0 : (s == 0.0 ? 0.5 : 0.0); }

// Cell centres and faces within rounding of a plane count as on it.
constexpr double kOnPlane = 1e-12;

double snap(double s, double scale) { return std::fabs(s) <= kOnPlane * scale ? 0.0 : s; }

double side_of(const CentralPlane& plane, const Vec3& p, const VoxelBody& body) {
  return snap(plane.signed_distance(p), body.ambient().radius());
}

void require_3d(const CentralPlane& plane) {
  if (plane.dimension() != 3) throw std::domain_error("plane dimension does not match the 3-D body");
}

void require_2d(const CentralPlane& plane) {
  if (plane.dimension() != 2) throw std::domain_error("plane dimension does not match the 2-D body");
}

// ------------------------------------------------------------- polygon helpers

Vec3 lift(const Vec2& p) { return {p[0], p[1], 0.0}; }

// Part of the polygon with sign * s >= 0 (Sutherland-Hodgman, one half-plane).
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const CentralPlane& plane, double sign) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double sp = sign * plane.signed_distance(lift(p));
    const double sq = sign * plane.signed_distance(lift(q));
    if (sp >= 0.0) out.push_back(p);
    if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
      const double t = sp / (sp - sq);
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return out;
}

double shoelace(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

bool free_edge(const PolygonBody& body, const Vec2& p, const Vec2& q) {
  return std::hypot(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])) < body.ambient.radius() - 1.5 * body.resolution;
}

// Length of the segment pq on the side sign * s >= 0.
double clipped_length(const Vec2& p, const Vec2& q, const CentralPlane& plane, double sign) {
  const double sp = sign * plane.signed_distance(lift(p));
  const double sq = sign * plane.signed_distance(lift(q));
  const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
  if (sp >= 0.0 && sq >= 0.0) {
    // An edge lying in the line is split evenly.
    return (sp == 0.0 && sq == 0.0) ? 0.5 * len : len;
  }
  if (sp <= 0.0 && sq <= 0.0) return 0.0;
  const double t = sp / (sp - sq);
  return sp > 0.0 ? t * len : (1.0 - t) * len;
}

// ------------------------------------------------------------- voxel helpers

// Count cells k in [k0, k1) whose centre satisfies a + b z_k > 0, < 0, == 0.
struct Counts {
  std::int64_t plus = 0, minus = 0, zero = 0;
};

Counts classify_run(const VoxelBody& body, double a, double b, std::int32_t k0, std::int32_t k1) {
  Counts c;
  if (k1 <= k0) return c;
  const std::int64_t len = k1 - k0;
  const double R = body.ambient().radius();
  // Plane parallel to z within rounding.
  if (std::fabs(b) <= kOnPlane) {
    b = 0.0;
    a = snap(a, R);
  }
  if (b == 0.0) {
    (a > 0.0 ? c.plus : a < 0.0 ? c.minus : c.zero) = len;
    return c;
  }
  const double h = body.resolution();
  const double ks = (-a / b - body.origin()) / h - 0.5;
  const double kc_d = std::floor(ks);
  // Cells below kc and above kc + 1 are classified by the sign of b; the two
  // cells around the root are evaluated directly.
  const std::int64_t kc = static_cast<std::int64_t>(std::clamp(kc_d, static_cast<double>(k0) - 2.0, static_cast<double>(k1) + 1.0));
  const std::int64_t low_end = std::clamp<std::int64_t>(kc, k0, k1);
  const std::int64_t high_begin = std::clamp<std::int64_t>(kc + 2, k0, k1);
  std::int64_t below = low_end - k0;
  std::int64_t above = k1 - high_begin;
  if (b > 0.0) {
    c.minus += below;
    c.plus += above;
  } else {
    c.plus += below;
    c.minus += above;
  }
  for (std::int64_t k = std::max<std::int64_t>(kc, k0); k < std::min<std::int64_t>(kc + 2, k1); ++k) {
    const double s = snap(a + b * body.center(static_cast<int>(k)), R);
    (s > 0.0 ? c.plus : s < 0.0 ? c.minus : c.zero) += 1;
  }
  return c;
}

double volume_difference(const VoxelBody& body, const CentralPlane& plane) {
  const Vec3& m = plane.normal();
  std::int64_t diff = 0;
  const int n = body.cells();
  for (int i = 0; i < n; ++i) {
    const double xi = m[0] * body.center(i);
    for (int j = 0; j < n; ++j) {
      const auto& col = body.column(i, j);
      if (col.empty()) continue;
      const double a = xi + m[1] * body.center(j);
      for (const auto& r : col) {
        const Counts c = classify_run(body, a, m[2], r.k0, r.k1);
        diff += c.plus - c.minus;
      }
    }
  }
  const double h = body.resolution();
  return static_cast<double>(diff) * h * h * h;
}

struct Box {
  int lo[3] = {0, 0, 0};
  int hi[3] = {-1, -1, -1};  // inclusive
  bool empty() const { return hi[0] < lo[0]; }
};

Box occupied_box(const VoxelBody& body) {
  Box b;
  const int n = body.cells();
  bool any = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& col = body.column(i, j);
      if (col.empty()) continue;
      const int z0 = col.front().k0, z1 = col.back().k1 - 1;
      if (!any) {
        b.lo[0] = b.hi[0] = i;
        b.lo[1] = b.hi[1] = j;
        b.lo[2] = z0;
        b.hi[2] = z1;
        any = true;
        continue;
      }
      b.lo[0] = std::min(b.lo[0], i);
      b.hi[0] = std::max(b.hi[0], i);
      b.lo[1] = std::min(b.lo[1], j);
      b.hi[1] = std::max(b.hi[1], j);
      b.lo[2] = std::min(b.lo[2], z0);
      b.hi[2] = std::max(b.hi[2], z1);
    }
  return b;
}

// Box covering the mirror image of `box`, widened by one cell, clipped to the grid.
Box mirrored_box(const VoxelBody& body, const Box& box, const CentralPlane& plane) {
  Box out;
  if (box.empty()) return out;
  const int n = body.cells();
  double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
  for (int corner = 0; corner < 8; ++corner) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = body.center((corner >> a) & 1 ? box.hi[a] : box.lo[a]);
    const Vec3 q = plane.reflect(p);
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], q[a]);
      hi[a] = std::max(hi[a], q[a]);
    }
  }
  for (int a = 0; a < 3; ++a) {
    out.lo[a] = std::clamp(body.nearest(lo[a]) - 1, 0, n - 1);
    out.hi[a] = std::clamp(body.nearest(hi[a]) + 1, 0, n - 1);
  }
  return out;
}

Box merge(const Box& a, const Box& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Box out;
  for (int t = 0; t < 3; ++t) {
    out.lo[t] = std::min(a.lo[t], b.lo[t]);
    out.hi[t] = std::max(a.hi[t], b.hi[t]);
  }
  return out;
}

struct KRange {
  int lo = 0, hi = -1;  // inclusive
};

KRange hull(KRange a, KRange b) {
  if (a.hi < a.lo) return b;
  if (b.hi < b.lo) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Cells k of column (i, j) whose mirror image lands in `box` (grown by a cell).
KRange mirrored_range(const VoxelBody& body, const Box& box, const CentralPlane& plane, int i, int j) {
  KRange r{0, body.cells() - 1};
  if (box.empty()) return {0, -1};
  const double h = body.resolution();
  const Vec3 q0 = plane.reflect({body.center(i), body.center(j), body.center(0)});
  const Vec3 q1 = plane.reflect({body.center(i), body.center(j), body.center(1)});
  double lo = 0.0, hi = body.cells() - 1.0;
  for (int a = 0; a < 3; ++a) {
    const double A = q0[a], B = q1[a] - q0[a];
    const double bl = body.center(box.lo[a]) - h, bh = body.center(box.hi[a]) + h;
    if (std::fabs(B) < 1e-15 * h) {
      if (A < bl || A > bh) return {0, -1};
      continue;
    }
    double t0 = (bl - A) / B, t1 = (bh - A) / B;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  if (lo > hi) return {0, -1};
  r.lo = static_cast<int>(std::ceil(lo));
  r.hi = static_cast<int>(std::floor(hi));
  return r;
}

KRange own_range(const VoxelBody& body, int i, int j) {
  const auto& col = body.column(i, j);
  if (col.empty()) return {0, -1};
  return {col.front().k0, col.back().k1 - 1};
}

// Builds a body on the grid of `like` from a cell predicate evaluated over
// the columns of `box`, cells range(i, j) of each.
template <class Range, class Pred>
VoxelBody build_ranged(const VoxelBody& like, const Box& box, Range&& range, Pred&& pred) {
  VoxelBody out = VoxelBody::empty(like.resolution());
  if (box.empty()) return out;
  for (int i = box.lo[0]; i <= box.hi[0]; ++i)
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
      const KRange kr = range(i, j);
      std::vector<VoxelBody::Run> runs;
      for (int k = std::max(kr.lo, 0); k <= std::min(kr.hi, like.cells() - 1); ++k) {
        if (!pred(i, j, k)) continue;
        if (!runs.empty() && runs.back().k1 == k)
          ++runs.back().k1;
        else
          runs.push_back({k, k + 1});
      }
      if (!runs.empty()) out.set_column(i, j, std::move(runs));
    }
  return out;
}

// Builds a body on the grid of `like` from a cell predicate evaluated in `box`.
template <class Pred>
VoxelBody build(const VoxelBody& like, const Box& box, Pred&& pred) {
  VoxelBody out = VoxelBody::empty(like.resolution());
  if (box.empty()) return out;
  for (int i = box.lo[0]; i <= box.hi[0]; ++i)
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
      std::vector<VoxelBody::Run> runs;
      for (int k = box.lo[2]; k <= box.hi[2]; ++k) {
        if (!pred(i, j, k)) continue;
        if (!runs.empty() && runs.back().k1 == k)
          ++runs.back().k1;
        else
          runs.push_back({k, k + 1});
      }
      if (!runs.empty()) out.set_column(i, j, std::move(runs));
    }
  return out;
}

void require_same_grid(const VoxelBody& a, const VoxelBody& b) {
  if (a.cells() != b.cells() || a.resolution() != b.resolution())
    throw std::domain_error("voxel bodies must share the same grid");
}

std::int64_t xor_count(const VoxelBody& a, const VoxelBody& b) {
  require_same_grid(a, b);
  std::int64_t count = 0;
  const int n = a.cells();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& ca = a.column(i, j);
      const auto& cb = b.column(i, j);
      std::int64_t la = 0, lb = 0, both = 0;
      for (const auto& r : ca) la += r.k1 - r.k0;
      for (const auto& r : cb) lb += r.k1 - r.k0;
      std::size_t ib = 0;
      for (const auto& r : ca) {
        while (ib < cb.size() && cb[ib].k1 <= r.k0) ++ib;
        for (std::size_t t = ib; t < cb.size() && cb[t].k0 < r.k1; ++t)
          both += std::max(0, std::min(r.k1, cb[t].k1) - std::max(r.k0, cb[t].k0));
      }
      count += la + lb - 2 * both;
    }
  return count;
}

Vec3 cell_center(const VoxelBody& body, int i, int j, int k) { return {body.center(i), body.center(j), body.center(k)}; }

const Vec3& require_axis(const VoxelBody& body) {
  if (!body.axis()) throw PreconditionError("body has no revolution axis");
  return *body.axis();
}

// Bounding planes of the sector [phi0, phi0 + angle] in azimuth, both with
// normals pointing towards increasing azimuth: the sector is s1 >= 0, s2 <= 0.
std::pair<CentralPlane, CentralPlane> sector_planes(const Vec3& axis, double phi0, double angle) {
  return {axis_plane(axis, phi0 + 0.5 * kPi), axis_plane(axis, phi0 + angle + 0.5 * kPi)};
}

// Largest distance of an occupied cell centre from the axis line.
double max_axis_distance(const VoxelBody& body, const Vec3& axis) {
  double best = 0.0;
  const int n = body.cells();
  auto dist = [&](const Vec3& p) {
    const double t = dot3(p, axis);
    return std::sqrt(std::max(0.0, dot3(p, p) - t * t));
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& r : body.column(i, j)) {
        best = std::max(best, dist(cell_center(body, i, j, r.k0)));
        best = std::max(best, dist(cell_center(body, i, j, r.k1 - 1)));
      }
  return best;
}

} // namespace

// ---------------------------------------------------------------- split

SplitMeasures split_measures(const PolygonBody& body, const CentralPlane& plane) {
  require_2d(plane);
  SplitMeasures m;
  m.vol_plus = shoelace(clip_polygon(body.vertices, plane, 1.0));
  m.vol_minus = shoelace(clip_polygon(body.vertices, plane, -1.0));
  const std::size_t n = body.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = body.vertices[i];
    const Vec2& q = body.vertices[(i + 1) % n];
    if (!free_edge(body, p, q)) continue;
    m.free_plus += clipped_length(p, q, plane, 1.0);
    m.free_minus += clipped_length(p, q, plane, -1.0);
  }
  return m;
}

SplitMeasures split_measures(const VoxelBody& body, const CentralPlane& plane) {
  require_3d(plane);
  SplitMeasures m;
  const Vec3& nrm = plane.normal();
  const int n = body.cells();
  std::int64_t plus = 0, minus = 0, zero = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = nrm[0] * body.center(i) + nrm[1] * body.center(j);
      for (const auto& r : body.column(i, j)) {
        const Counts c = classify_run(body, a, nrm[2], r.k0, r.k1);
        plus += c.plus;
        minus += c.minus;
        zero += c.zero;
      }
    }
  const double cell = std::pow(body.resolution(), 3);
  m.vol_plus = (static_cast<double>(plus) + 0.5 * static_cast<double>(zero)) * cell;
  m.vol_minus = (static_cast<double>(minus) + 0.5 * static_cast<double>(zero)) * cell;
  const auto& set = body.face_set();
  for (std::size_t t = 0; t < set.faces.size(); ++t) {
    if (!set.free[t]) continue;
    const double s = side_of(plane, set.faces[t].c, body);
    m.free_plus += side_weight(s) * set.weight[t];
    m.free_minus += side_weight(-s) * set.weight[t];
  }
  return m;
}

// ---------------------------------------------------------------- halving

double halving_tolerance(const PolygonBody& body) { return 2.0 * body.resolution * body.perimeter(); }

double halving_tolerance(const VoxelBody& body) { return 2.0 * body.resolution() * boundary_area(body); }

namespace {

template <class Diff>
double bisect_angle(Diff&& diff) {
  constexpr int kScan = 16;
  double lo = 0.0, flo = diff(0.0);
  if (flo == 0.0) return 0.0;
  for (int t = 1; t <= kScan; ++t) {
    const double hi = kPi * t / kScan;
    const double fhi = diff(hi);
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) != (fhi < 0.0)) {
      double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = diff(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    flo = fhi;
  }
  throw NoSolutionError("find_halving_plane: volume difference has no sign change over a half turn");
}

} // namespace

CentralPlane find_halving_plane(const PolygonBody& body) {
  if (!(body.area() > 0.0)) throw NoSolutionError("find_halving_plane: empty body");
  auto plane_at = [](double phi) { return CentralPlane::from_normal(Vec2{std::cos(phi), std::sin(phi)}); };
  const double phi = bisect_angle([&](double a) {
    const auto m = split_measures(body, plane_at(a));
    return m.vol_plus - m.vol_minus;
  });
  const CentralPlane plane = plane_at(phi);
  const auto m = split_measures(body, plane);
  if (std::fabs(m.vol_plus - m.vol_minus) > halving_tolerance(body))
    throw ConvergenceError("find_halving_plane: bisection did not reach the halving tolerance");
  return plane;
}

CentralPlane find_halving_plane(const VoxelBody& body, const Vec3& pivot_direction) {
  if (body.voxel_count() == 0) throw NoSolutionError("find_halving_plane: empty body");
  const auto [u, w] = perpendicular_basis(pivot_direction);
  auto plane_at = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return CentralPlane::from_normal(Vec3{c * u[0] + s * w[0], c * u[1] + s * w[1], c * u[2] + s * w[2]});
  };
  const double phi = bisect_angle([&](double a) { return volume_difference(body, plane_at(a)); });
  const CentralPlane plane = plane_at(phi);
  if (std::fabs(volume_difference(body, plane)) > halving_tolerance(body))
    throw ConvergenceError("find_halving_plane: bisection did not reach the halving tolerance");
  return plane;
}

// ---------------------------------------------------------------- glue

PolygonBody reflect_glue(const PolygonBody& body, const CentralPlane& plane, Side side) {
  require_2d(plane);
  const auto m = split_measures(body, plane);
  if (std::fabs(m.vol_plus - m.vol_minus) > halving_tolerance(body))
    throw PreconditionError("reflect_glue: plane does not halve the body");
  // Boundary must cross the line exactly twice.
  int changes = 0;
  int last = 0, first = 0;
  for (const auto& v : body.vertices) {
    const double s = plane.signed_distance(lift(v));
    const int sg = s > 0.0 ? 1 : (s < 0.0 ? -1 : 0);
    if (sg == 0) continue;
    if (first == 0) first = sg;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  if (last != 0 && first != last) ++changes;
  if (changes != 2) throw PreconditionError("reflect_glue: polygon boundary must cross the plane exactly twice");

  const double sign = side == Side::plus ? 1.0 : -1.0;
  std::vector<Vec2> part = clip_polygon(body.vertices, plane, sign);
  const double eps = 1e-12 * body.ambient.radius();
  auto on_line = [&](const Vec2& p) { return std::fabs(plane.signed_distance(lift(p))) <= eps; };
  // The cut edge runs from the exit point X to the entry point E; start the
  // chain at E so it ends at X.
  const std::size_t n = part.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (on_line(part[i]) && on_line(part[(i + 1) % n])) {
      start = (i + 1) % n;
      break;
    }
  }
  if (start == n) throw PreconditionError("reflect_glue: no cut edge found");
  std::vector<Vec2> chain;
  for (std::size_t t = 0; t < n; ++t) chain.push_back(part[(start + t) % n]);
  PolygonBody out{body.ambient, body.resolution, chain, std::nullopt};
  for (std::size_t t = chain.size() - 1; t-- > 1;) {
    const Vec3 r = plane.reflect(lift(chain[t]));
    out.vertices.push_back({r[0], r[1]});
  }
  return out;
}

VoxelBody mirror(const VoxelBody& body, const CentralPlane& plane) {
  require_3d(plane);
  const Box own = occupied_box(body);
  const Box box = mirrored_box(body, own, plane);
  VoxelBody out = build_ranged(
      body, box, [&](int i, int j) { return mirrored_range(body, own, plane, i, j); },
      [&](int i, int j, int k) { return body.occupied_near(plane.reflect(cell_center(body, i, j, k))); });
  if (body.axis()) {
    const Vec3 a = plane.reflect(*body.axis());
    out.set_axis(a);
  }
  return out;
}

VoxelBody reflect_glue(const VoxelBody& body, const CentralPlane& plane, Side side) {
  require_3d(plane);
  const double diff = volume_difference(body, plane);
  if (std::fabs(diff) > halving_tolerance(body)) throw PreconditionError("reflect_glue: plane does not halve the body");
  const double sign = side == Side::plus ? 1.0 : -1.0;
  const Box own = occupied_box(body);
  const Box box = merge(own, mirrored_box(body, own, plane));
  return build_ranged(
      body, box, [&](int i, int j) { return hull(own_range(body, i, j), mirrored_range(body, own, plane, i, j)); },
      [&](int i, int j, int k) {
        const Vec3 p = cell_center(body, i, j, k);
        const double s = sign * side_of(plane, p, body);
        if (s >= 0.0) return body.occupied(i, j, k);
        return body.occupied_near(plane.reflect(p));
      });
}

VoxelBody unite(const VoxelBody& a, const VoxelBody& b) {
  require_same_grid(a, b);
  VoxelBody out = VoxelBody::empty(a.resolution());
  const int n = a.cells();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& ca = a.column(i, j);
      const auto& cb = b.column(i, j);
      if (ca.empty() && cb.empty()) continue;
      std::vector<VoxelBody::Run> all(ca);
      all.insert(all.end(), cb.begin(), cb.end());
      std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.k0 < y.k0; });
      std::vector<VoxelBody::Run> runs;
      for (const auto& r : all) {
        if (!runs.empty() && runs.back().k1 >= r.k0)
          runs.back().k1 = std::max(runs.back().k1, r.k1);
        else
          runs.push_back(r);
      }
      out.set_column(i, j, std::move(runs));
    }
  if (a.axis()) out.set_axis(*a.axis());
  return out;
}

VoxelBody restrict_to_sector(const VoxelBody& body, double phi0, double angle) {
  const Vec3& axis = require_axis(body);
  if (!(angle > 0.0 && angle <= kPi)) throw std::domain_error("restrict_to_sector: angle must lie in (0, pi]");
  const auto [p1, p2] = sector_planes(axis, phi0, angle);
  VoxelBody out = build(body, occupied_box(body), [&](int i, int j, int k) {
    if (!body.occupied(i, j, k)) return false;
    const Vec3 p = cell_center(body, i, j, k);
    return side_of(p1, p, body) >= 0.0 && side_of(p2, p, body) < 0.0;
  });
  out.set_axis(axis);
  return out;
}

VoxelBody unfold_sector(const VoxelBody& body, int k, double phi0) {
  const Vec3& axis = require_axis(body);
  if (k < 1 || k > 30) throw std::domain_error("unfold_sector: k must lie in [1, 30]");
  const double angle = kPi / std::ldexp(1.0, k);
  const auto [u, w] = perpendicular_basis(axis);
  // Columns within the rotation-invariant hull of the body.
  const double rmax = max_axis_distance(body, axis) + body.resolution();
  double tlo = 1e300, thi = -1e300;
  const int n = body.cells();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& r : body.column(i, j))
        for (int kk : {r.k0, r.k1 - 1}) {
          const double t = dot3(cell_center(body, i, j, kk), axis);
          tlo = std::min(tlo, t);
          thi = std::max(thi, t);
        }
  if (tlo > thi) return VoxelBody::empty(body.resolution());
  auto fold = [&](const Vec3& p) {
    const double t = dot3(p, axis);
    const double a = dot3(p, u), b = dot3(p, w);
    const double r = std::hypot(a, b);
    double psi = std::remainder(std::atan2(b, a) - phi0, 2.0 * angle);
    psi = std::fabs(psi);
    const double c = std::cos(phi0 + psi), s = std::sin(phi0 + psi);
    return Vec3{t * axis[0] + r * (c * u[0] + s * w[0]), t * axis[1] + r * (c * u[1] + s * w[1]),
                t * axis[2] + r * (c * u[2] + s * w[2])};
  };
  Box box;
  for (int a = 0; a < 3; ++a) {
    // Bounding box of the cylinder of radius rmax over [tlo, thi] along the axis.
    const double ext = rmax * std::sqrt(std::max(0.0, 1.0 - axis[a] * axis[a]));
    const double lo = std::min(tlo * axis[a], thi * axis[a]) - ext, hi = std::max(tlo * axis[a], thi * axis[a]) + ext;
    box.lo[a] = std::clamp(body.nearest(lo) - 1, 0, n - 1);
    box.hi[a] = std::clamp(body.nearest(hi) + 1, 0, n - 1);
  }
  VoxelBody out = build(body, box, [&](int i, int j, int kk) { return body.occupied_near(fold(cell_center(body, i, j, kk))); });
  out.set_axis(axis);
  return out;
}

double symmetry_defect(const VoxelBody& body, const CentralPlane& plane) {
  require_3d(plane);
  std::int64_t miss = 0;
  const int n = body.cells();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& r : body.column(i, j))
        for (int k = r.k0; k < r.k1; ++k)
          if (!body.occupied_near(plane.reflect(cell_center(body, i, j, k)))) ++miss;
  const double S = boundary_area(body);
  if (!(S > 0.0)) return 0.0;
  // |A \ mirror(A)| = |mirror(A) \ A|.
  return 2.0 * static_cast<double>(miss) * std::pow(body.resolution(), 3) / S;
}

double difference_length(const VoxelBody& a, const VoxelBody& b) {
  const double S = boundary_area(a);
  if (!(S > 0.0)) throw std::domain_error("difference_length: first body is empty");
  return static_cast<double>(xor_count(a, b)) * std::pow(a.resolution(), 3) / S;
}

// ---------------------------------------------------------------- incidence

double perpendicular_incidence(const PolygonBody& body, const CentralPlane& plane) {
  require_2d(plane);
  const Vec3& m = plane.normal();
  const std::size_t n = body.vertices.size();
  const double eps = 1e-12 * body.ambient.radius();
  auto edge_normal = [&](std::size_t i) {
    const Vec2& p = body.vertices[i];
    const Vec2& q = body.vertices[(i + 1) % n];
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    return Vec2{(q[1] - p[1]) / len, -(q[0] - p[0]) / len};
  };
  double worst = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = body.vertices[i];
    const Vec2& q = body.vertices[(i + 1) % n];
    const bool is_free = free_edge(body, p, q);
    const double sp = plane.signed_distance(lift(p));
    const double sq = plane.signed_distance(lift(q));
    if (std::fabs(sp) <= eps) {
      // Crossing at vertex i: average the two incident edge normals.
      const std::size_t prev = (i + n - 1) % n;
      if (!is_free && !free_edge(body, body.vertices[prev], p)) continue;
      const Vec2 a = edge_normal(prev), b = edge_normal(i);
      const double len = std::hypot(a[0] + b[0], a[1] + b[1]);
      if (len == 0.0) continue;
      worst = std::max(worst, std::fabs(((a[0] + b[0]) * m[0] + (a[1] + b[1]) * m[1]) / len));
    } else if (is_free && std::fabs(sq) > eps && (sp < 0.0) != (sq < 0.0)) {
      const Vec2 e = edge_normal(i);
      worst = std::max(worst, std::fabs(e[0] * m[0] + e[1] * m[1]));
    }
  }
  if (worst < 0.0) throw NumericError("perpendicular_incidence: plane misses the free boundary");
  return worst;
}

double perpendicular_incidence(const VoxelBody& body, const CentralPlane& plane) {
  require_3d(plane);
  const double h = body.resolution();
  const double sigma = detail::incidence_sigma(body);
  if (3.0 * sigma + 1.5 * h > body.ambient().radius() / 3.0)
    throw ResolutionError("perpendicular_incidence: normal kernel does not fit inside U at this resolution");
  const auto faces = detail::boundary_faces(body);
  const detail::FaceIndex index(faces, body.origin(), body.cells() * h, 3.0 * sigma);
  // Stay clear of ∂U by the free band plus the kernel reach.
  const double limit = body.ambient().radius() - 1.5 * h - 3.0 * sigma;
  const Vec3& m = plane.normal();
  double worst = -1.0;
  for (const auto& f : faces) {
    const double s = plane.signed_distance(f.c);
    if (std::fabs(s) > h) continue;
    const Vec3 p{f.c[0] - s * m[0], f.c[1] - s * m[1], f.c[2] - s * m[2]};
    if (std::sqrt(dot3(p, p)) >= limit) continue;
    const Vec3 nrm = detail::normal_from_faces(index, p, sigma);
    worst = std::max(worst, std::fabs(dot3(nrm, m)));
  }
  if (worst < 0.0) throw NumericError("perpendicular_incidence: plane misses the free boundary");
  return worst;
}

// ---------------------------------------------------------------- sectors

std::array<PartMeasure, 4> quarters_check(const VoxelBody& body, const CentralPlane& p1, const CentralPlane& p2) {
  require_3d(p1);
  require_3d(p2);
  const Vec3& axis = require_axis(body);
  if (std::fabs(dot3(p1.normal(), p2.normal())) > 1e-9) throw PreconditionError("quarters_check: planes must be perpendicular");
  if (std::fabs(dot3(p1.normal(), axis)) > 1e-9 || std::fabs(dot3(p2.normal(), axis)) > 1e-9)
    throw PreconditionError("quarters_check: both planes must contain the axis");
  std::array<PartMeasure, 4> parts{};
  auto weights = [&](const Vec3& p, std::array<double, 4>& w) {
    const double s1 = side_of(p1, p, body), s2 = side_of(p2, p, body);
    const double a = side_weight(s1), b = side_weight(s2);
    w = {a * b, a * (1.0 - b), (1.0 - a) * b, (1.0 - a) * (1.0 - b)};
  };
  const double cell = std::pow(body.resolution(), 3);
  std::array<double, 4> w{};
  const int n = body.cells();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& r : body.column(i, j))
        for (int k = r.k0; k < r.k1; ++k) {
          weights(cell_center(body, i, j, k), w);
          for (int q = 0; q < 4; ++q) parts[q].volume += w[q] * cell;
        }
  const auto& set = body.face_set();
  for (std::size_t t = 0; t < set.faces.size(); ++t) {
    if (!set.free[t]) continue;
    weights(set.faces[t].c, w);
    for (int q = 0; q < 4; ++q) parts[q].free_measure += w[q] * set.weight[t];
  }
  return parts;
}

SectorFractions dyadic_sector_check(const VoxelBody& body, int k, double phi0) {
  const Vec3& axis = require_axis(body);
  if (k < 1) throw PreconditionError("dyadic_sector_check: k must be >= 1");
  if (k > 30) throw std::domain_error("dyadic_sector_check: k must be <= 30");
  const double angle = kPi / std::ldexp(1.0, k);
  const double h = body.resolution();
  const double rmax = max_axis_distance(body, axis);
  if (rmax * angle < 3.0 * h)
    throw ResolutionError("dyadic_sector_check: sector of angle pi/2^" + std::to_string(k) +
                          " is thinner than 3 cells at this resolution");
  const auto [p1, p2] = sector_planes(axis, phi0, angle);
  auto weight = [&](const Vec3& p) { return side_weight(side_of(p1, p, body)) * side_weight(-side_of(p2, p, body)); };
  double vin = 0.0, vall = 0.0;
  const int n = body.cells();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& r : body.column(i, j))
        for (int kk = r.k0; kk < r.k1; ++kk) {
          vin += weight(cell_center(body, i, j, kk));
          vall += 1.0;
        }
  const auto& set = body.face_set();
  double fin = 0.0, fall = 0.0;
  for (std::size_t t = 0; t < set.faces.size(); ++t) {
    if (!set.free[t]) continue;
    fin += weight(set.faces[t].c) * set.weight[t];
    fall += set.weight[t];
  }
  if (!(vall > 0.0)) throw NumericError("dyadic_sector_check: empty body");
  return {vin / vall, fall > 0.0 ? fin / fall : 0.0};
}

} // namespace isoball
