#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isoball/geometry.hpp"
#include "isoball/lens.hpp"

namespace isoball {

namespace detail {
struct FaceSet;
}

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

/// A hyperplane through the origin, stored by its unit normal. In 2-D the
/// third component is zero.
class CentralPlane {
public:
  /// Normalizes; throws std::domain_error for a (near-)zero vector.
  static CentralPlane from_normal(const Vec3& normal, int dimension = 3);
  static CentralPlane from_normal(const Vec2& normal);

  const Vec3& normal() const { return normal_; }
  int dimension() const { return dimension_; }
  double signed_distance(const Vec3& p) const;
  Vec3 reflect(const Vec3& p) const;

private:
  CentralPlane(Vec3 n, int dim) : normal_(n), dimension_(dim) {}
  Vec3 normal_;
  int dimension_;
};

/// Plane containing `axis` whose normal is cos(phi) u + sin(phi) w for the
/// fixed orthonormal basis (u, w) of axis^perp returned by perpendicular_basis.
CentralPlane axis_plane(const Vec3& axis, double phi);
std::pair<Vec3, Vec3> perpendicular_basis(const Vec3& axis);

/// Simple polygon (counter-clockwise vertex loop) inside the unit-volume disc.
/// `resolution` is the edge-length scale used for tolerances.
struct PolygonBody {
  BallGeometry ambient;
  double resolution;
  std::vector<Vec2> vertices;
  std::optional<Vec2> axis;

  double area() const;
  /// Perimeter of the edges not lying on ∂U (midpoint farther than 1.5h
  /// inside the circle).
  double free_perimeter() const;
  double perimeter() const;
};

/// Orthogonal lens of the disc (n = 2 only), axis +e_0, edges <= h.
PolygonBody polygon_lens(const LensShape& lens, double h);
PolygonBody polygon_disc(int n, double radius, double h);

/// Occupancy grid inside the unit-volume 3-ball, stored as run-length columns
/// along z. Cell (i, j, k) has centre origin + (i + 1/2, j + 1/2, k + 1/2) h;
/// the grid is symmetric about the origin. A cell is occupied when its
/// centre lies in the body.
class VoxelBody {
public:
  struct Run {
    std::int32_t k0;
    std::int32_t k1;  // exclusive
  };
  /// Body given per column by a set of z-intervals of the continuous body.
  using ColumnIntervals = std::vector<std::pair<double, double>>;

  /// Grid of cell size h covering [-R, R]^3 (N = ceil(2R/h) cells per axis).
  static VoxelBody empty(double h);
  template <class F>
  static VoxelBody from_columns(double h, F&& intervals_at);

  const BallGeometry& ambient() const { return ambient_; }
  double resolution() const { return h_; }
  int cells() const { return cells_; }
  double origin() const { return origin_; }
  const std::optional<Vec3>& axis() const { return axis_; }
  void set_axis(const Vec3& axis);

  const std::vector<Run>& column(int i, int j) const { return columns_[index(i, j)]; }
  void set_column(int i, int j, std::vector<Run> runs);
  bool occupied(int i, int j, int k) const;
  double center(int i) const { return origin_ + (i + 0.5) * h_; }
  /// Nearest cell index along one axis (may fall outside [0, cells)).
  int nearest(double x) const;
  /// Occupancy of the cell whose centre is nearest to p; false outside the grid.
  bool occupied_near(const Vec3& p) const;

  std::int64_t voxel_count() const;
  double volume() const;

  /// Boundary faces with their area weights; computed once and shared by copies.
  const detail::FaceSet& face_set() const;

private:
  struct Cache;
  VoxelBody(BallGeometry ambient, double h, int cells);
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cells_ + j; }

  BallGeometry ambient_;
  double h_;
  int cells_;
  double origin_;
  std::vector<std::vector<Run>> columns_;
  std::optional<Vec3> axis_;
  std::shared_ptr<Cache> cache_;
};

/// Orthogonal lens of the 3-ball with axis +e_z.
VoxelBody voxel_lens(const LensShape& lens, double h);
/// Ball of the given radius centred at the origin (axis e_z).
VoxelBody voxel_ball(double radius, double h);
/// Seeded union of 3..8 balls clipped to U; no axis.
VoxelBody random_blob(std::uint64_t seed, double h);

/// Points in the body on the plus side, minus side; free boundary measure
/// on each side. Cells and faces centred exactly on the plane count half.
struct SplitMeasures {
  double vol_plus = 0.0;
  double vol_minus = 0.0;
  double free_plus = 0.0;
  double free_minus = 0.0;
};

SplitMeasures split_measures(const PolygonBody& body, const CentralPlane& plane);
SplitMeasures split_measures(const VoxelBody& body, const CentralPlane& plane);

/// Free boundary measure: boundary faces farther than 1.5h inside ∂U, each
/// weighted by h^2 / |n|_1 with n the locally estimated unit normal.
double free_area(const VoxelBody& body);
/// Whole boundary measure, same weighting; the "surface scale" S.
double boundary_area(const VoxelBody& body);

/// Outward unit normal at a point near the boundary, from the kernel
/// weighted vector area of the boundary faces within 3 sigma.
Vec3 estimate_normal(const VoxelBody& body, const Vec3& point, double sigma);

/// Tolerance |vol_plus - vol_minus| <= 2 h S advertised by find_halving_plane.
double halving_tolerance(const PolygonBody& body);
double halving_tolerance(const VoxelBody& body);

/// Rotates a central plane about the pivot (the origin in 2-D, the line
/// spanned by pivot_direction in 3-D) and bisects the volume difference.
/// Throws NoSolutionError for an empty body or no sign change.
CentralPlane find_halving_plane(const PolygonBody& body);
CentralPlane find_halving_plane(const VoxelBody& body, const Vec3& pivot_direction);

enum class Side { plus, minus };

/// The chosen side united with its mirror image. Throws PreconditionError if
/// the plane does not halve the volume within halving_tolerance. In 2-D the
/// boundary must cross the line exactly twice.
PolygonBody reflect_glue(const PolygonBody& body, const CentralPlane& plane, Side side);
VoxelBody reflect_glue(const VoxelBody& body, const CentralPlane& plane, Side side);

/// Mirror image of the body, resampled by nearest cell.
VoxelBody mirror(const VoxelBody& body, const CentralPlane& plane);
VoxelBody unite(const VoxelBody& a, const VoxelBody& b);
/// Cells whose centre has azimuth in [phi0, phi0 + angle] about the axis.
VoxelBody restrict_to_sector(const VoxelBody& body, double phi0, double angle);

/// The body rebuilt from 2^(k+1) reflected copies of its sector
/// [phi0, phi0 + pi/2^k]: every cell is folded into that sector by the
/// reflections across the sector walls and takes the occupancy found there.
VoxelBody unfold_sector(const VoxelBody& body, int k, double phi0 = 0.0);

/// vol(A xor A mirrored) / boundary_area(A): a length, 0 for a symmetric body.
double symmetry_defect(const VoxelBody& body, const CentralPlane& plane);
/// vol(A xor B) / boundary_area(A).
double difference_length(const VoxelBody& a, const VoxelBody& b);

/// max |<surface normal, plane normal>| over free boundary points on the
/// plane. Throws NumericError when the plane misses the free boundary. In
/// 3-D the normal kernel has width max(6h, sqrt(h R)) and must stay clear of
/// ∂U; ResolutionError when it reaches past R/3.
double perpendicular_incidence(const PolygonBody& body, const CentralPlane& plane);
double perpendicular_incidence(const VoxelBody& body, const CentralPlane& plane);

struct PartMeasure {
  double volume = 0.0;
  double free_measure = 0.0;
};

/// Four parts cut by two perpendicular planes through the body's axis, in
/// sign order (++, +-, -+, --). PreconditionError unless the planes are
/// perpendicular to 1e-9 and both contain the axis.
std::array<PartMeasure, 4> quarters_check(const VoxelBody& body, const CentralPlane& p1, const CentralPlane& p2);

struct SectorFractions {
  double vol_fraction = 0.0;
  double free_fraction = 0.0;
};

/// Fractions of volume and free measure in the sector of dihedral angle
/// pi / 2^k about the body's axis, starting at azimuth phi0. ResolutionError
/// when the sector is thinner than 3 cells at the body's largest distance
/// from the axis.
SectorFractions dyadic_sector_check(const VoxelBody& body, int k, double phi0 = 0.0);

void write_polygon_csv(std::ostream& os, const PolygonBody& body);
PolygonBody read_polygon_csv(std::istream& is, double resolution);

/// Flat uint8 occupancy, index (i * N + j) * N + k, plus a JSON header with
/// dimension, cells, resolution, origin and the axis when present.
void write_occupancy(const VoxelBody& body, const std::string& header_path, const std::string& data_path);
VoxelBody read_occupancy(const std::string& header_path, const std::string& data_path);

template <class F>
VoxelBody VoxelBody::from_columns(double h, F&& intervals_at) {
  VoxelBody body = empty(h);
  const int n = body.cells_;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ColumnIntervals iv = intervals_at(body.center(i), body.center(j));
      std::sort(iv.begin(), iv.end());
      std::vector<Run> runs;
      for (const auto& [z0, z1] : iv) {
        // Occupied cells: centre in [z0, z1].
        const auto k0 = static_cast<std::int32_t>(std::max(0.0, std::ceil((z0 - body.origin_) / h - 0.5)));
        const auto k1 = static_cast<std::int32_t>(
            std::min<double>(n, std::floor((z1 - body.origin_) / h - 0.5) + 1.0));
        if (k1 > k0) {
          if (!runs.empty() && runs.back().k1 >= k0)
            runs.back().k1 = std::max(runs.back().k1, k1);
          else
            runs.push_back({k0, k1});
        }
      }
      body.columns_[body.index(i, j)] = std::move(runs);
    }
  }
  return body;
}

} // namespace isoball
