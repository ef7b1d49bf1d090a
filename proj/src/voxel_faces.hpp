#pragma once

// Boundary faces of a VoxelBody and a bucket index over them.

#include <cstdint>
#include <vector>

#include "isoball/symmetry.hpp"

namespace isoball::detail {

struct Face {
  Vec3 c;
  std::int8_t axis;
  std::int8_t sign;  // outward direction along axis
};

std::vector<Face> boundary_faces(const VoxelBody& body);

class FaceIndex {
public:
  FaceIndex(const std::vector<Face>& faces, double origin, double extent, double bucket);

  template <class Fn>
  void visit(const Vec3& p, double radius, Fn&& fn) const {
    int lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::floor((p[a] - radius - origin_) / bucket_)));
      hi[a] = std::min(g_ - 1, static_cast<int>(std::floor((p[a] + radius - origin_) / bucket_)));
    }
    const double r2 = radius * radius;
    for (int x = lo[0]; x <= hi[0]; ++x)
      for (int y = lo[1]; y <= hi[1]; ++y)
        for (int z = lo[2]; z <= hi[2]; ++z) {
          const std::size_t b = (static_cast<std::size_t>(x) * g_ + y) * g_ + z;
          for (std::uint32_t t = start_[b]; t < start_[b + 1]; ++t) {
            const Face& f = (*faces_)[order_[t]];
            const double dx = f.c[0] - p[0], dy = f.c[1] - p[1], dz = f.c[2] - p[2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 <= r2) fn(f, d2);
          }
        }
  }

private:
  const std::vector<Face>* faces_;
  double origin_;
  double bucket_;
  int g_;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> order_;
};

/// Faces with their area weights h^2/|n|_1 and free flags.
struct FaceSet {
  std::vector<Face> faces;
  std::vector<double> weight;
  std::vector<std::uint8_t> free;
};

FaceSet weighted_faces(const VoxelBody& body);

/// Kernel (1 - d^2 / (3 sigma)^2)^2 on faces within 3 sigma.
Vec3 normal_from_faces(const FaceIndex& index, const Vec3& p, double sigma);

/// Width of the Gaussian used for area weights, in cells.
inline constexpr double kAreaSigmaCells = 1.5;
/// Incidence normals need a kernel wider than the voxel terraces, whose
/// width grows like sqrt(h r): sigma = max(6h, sqrt(h R)).
double incidence_sigma(const VoxelBody& body);

} // namespace isoball::detail
