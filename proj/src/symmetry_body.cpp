#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "isoball/errors.hpp"
#include "isoball/symmetry.hpp"
#include "voxel_faces.hpp"

namespace isoball {

namespace {

constexpr double kPi = std::numbers::pi;

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 unit3(const Vec3& v) {
  const double len = std::sqrt(dot3(v, v));
  if (!(len > 1e-300) || !std::isfinite(len)) throw std::domain_error("vector must be nonzero and finite");
  return {v[0] / len, v[1] / len, v[2] / len};
}

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// z-interval of the ball (centre c, radius r) over the column (x, y).
bool ball_column(const Vec3& c, double r, double x, double y, std::pair<double, double>& out) {
  const double s2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
  if (s2 >= r * r) return false;
  const double half = std::sqrt(r * r - s2);
  out = {c[2] - half, c[2] + half};
  return true;
}

} // namespace

// ---------------------------------------------------------------- planes

CentralPlane CentralPlane::from_normal(const Vec3& normal, int dimension) {
  if (dimension != 2 && dimension != 3) throw std::domain_error("CentralPlane: dimension must be 2 or 3");
  Vec3 n = normal;
  if (dimension == 2) n[2] = 0.0;
  return CentralPlane(unit3(n), dimension);
}

CentralPlane CentralPlane::from_normal(const Vec2& normal) { return from_normal(Vec3{normal[0], normal[1], 0.0}, 2); }

double CentralPlane::signed_distance(const Vec3& p) const { return dot3(normal_, p); }

Vec3 CentralPlane::reflect(const Vec3& p) const {
  const double s = 2.0 * signed_distance(p);
  return {p[0] - s * normal_[0], p[1] - s * normal_[1], p[2] - s * normal_[2]};
}

std::pair<Vec3, Vec3> perpendicular_basis(const Vec3& axis) {
  const Vec3 a = unit3(axis);
  // Least aligned coordinate vector as the seed.
  int m = 0;
  for (int t = 1; t < 3; ++t)
    if (std::fabs(a[t]) < std::fabs(a[m])) m = t;
  Vec3 e{0.0, 0.0, 0.0};
  e[m] = 1.0;
  const Vec3 u = unit3(cross3(a, e));
  const Vec3 w = cross3(a, u);
  return {u, w};
}

CentralPlane axis_plane(const Vec3& axis, double phi) {
  const auto [u, w] = perpendicular_basis(axis);
  const double c = std::cos(phi), s = std::sin(phi);
  return CentralPlane::from_normal(Vec3{c * u[0] + s * w[0], c * u[1] + s * w[1], c * u[2] + s * w[2]});
}

// ---------------------------------------------------------------- polygons

double PolygonBody::area() const {
  double a = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

double PolygonBody::perimeter() const {
  double s = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    s += std::hypot(q[0] - p[0], q[1] - p[1]);
  }
  return s;
}

double PolygonBody::free_perimeter() const {
  const double limit = ambient.radius() - 1.5 * resolution;
  double s = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    if (std::hypot(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])) < limit) s += std::hypot(q[0] - p[0], q[1] - p[1]);
  }
  return s;
}

PolygonBody polygon_lens(const LensShape& lens, double h) {
  if (lens.ambient.n() != 2) throw std::domain_error("polygon_lens: lens must be 2-dimensional");
  if (!(h > 0.0)) throw std::domain_error("polygon_lens: h must be > 0");
  const double R = lens.ambient.radius();
  PolygonBody body{lens.ambient, h, {}, Vec2{1.0, 0.0}};
  const double tu = lens.theta_u;
  const int nu = std::max(2, static_cast<int>(std::ceil(2.0 * tu * R / h)));
  for (int t = 0; t < nu; ++t) {
    const double a = -tu + 2.0 * tu * t / nu;
    body.vertices.push_back({R * std::cos(a), R * std::sin(a)});
  }
  if (lens.flat_cut) {
    const int nf = 2 * std::max(1, static_cast<int>(std::ceil(R / h)));
    for (int t = 0; t < nf; ++t) body.vertices.push_back({0.0, R - 2.0 * R * t / nf});
    return body;
  }
  const double tb = lens.theta_b;
  const double d = lens.center_dist;
  const double rho = lens.rho;
  // Even count so the tip on the axis is a vertex.
  int nb = std::max(2, static_cast<int>(std::ceil(2.0 * tb * rho / h)));
  nb += nb % 2;
  for (int t = 0; t < nb; ++t) {
    const double a = tb - 2.0 * tb * t / nb;
    body.vertices.push_back({d - rho * std::cos(a), rho * std::sin(a)});
  }
  body.vertices[nu] = {R * std::cos(tu), R * std::sin(tu)};
  body.vertices[nu + nb / 2] = {d - rho, 0.0};
  return body;
}

PolygonBody polygon_disc(int n, double radius, double h) {
  if (n != 2) throw std::domain_error("polygon_disc: n must be 2");
  const BallGeometry U = BallGeometry::unit_ball(2);
  if (!(radius > 0.0 && radius <= U.radius())) throw std::domain_error("polygon_disc: radius must lie in (0, R]");
  if (!(h > 0.0)) throw std::domain_error("polygon_disc: h must be > 0");
  PolygonBody body{U, h, {}, Vec2{1.0, 0.0}};
  int m = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * radius / h)));
  m += m % 2;
  for (int t = 0; t < m; ++t) {
    const double a = 2.0 * kPi * t / m;
    body.vertices.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return body;
}

void write_polygon_csv(std::ostream& os, const PolygonBody& body) {
  char buf[64];
  os << "x,y\n";
  for (const auto& v : body.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v[0], v[1]);
    os << buf;
  }
}

PolygonBody read_polygon_csv(std::istream& is, double resolution) {
  PolygonBody body{BallGeometry::unit_ball(2), resolution, {}, std::nullopt};
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y", 0) != 0) throw std::invalid_argument("polygon CSV: missing x,y header");
  const double limit = body.ambient.radius() + resolution;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("polygon CSV: malformed row '" + line + "'");
    const Vec2 v{std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))};
    if (std::hypot(v[0], v[1]) > limit) throw std::invalid_argument("polygon CSV: vertex outside U");
    body.vertices.push_back(v);
  }
  if (body.vertices.size() < 3) throw std::invalid_argument("polygon CSV: need at least 3 vertices");
  if (body.area() < 0.0) std::reverse(body.vertices.begin(), body.vertices.end());
  return body;
}

// ---------------------------------------------------------------- voxels

struct VoxelBody::Cache {
  std::once_flag once;
  std::unique_ptr<detail::FaceSet> faces;
};

VoxelBody::VoxelBody(BallGeometry ambient, double h, int cells)
    : ambient_(ambient), h_(h), cells_(cells), origin_(-0.5 * cells * h),
      columns_(static_cast<std::size_t>(cells) * cells), cache_(std::make_shared<Cache>()) {}

const detail::FaceSet& VoxelBody::face_set() const {
  std::call_once(cache_->once,
                 [&] { cache_->faces = std::make_unique<detail::FaceSet>(detail::weighted_faces(*this)); });
  return *cache_->faces;
}

VoxelBody VoxelBody::empty(double h) {
  const BallGeometry U = BallGeometry::unit_ball(3);
  if (!(h > 0.0 && h <= U.radius() / 4.0)) throw std::domain_error("voxel resolution h must lie in (0, R/4]");
  const double cells = std::ceil(2.0 * U.radius() / h - 1e-9);
  if (cells > 4096) throw std::domain_error("voxel resolution too fine (more than 4096 cells per axis)");
  return VoxelBody(U, h, static_cast<int>(cells));
}

void VoxelBody::set_axis(const Vec3& axis) { axis_ = unit3(axis); }

void VoxelBody::set_column(int i, int j, std::vector<Run> runs) {
  columns_[index(i, j)] = std::move(runs);
  cache_ = std::make_shared<Cache>();
}

bool VoxelBody::occupied(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i >= cells_ || j >= cells_ || k >= cells_) return false;
  const auto& runs = columns_[index(i, j)];
  auto it = std::upper_bound(runs.begin(), runs.end(), k, [](int v, const Run& r) { return v < r.k0; });
  if (it == runs.begin()) return false;
  --it;
  return k < it->k1;
}

int VoxelBody::nearest(double x) const { return static_cast<int>(std::floor((x - origin_) / h_)); }

bool VoxelBody::occupied_near(const Vec3& p) const { return occupied(nearest(p[0]), nearest(p[1]), nearest(p[2])); }

std::int64_t VoxelBody::voxel_count() const {
  std::int64_t c = 0;
  for (const auto& col : columns_)
    for (const auto& r : col) c += r.k1 - r.k0;
  return c;
}

double VoxelBody::volume() const { return static_cast<double>(voxel_count()) * h_ * h_ * h_; }

namespace {

bool u_column(double R, double x, double y, std::pair<double, double>& out) {
  return ball_column({0.0, 0.0, 0.0}, R, x, y, out);
}

} // namespace

VoxelBody voxel_lens(const LensShape& lens, double h) {
  if (lens.ambient.n() != 3) throw std::domain_error("voxel_lens: lens must be 3-dimensional");
  const double R = lens.ambient.radius();
  VoxelBody body = VoxelBody::from_columns(h, [&](double x, double y) {
    VoxelBody::ColumnIntervals out;
    std::pair<double, double> u;
    if (!u_column(R, x, y, u)) return out;
    if (lens.flat_cut) {
      if (u.second >= 0.0) out.push_back({std::max(0.0, u.first), u.second});
      return out;
    }
    std::pair<double, double> b;
    if (!ball_column({0.0, 0.0, lens.center_dist}, lens.rho, x, y, b)) return out;
    const double lo = std::max(u.first, b.first), hi = std::min(u.second, b.second);
    if (lo <= hi) out.push_back({lo, hi});
    return out;
  });
  body.set_axis({0.0, 0.0, 1.0});
  return body;
}

VoxelBody voxel_ball(double radius, double h) {
  const double R = BallGeometry::unit_ball(3).radius();
  if (!(radius > 0.0 && radius <= R)) throw std::domain_error("voxel_ball: radius must lie in (0, R]");
  VoxelBody body = VoxelBody::from_columns(h, [&](double x, double y) {
    VoxelBody::ColumnIntervals out;
    std::pair<double, double> b;
    if (ball_column({0.0, 0.0, 0.0}, radius, x, y, b)) out.push_back(b);
    return out;
  });
  body.set_axis({0.0, 0.0, 1.0});
  return body;
}

VoxelBody random_blob(std::uint64_t seed, double h) {
  const double R = BallGeometry::unit_ball(3).radius();
  std::mt19937_64 rng(seed);
  const int count = 3 + static_cast<int>(rng() % 6);
  std::vector<std::pair<Vec3, double>> balls;
  while (static_cast<int>(balls.size()) < count) {
    Vec3 c{0.0, 0.0, 0.0};
    for (double& v : c) v = (2.0 * uniform01(rng) - 1.0) * 0.6 * R;
    if (dot3(c, c) > 0.36 * R * R) continue;
    balls.push_back({c, (0.15 + 0.25 * uniform01(rng)) * R});
  }
  return VoxelBody::from_columns(h, [&](double x, double y) {
    VoxelBody::ColumnIntervals out;
    std::pair<double, double> u;
    if (!u_column(R, x, y, u)) return out;
    for (const auto& [c, r] : balls) {
      std::pair<double, double> b;
      if (!ball_column(c, r, x, y, b)) continue;
      const double lo = std::max(u.first, b.first), hi = std::min(u.second, b.second);
      if (lo <= hi) out.push_back({lo, hi});
    }
    return out;
  });
}

// ---------------------------------------------------------------- faces

namespace detail {

namespace {

struct OwnedRun {
  std::int32_t k0, k1;
  int owner;  // 0: first column only, 1: second only
};

// Symmetric difference of two sorted run lists.
std::vector<OwnedRun> xor_runs(const std::vector<VoxelBody::Run>& a, const std::vector<VoxelBody::Run>& b) {
  std::vector<std::int32_t> cuts;
  cuts.reserve(2 * (a.size() + b.size()));
  for (const auto& r : a) {
    cuts.push_back(r.k0);
    cuts.push_back(r.k1);
  }
  for (const auto& r : b) {
    cuts.push_back(r.k0);
    cuts.push_back(r.k1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<OwnedRun> out;
  std::size_t ia = 0, ib = 0;
  for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
    const std::int32_t k = cuts[t];
    while (ia < a.size() && a[ia].k1 <= k) ++ia;
    while (ib < b.size() && b[ib].k1 <= k) ++ib;
    const bool in_a = ia < a.size() && a[ia].k0 <= k;
    const bool in_b = ib < b.size() && b[ib].k0 <= k;
    if (in_a != in_b) out.push_back({k, cuts[t + 1], in_a ? 0 : 1});
  }
  return out;
}

} // namespace

std::vector<Face> boundary_faces(const VoxelBody& body) {
  const int n = body.cells();
  const double h = body.resolution();
  const double o = body.origin();
  static const std::vector<VoxelBody::Run> none;
  std::vector<Face> faces;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& r : body.column(i, j)) {
        faces.push_back({{body.center(i), body.center(j), o + r.k0 * h}, 2, -1});
        faces.push_back({{body.center(i), body.center(j), o + r.k1 * h}, 2, +1});
      }
  // Faces between column pairs along x (axis 0) and y (axis 1).
  for (int axis = 0; axis < 2; ++axis) {
    for (int a = -1; a < n; ++a) {
      for (int j = 0; j < n; ++j) {
        const auto& lo = a < 0 ? none : (axis == 0 ? body.column(a, j) : body.column(j, a));
        const auto& hi = a + 1 >= n ? none : (axis == 0 ? body.column(a + 1, j) : body.column(j, a + 1));
        if (lo.empty() && hi.empty()) continue;
        const double plane = o + (a + 1) * h;
        for (const auto& r : xor_runs(lo, hi)) {
          for (std::int32_t k = r.k0; k < r.k1; ++k) {
            Face f;
            f.c[axis] = plane;
            f.c[1 - axis] = body.center(j);
            f.c[2] = body.center(k);
            f.axis = static_cast<std::int8_t>(axis);
            f.sign = r.owner == 0 ? 1 : -1;
            faces.push_back(f);
          }
        }
      }
    }
  }
  return faces;
}

FaceIndex::FaceIndex(const std::vector<Face>& faces, double origin, double extent, double bucket)
    : faces_(&faces), origin_(origin), bucket_(bucket) {
  g_ = std::max(1, static_cast<int>(std::ceil(extent / bucket)) + 1);
  const std::size_t nb = static_cast<std::size_t>(g_) * g_ * g_;
  start_.assign(nb + 1, 0);
  auto key = [&](const Face& f) {
    std::size_t k = 0;
    for (int a = 0; a < 3; ++a) {
      const int c = std::clamp(static_cast<int>(std::floor((f.c[a] - origin_) / bucket_)), 0, g_ - 1);
      k = k * g_ + c;
    }
    return k;
  };
  for (const auto& f : faces) ++start_[key(f) + 1];
  for (std::size_t b = 0; b < nb; ++b) start_[b + 1] += start_[b];
  order_.resize(faces.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::uint32_t t = 0; t < faces.size(); ++t) order_[fill[key(faces[t])]++] = t;
}

double incidence_sigma(const VoxelBody& body) {
  const double h = body.resolution();
  return std::max(6.0 * h, std::sqrt(h * body.ambient().radius()));
}

Vec3 normal_from_faces(const FaceIndex& index, const Vec3& p, double sigma) {
  Vec3 acc{0.0, 0.0, 0.0};
  const double inv = 1.0 / (9.0 * sigma * sigma);
  index.visit(p, 3.0 * sigma, [&](const Face& f, double d2) {
    const double t = 1.0 - d2 * inv;
    acc[f.axis] += f.sign * t * t;
  });
  const double len = std::sqrt(dot3(acc, acc));
  if (!(len > 0.0)) return {0.0, 0.0, 0.0};
  return {acc[0] / len, acc[1] / len, acc[2] / len};
}

FaceSet weighted_faces(const VoxelBody& body) {
  FaceSet set;
  set.faces = boundary_faces(body);
  const double h = body.resolution();
  const double sigma = kAreaSigmaCells * h;
  const FaceIndex index(set.faces, body.origin(), body.cells() * h, 3.0 * sigma);
  const double limit = body.ambient().radius() - 1.5 * h;
  set.weight.resize(set.faces.size());
  set.free.resize(set.faces.size());
  for (std::size_t t = 0; t < set.faces.size(); ++t) {
    const Face& f = set.faces[t];
    const Vec3 nrm = normal_from_faces(index, f.c, sigma);
    const double l1 = std::fabs(nrm[0]) + std::fabs(nrm[1]) + std::fabs(nrm[2]);
    set.weight[t] = l1 > 0.0 ? h * h / l1 : h * h;
    set.free[t] = std::sqrt(dot3(f.c, f.c)) < limit ? 1 : 0;
  }
  return set;
}

} // namespace detail

double free_area(const VoxelBody& body) {
  const auto& set = body.face_set();
  double s = 0.0;
  for (std::size_t t = 0; t < set.faces.size(); ++t)
    if (set.free[t]) s += set.weight[t];
  return s;
}

double boundary_area(const VoxelBody& body) {
  const auto& set = body.face_set();
  double s = 0.0;
  for (double w : set.weight) s += w;
  return s;
}

Vec3 estimate_normal(const VoxelBody& body, const Vec3& point, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("estimate_normal: sigma must be > 0");
  const auto faces = detail::boundary_faces(body);
  const detail::FaceIndex index(faces, body.origin(), body.cells() * body.resolution(), 3.0 * sigma);
  return detail::normal_from_faces(index, point, sigma);
}

// ---------------------------------------------------------------- io

void write_occupancy(const VoxelBody& body, const std::string& header_path, const std::string& data_path) {
  const int n = body.cells();
  nlohmann::ordered_json hdr;
  hdr["dimension"] = 3;
  hdr["cells"] = {n, n, n};
  hdr["resolution"] = body.resolution();
  hdr["origin"] = {body.origin(), body.origin(), body.origin()};
  hdr["order"] = "index (i * N + j) * N + k, k along z fastest";
  hdr["encoding"] = "uint8 0/1";
  if (body.axis()) hdr["axis"] = *body.axis();
  std::ofstream h(header_path);
  if (!h) throw std::runtime_error("cannot open " + header_path);
  h << hdr.dump(2) << '\n';
  std::ofstream d(data_path, std::ios::binary);
  if (!d) throw std::runtime_error("cannot open " + data_path);
  std::vector<char> col(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::fill(col.begin(), col.end(), 0);
      for (const auto& r : body.column(i, j)) std::fill(col.begin() + r.k0, col.begin() + r.k1, 1);
      d.write(col.data(), static_cast<std::streamsize>(col.size()));
    }
}

VoxelBody read_occupancy(const std::string& header_path, const std::string& data_path) {
  std::ifstream h(header_path);
  if (!h) throw std::runtime_error("cannot open " + header_path);
  const auto hdr = nlohmann::json::parse(h);
  if (hdr.at("dimension").get<int>() != 3) throw std::invalid_argument("occupancy header: dimension must be 3");
  VoxelBody body = VoxelBody::empty(hdr.at("resolution").get<double>());
  const int n = body.cells();
  for (const auto& c : hdr.at("cells"))
    if (c.get<int>() != n) throw std::invalid_argument("occupancy header: cells do not match resolution");
  std::ifstream d(data_path, std::ios::binary);
  if (!d) throw std::runtime_error("cannot open " + data_path);
  std::vector<char> col(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!d.read(col.data(), static_cast<std::streamsize>(col.size())))
        throw std::invalid_argument("occupancy data: truncated");
      std::vector<VoxelBody::Run> runs;
      for (int k = 0; k < n; ++k) {
        if (!col[k]) continue;
        if (!runs.empty() && runs.back().k1 == k)
          ++runs.back().k1;
        else
          runs.push_back({k, k + 1});
      }
      body.set_column(i, j, std::move(runs));
    }
  if (hdr.contains("axis")) body.set_axis(hdr["axis"].get<Vec3>());
  return body;
}

} // namespace isoball
