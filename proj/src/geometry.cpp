#include "isoball/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "isoball/errors.hpp"
#include "isoball/parallel.hpp"

extern "C" double lgamma_r(double, int*);

namespace isoball {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(int n, int min_n, const char* what) {
  if (n < min_n)
    throw std::domain_error(std::string(what) + ": n must be >= " + std::to_string(min_n));
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

// Continued fraction for I_x(a,b) (modified Lentz); converges fast for
// x < (a+1)/(a+b+2).
double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 20000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("reg_inc_beta: continued fraction did not converge");
}

// log I_x(a,b) on the side where the continued fraction is used directly.
double log_ibeta_direct(double x, double y, double a, double b) {
  const double front = a * std::log(x) + b * std::log(y) - log_beta(a, b) - std::log(a);
  return front + std::log(beta_continued_fraction(x, a, b));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

} // namespace

BallGeometry::BallGeometry(int n, double radius) {
  require_dimension(n, 2, "BallGeometry");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::domain_error("BallGeometry: radius must be positive and finite");
  n_ = n;
  radius_ = radius;
  volume_ = ball_volume(n, radius);
}

BallGeometry BallGeometry::unit_ball(int n) {
  require_dimension(n, 2, "BallGeometry::unit_ball");
  return BallGeometry(n, unit_volume_radius(n), 1.0);
}

CapSpec::CapSpec(BallGeometry geometry, double colatitude) : geometry_(geometry), colatitude_(colatitude) {
  if (!(colatitude >= 0.0 && colatitude <= kPi))
    throw std::domain_error("CapSpec: colatitude must lie in [0, pi]");
}

double log_gamma(double x) {
  int sign = 0;
  return lgamma_r(x, &sign);
}

double log_unit_ball_volume(int n) {
  require_dimension(n, 1, "unit_ball_volume");
  return 0.5 * n * std::log(kPi) - log_gamma(0.5 * n + 1.0);
}

double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

double ball_volume(int n, double radius) {
  require_dimension(n, 1, "ball_volume");
  if (!(radius > 0.0)) throw std::domain_error("ball_volume: radius must be > 0");
  return std::exp(log_unit_ball_volume(n) + n * std::log(radius));
}

double unit_volume_radius(int n) {
  require_dimension(n, 1, "unit_volume_radius");
  return std::exp(log_gamma(0.5 * n + 1.0) / n) / std::sqrt(kPi);
}

double sphere_area(int n, double radius) {
  require_dimension(n, 2, "sphere_area");
  if (!(radius > 0.0)) throw std::domain_error("sphere_area: radius must be > 0");
  return std::exp(std::log(static_cast<double>(n)) + log_unit_ball_volume(n) + (n - 1) * std::log(radius));
}

double log_reg_inc_beta(double x, double y, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
    throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (y == 0.0) return 0.0;
  if (x <= (a + 1.0) / (a + b + 2.0)) return log_ibeta_direct(x, y, a, b);
  const double complement = std::exp(log_ibeta_direct(y, x, b, a));
  return std::log1p(-complement);
}

double reg_inc_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be > 0");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x <= (a + 1.0) / (a + b + 2.0)) return std::exp(log_ibeta_direct(x, 1.0 - x, a, b));
  return 1.0 - std::exp(log_ibeta_direct(1.0 - x, x, b, a));
}

double log_cap_volume(int n, double radius, double colatitude) {
  const double s = std::sin(colatitude);
  const double c = std::cos(colatitude);
  return log_unit_ball_volume(n) + n * std::log(radius) - std::log(2.0) +
         log_reg_inc_beta(s * s, c * c, 0.5 * (n + 1), 0.5);
}

double log_cap_area(int n, double radius, double colatitude) {
  const double s = std::sin(colatitude);
  const double c = std::cos(colatitude);
  return std::log(0.5 * n) + log_unit_ball_volume(n) + (n - 1) * std::log(radius) +
         log_reg_inc_beta(s * s, c * c, 0.5 * (n - 1), 0.5);
}

double cap_volume(const CapSpec& spec) {
  const auto& g = spec.geometry();
  const double theta = spec.colatitude();
  if (theta == 0.0) return 0.0;
  if (theta <= 0.5 * kPi) return std::exp(log_cap_volume(g.n(), g.radius(), theta));
  return g.volume() - std::exp(log_cap_volume(g.n(), g.radius(), kPi - theta));
}

double cap_area(const CapSpec& spec) {
  const auto& g = spec.geometry();
  const double theta = spec.colatitude();
  if (theta == 0.0) return 0.0;
  if (theta <= 0.5 * kPi) return std::exp(log_cap_area(g.n(), g.radius(), theta));
  return sphere_area(g.n(), g.radius()) - std::exp(log_cap_area(g.n(), g.radius(), kPi - theta));
}

McEstimate mc_volume_estimate(const PointPredicate& indicator, const BallGeometry& geometry,
                              std::int64_t samples, std::uint64_t seed, int threads) {
  if (samples < 1) throw std::domain_error("mc_volume_estimate: samples must be >= 1");
  constexpr std::int64_t chunk = 1 << 16;
  const std::int64_t chunks = (samples + chunk - 1) / chunk;
  const int n = geometry.n();
  const double radius = geometry.radius();
  std::vector<std::int64_t> hits(static_cast<std::size_t>(chunks), 0);

  parallel_for(
      static_cast<std::size_t>(chunks),
      [&](std::size_t c) {
        const std::uint64_t stream = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(c)));
        std::mt19937_64 gen(stream);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::vector<double> point(static_cast<std::size_t>(n));
        const std::int64_t begin = static_cast<std::int64_t>(c) * chunk;
        const std::int64_t end = std::min(samples, begin + chunk);
        std::int64_t local = 0;
        for (std::int64_t s = begin; s < end; ++s) {
          double norm2 = 0.0;
          do {
            norm2 = 0.0;
            for (auto& v : point) {
              v = normal(gen);
              norm2 += v * v;
            }
          } while (norm2 == 0.0);
          const double scale = radius * std::pow(uniform(gen), 1.0 / n) / std::sqrt(norm2);
          for (auto& v : point) v *= scale;
          if (indicator(point)) ++local;
        }
        hits[c] = local;
      },
      threads);

  McEstimate out;
  out.samples = samples;
  for (auto h : hits) out.hits += h;
  const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.estimate = geometry.volume() * p;
  out.stderr_ = geometry.volume() * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return out;
}

} // namespace isoball
