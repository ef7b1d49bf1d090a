// Acceptance criteria; one PASS/FAIL line each, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "isoball/bound.hpp"
#include "isoball/cli.hpp"
#include "isoball/geometry.hpp"
#include "isoball/lemma_suite.hpp"
#include "isoball/lens.hpp"
#include "isoball/variational.hpp"
#include "oracles.hpp"

using namespace isoball;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= budget_s) {
    v.ok = false;
    v.detail += "; over the " + fmt("%.0f", budget_s) + " s budget";
  }
  if (!v.ok) ++failures;
  std::printf("[%s] %d %s: %s (%.1f s)\n", v.ok ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

Verdict special_functions() {
  double worst = 0.0, worst_comp = 0.0;
  for (int n = 2; n <= 12; ++n)
    for (int i = 0; i < 25; ++i) {
      const double theta = pi * (i + 0.5) / 25.0;
      const BallGeometry g(n, 1.0);
      const double v = cap_volume(CapSpec(g, theta)), a = cap_area(CapSpec(g, theta));
      worst = std::max(worst, std::fabs(v / oracle::cap_volume_slices(n, 1.0, theta) - 1.0));
      worst = std::max(worst, std::fabs(a / oracle::cap_area_revolution(n, 1.0, theta) - 1.0));
      const double vc = cap_volume(CapSpec(g, pi - theta)), ac = cap_area(CapSpec(g, pi - theta));
      worst_comp = std::max(worst_comp, std::fabs((v + vc) / ball_volume(n, 1.0) - 1.0));
      worst_comp = std::max(worst_comp, std::fabs((a + ac) / sphere_area(n, 1.0) - 1.0));
    }
  return {worst <= 1e-8 && worst_comp <= 1e-10,
          "max rel error vs quadrature " + fmt("%.2e", worst) + " (<= 1e-8), complement " + fmt("%.2e", worst_comp) +
              " (<= 1e-10)"};
}

Verdict lens_closed_forms() {
  double worst_sigma = 0.0;
  for (int n : {2, 3, 6, 10}) {
    const LensShape l = solve_rho_for_volume(n, 0.15);
    const double R = l.ambient.radius();
    const auto v = oracle::mc_lens_volume(n, R, l.rho, l.center_dist, 1000000, 100 + n);
    const auto a = oracle::mc_lens_free_area(n, R, l.rho, l.center_dist, 0.01 * R, 1000000, 200 + n);
    worst_sigma = std::max(worst_sigma, std::fabs(v.mean - lens_volume(l)) / v.stderr_);
    worst_sigma = std::max(worst_sigma, std::fabs(a.mean - lens_free_area(l)) / a.stderr_);
  }
  double planar = 0.0;
  const double R2 = unit_volume_radius(2);
  for (double rho : {0.05, 0.2, R2, 1.5, 20.0}) {
    const LensShape l = lens_from_rho(2, rho);
    const auto ref = oracle::planar_lens(R2, rho, std::hypot(R2, rho));
    planar = std::max({planar, std::fabs(lens_volume(l) - ref.area), std::fabs(lens_free_area(l) - ref.arc)});
  }
  return {worst_sigma <= 4.0 && planar <= 1e-10,
          "worst MC deviation " + fmt("%.2f", worst_sigma) + " stderr (<= 4), planar formula " + fmt("%.1e", planar) +
              " (<= 1e-10)"};
}

Verdict key_lemma() {
  double worst_gap = 0.0, worst_slope = 0.0;
  bool local_min = true;
  for (int n : {2, 3, 5})
    for (double eps : {0.05, 0.1, 0.25}) {
      const auto r = minimize_profile(n, eps, 2000, 1);
      const LensShape l = solve_rho_for_volume(n, eps);
      const double lens = lens_free_area(l);
      worst_gap = std::max(worst_gap, std::fabs(r.area - lens) / lens);
      const double d0 = l.center_dist;
      auto A = [&](double d) { return general_cap_free_area_at_volume(n, eps, d); };
      const double a0 = A(d0);
      const double step = 1e-4 * d0;
      worst_slope = std::max(worst_slope, std::fabs(A(d0 + step) - A(d0 - step)) / (2.0 * step) * d0 / a0);
      for (double rel : {1e-3, 1e-2, 5e-2}) local_min = local_min && A(d0 * (1 + rel)) > a0 && A(d0 * (1 - rel)) > a0;
    }
  return {worst_gap <= 5e-3 && worst_slope <= 1e-4 && local_min,
          "max optimum/lens gap " + fmt("%.2e", worst_gap) + " (<= 5e-3), normalized dA/dd " + fmt("%.1e", worst_slope) +
              " (<= 1e-4), orthogonal d is a local minimum: " + (local_min ? "yes" : "no")};
}

Verdict euler_lagrange() {
  double worst = 0.0;
  for (int n : {2, 3, 5})
    for (double eps : {0.05, 0.15, 0.3}) {
      const LensShape l = solve_rho_for_volume(n, eps);
      const Profile p = lens_profile(l, uniform_grid(l.ambient.radius(), 4000));
      worst = std::max(worst, euler_lagrange_residual(p, (n - 1) / l.rho));
    }
  return {worst <= 1e-3, "max residual " + fmt("%.2e", worst) + " (<= 1e-3)"};
}

Verdict bound_pipeline() {
  double worst_gap = 0.0;
  bool decreasing = true, zero = true;
  for (int n : {2, 10, 50}) {
    for (double eps : {0.01, 0.1, 0.3})
      worst_gap = std::max(worst_gap, std::fabs(2.0 * growth_ode(n, eps).expansion_time - distance_bound(n, eps)));
    double prev = INFINITY;
    for (int i = 0; i <= 40; ++i) {
      const double eps = 0.005 + i * (0.5 - 0.005) / 40;
      const double d = distance_bound(n, eps);
      decreasing = decreasing && d < prev;
      prev = d;
    }
    zero = zero && distance_bound(n, 0.5) == 0.0 && growth_ode(n, 0.5).expansion_time == 0.0;
  }
  return {worst_gap <= 1e-4 && decreasing && zero,
          "max |2 t - D| " + fmt("%.2e", worst_gap) + " (<= 1e-4), strictly decreasing: " + (decreasing ? "yes" : "no") +
              ", D(1/2) = 0: " + (zero ? "yes" : "no")};
}

Verdict dimension_scan_evidence() {
  std::vector<int> ns;
  for (int n = 2; n <= 100; ++n) ns.push_back(n);
  const DimensionScan s = dimension_scan(0.01, ns);
  bool complete = s.rows.size() == ns.size();
  for (const auto& r : s.rows) complete = complete && r.ok();
  // the monotone tail must cover the upper half of the scanned range
  const bool tail = complete && s.knee && s.rows[*s.knee].n <= 51;
  return {complete && tail,
          "rows " + std::to_string(s.rows.size()) + ", |D(n+1) - D(n)| decreasing from n = " +
              (s.knee ? std::to_string(s.rows[*s.knee].n) : std::string("-")) + ", observed sup D = " +
              fmt("%.10f", s.sup_d) + " at n = " + std::to_string(s.sup_n)};
}

Verdict lemma_suite() {
  LemmaSuiteConfig cfg;
  cfg.resolution_divisor = 200.0;
  const LemmaReport rep = run_lemma_suite(cfg);
  int skipped = 0;
  for (const auto& c : rep.checks) skipped += c.skipped;
  const LemmaCheck* f = rep.first_failure();
  std::string detail = std::to_string(rep.checks.size()) + " checks at h = R/200, " + std::to_string(skipped) +
                       " skipped";
  if (f) detail += ", first failure " + f->lemma + "/" + f->name + " measured " + fmt("%.3e", f->measured);
  return {rep.all_passed() && skipped == 0, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "isoball_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> commands = {
      {"profile", "--n", "3", "--eps-grid", "log:1e-4:0.5:50"},
      {"profile", "--n", "6", "--eps-grid", "lin:0.05:0.5:10", "--format", "json"},
      {"distance", "--eps", "0.01", "--n-range", "2:40"},
      {"variational", "--n", "3", "--eps", "0.1", "--m", "2000", "--seed", "7"},
      {"verify-lemmas", "--h", "R/40", "--seed", "3"},
  };
  std::ostringstream sink;
  int files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const fs::path a = root / ("run" + std::to_string(i)), b = root / ("replay" + std::to_string(i));
    auto args = commands[i];
    args.push_back("--out");
    args.push_back(a.string());
    const int code = cli::run(args, sink, sink);
    if (code != 0) return {false, commands[i][0] + " exited with " + std::to_string(code)};
    const int again = cli::run({"replay", (a / (commands[i][0] + ".manifest.json")).string(), "--out", b.string()},
                               sink, sink);
    if (again != code) return {false, commands[i][0] + " replay exited with " + std::to_string(again)};
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      if (slurp(e.path()) != slurp(b / e.path().filename()))
        return {false, commands[i][0] + ": " + e.path().filename().string() + " differs after replay"};
    }
  }
  fs::remove_all(root);
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                    " files byte-identical after replay from their manifests"};
}

}  // namespace

int main() {
  criterion(1, "special functions", 10, special_functions);
  criterion(2, "lens closed forms", 120, lens_closed_forms);
  criterion(3, "key-lemma cross-check", 600, key_lemma);
  criterion(4, "Euler-Lagrange residual of the lens", 60, euler_lagrange);
  criterion(5, "bound pipeline consistency", 120, bound_pipeline);
  criterion(6, "dimension scan", 300, dimension_scan_evidence);
  criterion(7, "symmetry lemma suite", 300, lemma_suite);
  criterion(8, "determinism", 600, determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
