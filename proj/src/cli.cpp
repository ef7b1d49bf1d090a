#include "isoball/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "isoball/bound.hpp"
#include "isoball/errors.hpp"
#include "isoball/lemma_suite.hpp"
#include "isoball/lens.hpp"
#include "isoball/parallel.hpp"
#include "isoball/variational.hpp"

#ifndef ISOBALL_VERSION
#define ISOBALL_VERSION "0.0.0"
#endif

namespace isoball::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct ArgError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Shortest round-trip form; independent of locale and thread count.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

ojson jnum(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ArgError(what + ": cannot parse '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ArgError(what + ": cannot parse '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// A table written either as CSV with a '#' comment header or as one JSON document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<ojson>> rows;  // numbers, strings or null
  ojson meta = ojson::object();
};

std::string cell(const ojson& v) {
  if (v.is_null()) return "nan";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return num(v.get<double>());
}

std::string meta_value(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return num(v.get<double>());
  return v.dump();
}

void write_table(const fs::path& path, const std::string& command, const Table& t, const std::string& format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.filename().string());
  if (format == "json") {
    ojson doc;
    doc["tool"] = "isoball";
    doc["version"] = ISOBALL_VERSION;
    doc["command"] = command;
    doc["meta"] = t.meta;
    doc["columns"] = t.columns;
    ojson rows = ojson::array();
    for (const auto& r : t.rows) rows.push_back(r);
    doc["rows"] = rows;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# isoball " << ISOBALL_VERSION << ' ' << command << '\n';
  for (const auto& [k, v] : t.meta.items()) os << "# " << k << " = " << meta_value(v) << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
    os << '\n';
  }
}

struct Outcome {
  int code = kOk;
  std::string message;
  std::optional<std::string> warning;
};

void write_manifest(const fs::path& dir, const std::string& command, const ojson& config,
                    const std::vector<std::string>& outputs, const Outcome& outcome) {
  ojson m;
  m["tool"] = "isoball";
  m["version"] = ISOBALL_VERSION;
  m["command"] = command;
  m["config"] = config;
  m["outputs"] = outputs;
  m["exit_code"] = outcome.code;
  m["warning"] = outcome.warning ? ojson(*outcome.warning) : ojson(nullptr);
  std::ofstream os(dir / (command + ".manifest.json"), std::ios::binary);
  if (!os) throw std::runtime_error("cannot write manifest");
  os << m.dump(2) << '\n';
}

int require_n(const ojson& c, const char* key = "n") {
  const int n = c.at(key).get<int>();
  if (n < 2) throw ArgError("n must be >= 2");
  return n;
}

double require_eps(const ojson& c, bool allow_half) {
  const double eps = c.at("eps").get<double>();
  if (!(eps > 0.0)) throw ArgError("eps must be > 0");
  if (allow_half ? eps > 0.5 : eps >= 0.5) throw ArgError(allow_half ? "eps must be <= 0.5" : "eps must be < 0.5");
  return eps;
}

std::string extension(const std::string& format) { return format == "json" ? ".json" : ".csv"; }

// ---- profile ---------------------------------------------------------------

Outcome cmd_profile(const ojson& c, const fs::path& dir, std::vector<std::string>& outputs, std::ostream& out) {
  const int n = require_n(c);
  const std::string format = c.at("format");
  const std::vector<double> grid = parse_eps_grid(c.at("eps_grid").get<std::string>());
  for (double e : grid)
    if (!(e > 0.0) || e > 0.5) throw ArgError("eps grid values must lie in (0, 0.5]");

  const auto points = iso_profile(n, grid);
  Table t;
  t.columns = {"eps", "M"};
  t.meta["n"] = n;
  t.meta["eps_grid"] = c.at("eps_grid");
  t.meta["points"] = static_cast<int>(points.size());
  Outcome res;
  for (const auto& p : points) {
    t.rows.push_back({p.eps, jnum(p.m_value)});
    if (!p.ok() && res.code == kOk) {
      res.code = kNumericFailure;
      res.message = "M(eps = " + num(p.eps) + ", n = " + std::to_string(n) + ") failed: " + p.error;
    }
  }
  const std::string name = "profile" + extension(format);
  write_table(dir / name, "profile", t, format);
  outputs.push_back(name);
  if (res.code == kOk) out << "profile: " << points.size() << " points written to " << name << '\n';
  return res;
}

// ---- distance --------------------------------------------------------------

Outcome cmd_distance(const ojson& c, const fs::path& dir, std::vector<std::string>& outputs, std::ostream& out) {
  const double eps = require_eps(c, true);
  const int n_lo = require_n(c, "n_min"), n_hi = c.at("n_max").get<int>();
  if (n_hi < n_lo) throw ArgError("n range is empty");
  if (n_hi > 10000) throw ArgError("n must be <= 10000");
  const double tol = c.at("quad_tol").get<double>();
  const double ode_tol = c.at("ode_tol").get<double>();
  if (!(tol > 0.0) || !(ode_tol > 0.0)) throw ArgError("tolerances must be > 0");
  const std::string format = c.at("format");

  std::vector<int> ns;
  for (int n = n_lo; n <= n_hi; ++n) ns.push_back(n);
  const DimensionScan scan = dimension_scan(eps, ns, tol);

  std::vector<double> ode(ns.size(), std::nan(""));
  std::vector<std::string> ode_error(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    try {
      ode[i] = 2.0 * growth_ode(ns[i], eps, ode_tol).expansion_time;
    } catch (const std::exception& e) {
      ode_error[i] = e.what();
    }
  });

  Outcome res;
  Table t;
  t.columns = {"n", "D_quadrature", "quadrature_error", "D_ode", "gap", "diff_prev"};
  double max_gap = 0.0;
  std::optional<double> prev;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const ScanRow& row = scan.rows[i];
    const double d = row.ok() ? row.d_value : std::nan("");
    const double gap = std::fabs(ode[i] - d);
    if (std::isfinite(gap)) max_gap = std::max(max_gap, gap);
    const double diff = prev && std::isfinite(d) ? d - *prev : std::nan("");
    t.rows.push_back({row.n, jnum(d), jnum(row.abs_error), jnum(ode[i]), jnum(gap), jnum(diff)});
    prev = std::isfinite(d) ? std::optional<double>(d) : std::nullopt;
    if (res.code != kOk) continue;
    if (!row.ok()) {
      res.code = kNumericFailure;
      res.message = "D(eps = " + num(eps) + ", n = " + std::to_string(row.n) + ") failed: " + row.error;
    } else if (!ode_error[i].empty()) {
      res.code = kNumericFailure;
      res.message = "growth ODE at n = " + std::to_string(row.n) + " failed: " + ode_error[i];
    }
  }
  t.meta["eps"] = eps;
  t.meta["n_min"] = n_lo;
  t.meta["n_max"] = n_hi;
  t.meta["quad_tol"] = tol;
  t.meta["ode_tol"] = ode_tol;
  t.meta["sup_D"] = scan.sup_d;
  t.meta["sup_n"] = scan.sup_n;
  t.meta["max_gap"] = max_gap;
  t.meta["monotone_tail_from_n"] =
      scan.knee ? ojson(scan.rows[*scan.knee].n) : ojson(nullptr);
  const std::string name = "distance" + extension(format);
  write_table(dir / name, "distance", t, format);
  outputs.push_back(name);
  if (res.code == kOk)
    out << "distance: sup D = " << num(scan.sup_d) << " at n = " << scan.sup_n << ", max gap " << num(max_gap)
        << '\n';
  return res;
}

// ---- variational -----------------------------------------------------------

Outcome cmd_variational(const ojson& c, const fs::path& dir, std::vector<std::string>& outputs,
                        std::ostream& out) {
  const int n = require_n(c);
  const double eps = require_eps(c, false);
  const int m = c.at("m").get<int>();
  if (m < 100) throw ArgError("m below minimum 100");
  if (m > 200000) throw ArgError("m above maximum 200000");
  const int starts = c.at("starts").get<int>();
  if (starts < 1) throw ArgError("starts must be >= 1");
  const auto seed = c.at("seed").get<std::uint64_t>();
  const std::string format = c.at("format");

  VariationalOptions opt;
  opt.starts = starts;
  const VariationalResult r = minimize_profile(n, eps, m, seed, opt);
  const double lens_area = lens_free_area(solve_rho_for_volume(n, eps));
  const double gap = (r.area - lens_area) / lens_area;
  const double el = euler_lagrange_residual(r.profile, r.multiplier, 3);

  Table t;
  t.columns = {"x", "r", "clipped"};
  for (std::size_t i = 0; i < r.profile.size(); ++i)
    t.rows.push_back({r.profile.grid[i], r.profile.radii[i], static_cast<int>(r.profile.clip_mask[i])});
  t.meta["n"] = n;
  t.meta["eps"] = eps;
  t.meta["m"] = m;
  t.meta["seed"] = seed;
  t.meta["starts"] = starts;
  t.meta["area"] = r.area;
  t.meta["lens_area"] = lens_area;
  t.meta["relative_gap"] = gap;
  t.meta["multiplier"] = r.multiplier;
  t.meta["el_residual"] = jnum(el);
  t.meta["constraint_violation"] = r.constraint_violation;
  t.meta["converged"] = r.converged;
  t.meta["best_start"] = r.starts.empty() ? std::string() : r.starts[r.best_start].label;
  const std::string name = "variational" + extension(format);
  write_table(dir / name, "variational", t, format);
  outputs.push_back(name);

  Outcome res;
  if (!r.converged) {
    res.code = kConvergenceWarning;
    res.warning = r.warning.empty() ? "optimizer did not converge" : r.warning;
    res.message = "variational: " + *res.warning + " (best profile written)";
  }
  out << "variational: area " << num(r.area) << ", lens " << num(lens_area) << ", gap " << num(gap) << '\n';
  return res;
}

// ---- verify-lemmas ---------------------------------------------------------

Outcome cmd_verify(const ojson& c, const fs::path& dir, std::vector<std::string>& outputs, std::ostream& out) {
  const double divisor = parse_resolution(c.at("h").get<std::string>());
  const auto seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
  if (seeds.empty()) throw ArgError("at least one seed is required");
  const int bodies = c.at("random_bodies").get<int>();
  if (bodies < 1) throw ArgError("random-bodies must be >= 1");
  const double lens_eps = c.at("lens_eps").get<double>();
  if (!(lens_eps > 0.0) || !(lens_eps < 0.5)) throw ArgError("lens-eps must lie in (0, 0.5)");
  const std::string format = c.at("format");

  std::vector<LemmaReport> reports;
  for (auto s : seeds) {
    LemmaSuiteConfig cfg;
    cfg.resolution_divisor = divisor;
    cfg.seed = s;
    cfg.random_bodies = bodies;
    cfg.lens_eps = lens_eps;
    reports.push_back(run_lemma_suite(cfg));
  }
  auto status = [](const LemmaCheck& k) { return k.skipped ? "skipped" : k.passed ? "pass" : "fail"; };
  bool consistent = true;
  for (const auto& rep : reports) {
    if (rep.checks.size() != reports[0].checks.size()) consistent = false;
    else
      for (std::size_t i = 0; i < rep.checks.size(); ++i)
        if (std::string(status(rep.checks[i])) != status(reports[0].checks[i])) consistent = false;
  }

  Outcome res;
  for (std::size_t s = 0; s < reports.size() && res.code == kOk; ++s)
    if (const LemmaCheck* f = reports[s].first_failure()) {
      res.code = kNumericFailure;
      res.message = "lemma " + f->lemma + " failed (" + f->name + ", seed " + std::to_string(seeds[s]) +
                    "): measured " + num(f->measured) + " > tolerance " + num(f->tolerance);
    }
  if (res.code == kOk && !consistent) {
    res.code = kNumericFailure;
    res.message = "verdicts differ between seeds";
  }

  const std::string name = "verify-lemmas" + extension(format);
  if (format == "json") {
    ojson doc;
    doc["tool"] = "isoball";
    doc["version"] = ISOBALL_VERSION;
    doc["command"] = "verify-lemmas";
    doc["h"] = reports[0].h;
    doc["resolution"] = c.at("h");
    doc["all_passed"] = res.code == kOk;
    doc["verdicts_consistent"] = consistent;
    doc["first_failure"] = res.code == kOk ? ojson(nullptr) : ojson(res.message);
    ojson runs = ojson::array();
    for (std::size_t s = 0; s < reports.size(); ++s) {
      ojson checks = ojson::array();
      for (const auto& k : reports[s].checks)
        checks.push_back({{"lemma", k.lemma}, {"name", k.name}, {"measured", jnum(k.measured)},
                          {"tolerance", k.tolerance}, {"status", status(k)}, {"note", k.note}});
      runs.push_back({{"seed", seeds[s]}, {"checks", checks}});
    }
    doc["runs"] = runs;
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + name);
    os << doc.dump(2) << '\n';
  } else {
    Table t;
    t.columns = {"seed", "lemma", "check", "measured", "tolerance", "status", "note"};
    t.meta["h"] = reports[0].h;
    t.meta["resolution"] = c.at("h");
    t.meta["all_passed"] = res.code == kOk;
    t.meta["verdicts_consistent"] = consistent;
    for (std::size_t s = 0; s < reports.size(); ++s)
      for (const auto& k : reports[s].checks)
        t.rows.push_back({seeds[s], k.lemma, k.name, jnum(k.measured), k.tolerance, status(k),
                          "\"" + k.note + "\""});
    write_table(dir / name, "verify-lemmas", t, format);
  }
  outputs.push_back(name);

  for (const auto& k : reports[0].checks)
    out << (k.skipped ? "SKIP " : k.passed ? "pass " : "FAIL ") << k.lemma << '/' << k.name << ' '
        << num(k.measured) << (k.note.empty() ? "" : "  (" + k.note + ")") << '\n';
  return res;
}

} // namespace

std::vector<double> parse_eps_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
    const double a = to_double(parts[1], "eps grid"), b = to_double(parts[2], "eps grid");
    const int k = to_int(parts[3], "eps grid");
    if (k < 1) throw ArgError("eps grid needs at least one point");
    if (parts[0] == "log" && !(a > 0.0 && b > 0.0)) throw ArgError("log eps grid needs positive ends");
    std::vector<double> g(k);
    for (int i = 0; i < k; ++i) {
      const double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
      g[i] = parts[0] == "log" ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a);
    }
    // Pin the ends so that e.g. 0.5 is hit exactly.
    g.front() = a;
    g.back() = b;
    return g;
  }
  if (parts.size() != 1) throw ArgError("eps grid must be log:a:b:k, lin:a:b:k or a comma list");
  std::vector<double> g;
  for (const auto& s : split(spec, ',')) g.push_back(to_double(s, "eps grid"));
  if (g.empty()) throw ArgError("eps grid is empty");
  return g;
}

double parse_resolution(const std::string& spec) {
  std::string s = spec;
  if (s.rfind("R/", 0) == 0) s = s.substr(2);
  const double d = to_double(s, "h");
  if (!(d >= 4.0) || d > 2000.0) throw ArgError("h must be R/d with 4 <= d <= 2000");
  return d;
}

int execute(const std::string& command, const ojson& config, const fs::path& out_dir, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> outputs;
  Outcome res;
  try {
    const std::string format = config.at("format");
    if (format != "csv" && format != "json") throw ArgError("format must be csv or json");
    fs::create_directories(out_dir);
    if (command == "profile")
      res = cmd_profile(config, out_dir, outputs, out);
    else if (command == "distance")
      res = cmd_distance(config, out_dir, outputs, out);
    else if (command == "variational")
      res = cmd_variational(config, out_dir, outputs, out);
    else if (command == "verify-lemmas")
      res = cmd_verify(config, out_dir, outputs, out);
    else
      throw ArgError("unknown command '" + command + "'");
  } catch (const ArgError& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed config: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  write_manifest(out_dir, command, config, outputs, res);
  if (!res.message.empty()) err << (res.code == kConvergenceWarning ? "warning: " : "error: ") << res.message << '\n';
  return res.code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds on the distance between two volume-eps bodies in the unit-volume ball", "isoball"};
  app.set_version_flag("--version", std::string("isoball ") + ISOBALL_VERSION);
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::string format = "csv";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  int n = 0;
  std::optional<double> eps;
  std::string eps_grid;
  auto* profile = app.add_subcommand("profile", "Tabulate M(eps, n) over an eps grid");
  profile->add_option("--n", n, "Dimension")->required();
  auto* p_eps = profile->add_option("--eps", eps, "Single eps value");
  profile->add_option("--eps-grid", eps_grid, "log:a:b:k, lin:a:b:k or a comma list")->excludes(p_eps);
  common(profile);

  std::string n_range;
  double quad_tol = 1e-8, ode_tol = 1e-9;
  auto* distance = app.add_subcommand("distance", "D(eps, n) by quadrature and by the growth ODE");
  distance->add_option("--eps", eps, "Volume of each body")->required();
  auto* d_n = distance->add_option("--n", n, "Dimension");
  distance->add_option("--n-range", n_range, "lo:hi, inclusive")->excludes(d_n);
  distance->add_option("--quad-tol", quad_tol)->capture_default_str();
  distance->add_option("--ode-tol", ode_tol)->capture_default_str();
  common(distance);

  int m = 2000, starts = 5;
  std::uint64_t seed = 1;
  auto* variational = app.add_subcommand("variational", "Minimize free area over profiles of revolution");
  variational->add_option("--n", n, "Dimension")->required();
  variational->add_option("--eps", eps, "Volume")->required();
  variational->add_option("--m", m, "Grid intervals")->capture_default_str();
  variational->add_option("--seed", seed)->capture_default_str();
  variational->add_option("--starts", starts)->capture_default_str();
  common(variational);

  std::string h = "R/200";
  std::vector<std::uint64_t> seeds;
  int bodies = 50;
  double lens_eps = 0.2;
  auto* verify = app.add_subcommand("verify-lemmas", "Run the voxel and polygon symmetry checks");
  verify->set_help_flag("--help", "Print this help message and exit");
  verify->add_option("--h", h, "Cell size, R/d")->capture_default_str();
  verify->add_option("--seed", seeds, "Seed for the random bodies; repeat to compare verdicts");
  verify->add_option("--random-bodies", bodies)->capture_default_str();
  verify->add_option("--lens-eps", lens_eps)->capture_default_str();
  common(verify);

  std::string manifest;
  std::optional<std::string> replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay->add_option("manifest", manifest, "Path to a *.manifest.json")->required();
  replay->add_option("--out", replay_out, "Output directory (default: the manifest's directory)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }

  ojson config;
  std::string command;
  fs::path dir = out_dir;
  try {
    if (*profile) {
      command = "profile";
      if (!eps && eps_grid.empty()) throw ArgError("one of --eps or --eps-grid is required");
      config["n"] = n;
      config["eps_grid"] = eps ? num(*eps) : eps_grid;
    } else if (*distance) {
      command = "distance";
      int lo = n, hi = n;
      if (!n_range.empty()) {
        const auto parts = split(n_range, ':');
        if (parts.size() != 2) throw ArgError("n range must be lo:hi");
        lo = to_int(parts[0], "n range");
        hi = to_int(parts[1], "n range");
      } else if (d_n->count() == 0) {
        throw ArgError("one of --n or --n-range is required");
      }
      config["eps"] = *eps;
      config["n_min"] = lo;
      config["n_max"] = hi;
      config["quad_tol"] = quad_tol;
      config["ode_tol"] = ode_tol;
    } else if (*variational) {
      command = "variational";
      config["n"] = n;
      config["eps"] = *eps;
      config["m"] = m;
      config["seed"] = seed;
      config["starts"] = starts;
    } else if (*verify) {
      command = "verify-lemmas";
      parse_resolution(h);
      config["h"] = h;
      config["seeds"] = seeds.empty() ? std::vector<std::uint64_t>{1} : seeds;
      config["random_bodies"] = bodies;
      config["lens_eps"] = lens_eps;
    } else {
      std::ifstream is(manifest, std::ios::binary);
      if (!is) throw ArgError("cannot read manifest " + manifest);
      ojson m = ojson::parse(is, nullptr, false);
      if (m.is_discarded() || !m.contains("command") || !m.contains("config"))
        throw ArgError("not an isoball manifest: " + manifest);
      dir = replay_out ? fs::path(*replay_out) : fs::path(manifest).parent_path();
      if (dir.empty()) dir = ".";
      return execute(m["command"].get<std::string>(), m["config"], dir, out, err);
    }
    config["format"] = format;
  } catch (const ArgError& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }
  return execute(command, config, dir, out, err);
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

} // namespace isoball::cli
