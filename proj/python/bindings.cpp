#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "isoball/bound.hpp"
#include "isoball/cli.hpp"
#include "isoball/errors.hpp"
#include "isoball/geometry.hpp"
#include "isoball/lemma_suite.hpp"
#include "isoball/lens.hpp"
#include "isoball/variational.hpp"

namespace py = pybind11;
using namespace isoball;

namespace {

py::dict profile_dict(const Profile& p) {
  py::dict d;
  d["n"] = p.ambient.n();
  d["grid"] = p.grid;
  d["radii"] = p.radii;
  d["clipped"] = std::vector<bool>(p.clip_mask.begin(), p.clip_mask.end());
  d["volume"] = profile_volume(p);
  d["free_area"] = profile_free_area(p);
  return d;
}

}  // namespace

PYBIND11_MODULE(_isoball, m) {
  m.doc() = "Isoperimetric profile and distance bounds in the unit-volume ball";
  m.attr("__version__") = ISOBALL_VERSION;

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("ball_volume", &ball_volume, py::arg("n"), py::arg("radius"));
  m.def("unit_volume_radius", &unit_volume_radius, py::arg("n"));
  m.def("sphere_area", &sphere_area, py::arg("n"), py::arg("radius"));
  m.def("reg_inc_beta", &reg_inc_beta, py::arg("x"), py::arg("a"), py::arg("b"));
  m.def(
      "cap_volume", [](int n, double r, double t) { return cap_volume(CapSpec(BallGeometry(n, r), t)); },
      py::arg("n"), py::arg("radius"), py::arg("colatitude"));
  m.def(
      "cap_area", [](int n, double r, double t) { return cap_area(CapSpec(BallGeometry(n, r), t)); }, py::arg("n"),
      py::arg("radius"), py::arg("colatitude"));

  py::class_<LensShape>(m, "LensShape")
      .def_property_readonly("n", [](const LensShape& l) { return l.ambient.n(); })
      .def_property_readonly("R", [](const LensShape& l) { return l.ambient.radius(); })
      .def_readonly("rho", &LensShape::rho)
      .def_readonly("center_dist", &LensShape::center_dist)
      .def_readonly("theta_u", &LensShape::theta_u)
      .def_readonly("theta_b", &LensShape::theta_b)
      .def_readonly("flat_cut", &LensShape::flat_cut)
      .def_property_readonly("volume", [](const LensShape& l) { return lens_volume(l); })
      .def_property_readonly("free_area", [](const LensShape& l) { return lens_free_area(l); })
      .def("__repr__", [](const LensShape& l) {
        return "LensShape(n=" + std::to_string(l.ambient.n()) + ", rho=" + std::to_string(l.rho) + ")";
      });
  m.def("lens_from_rho", &lens_from_rho, py::arg("n"), py::arg("rho"));
  m.def("solve_rho_for_volume", &solve_rho_for_volume, py::arg("n"), py::arg("eps"), py::arg("tol") = 1e-12);
  m.def("flat_cut_free_area", &flat_cut_free_area, py::arg("n"), py::arg("eps"));
  m.def("general_cap_free_area_at_volume", &general_cap_free_area_at_volume, py::arg("n"), py::arg("eps"),
        py::arg("d"));

  m.def("iso_value", &iso_value, py::arg("n"), py::arg("eps"));
  m.def(
      "iso_profile",
      [](int n, const std::vector<double>& grid) {
        std::vector<double> out;
        for (const auto& p : iso_profile(n, grid)) out.push_back(p.m_value);
        return out;
      },
      py::arg("n"), py::arg("eps_grid"), "M(eps, n) per grid point; NaN where the lens solver failed.");
  m.def("distance_bound", &distance_bound, py::arg("n"), py::arg("eps"), py::arg("quad_tol") = 1e-8,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "growth_ode", [](int n, double eps, double tol) { return growth_ode(n, eps, tol).expansion_time; },
      py::arg("n"), py::arg("eps"), py::arg("step_tol") = 1e-9, py::call_guard<py::gil_scoped_release>());
  m.def(
      "dimension_scan",
      [](double eps, const std::vector<int>& ns, double tol) {
        DimensionScan s;
        {
          py::gil_scoped_release release;
          s = dimension_scan(eps, ns, tol);
        }
        std::vector<double> d;
        for (const auto& r : s.rows) d.push_back(r.ok() ? r.d_value : std::nan(""));
        py::dict out;
        out["n"] = ns;
        out["D"] = d;
        out["sup_D"] = s.sup_d;
        out["sup_n"] = s.sup_n;
        out["differences"] = s.differences;
        out["monotone_tail_from_n"] = s.knee ? py::object(py::int_(s.rows[*s.knee].n)) : py::object(py::none());
        return out;
      },
      py::arg("eps"), py::arg("n_list"), py::arg("quad_tol") = 1e-8);

  m.def(
      "minimize_profile",
      [](int n, double eps, int m, std::uint64_t seed, int starts) {
        VariationalOptions opt;
        opt.starts = starts;
        std::optional<VariationalResult> res;
        {
          py::gil_scoped_release release;
          res.emplace(minimize_profile(n, eps, m, seed, opt));
        }
        const VariationalResult& r = *res;
        py::dict out = profile_dict(r.profile);
        out["area"] = r.area;
        out["multiplier"] = r.multiplier;
        out["converged"] = r.converged;
        out["warning"] = r.warning;
        return out;
      },
      py::arg("n"), py::arg("eps"), py::arg("m") = 2000, py::arg("seed") = 1, py::arg("starts") = 5);
  m.def(
      "lens_profile",
      [](int n, double eps, int m) {
        const LensShape l = solve_rho_for_volume(n, eps);
        return profile_dict(lens_profile(l, uniform_grid(l.ambient.radius(), m)));
      },
      py::arg("n"), py::arg("eps"), py::arg("m") = 2000);

  m.def(
      "run_lemma_suite",
      [](double divisor, std::uint64_t seed, int bodies, double lens_eps) {
        LemmaSuiteConfig cfg;
        cfg.resolution_divisor = divisor;
        cfg.seed = seed;
        cfg.random_bodies = bodies;
        cfg.lens_eps = lens_eps;
        LemmaReport rep;
        {
          py::gil_scoped_release release;
          rep = run_lemma_suite(cfg);
        }
        py::list out;
        for (const auto& c : rep.checks) {
          py::dict d;
          d["lemma"] = c.lemma;
          d["name"] = c.name;
          d["measured"] = c.measured;
          d["tolerance"] = c.tolerance;
          d["status"] = c.skipped ? "skipped" : c.passed ? "pass" : "fail";
          d["note"] = c.note;
          out.append(d);
        }
        return out;
      },
      py::arg("resolution_divisor") = 200.0, py::arg("seed") = 1, py::arg("random_bodies") = 50,
      py::arg("lens_eps") = 0.2);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool; returns (exit_code, stdout, stderr).");
}
