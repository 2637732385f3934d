#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <optional>
#include <sstream>

#include "heismag/cli.hpp"
#include "heismag/closedform.hpp"
#include "heismag/elliptic.hpp"
#include "heismag/errors.hpp"
#include "heismag/verify.hpp"

namespace py = pybind11;
using namespace heismag;

namespace {

using State6 = std::array<double, 6>;

State6 pack(const CurveState& s) {
  return {s.pos.x, s.pos.y, s.pos.z, s.vel.dx, s.vel.dy, s.vel.dz};
}

FamilySpec make_spec(const std::string& family, const std::string& variant, double lambda,
                     std::optional<double> c, const std::array<double, 5>& k, double c1) {
  FamilySpec s;
  s.family = parse_family(family);
  s.variant = parse_variant(variant);
  s.lambda = lambda;
  s.c = c.value_or(s.family == Family::G2_V4_CIRCULAR ? 2.0 : 0.0);
  s.k = k;
  s.c1 = c1;
  return s;
}

ReducedKind parse_reduced(const std::string& name) {
  for (ReducedKind k : kAllReduced) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown reduced equation '" + name + "' (expected g1-v2, g1-v3, g2-v2, g2-v3)");
}

py::dict report_dict(const ResidualReport& r) {
  py::dict d;
  d["max_ode_residual"] = r.max_ode_residual;
  d["max_speed_drift"] = r.max_speed_drift;
  d["max_first_integral_drift"] = r.max_first_integral_drift;
  d["tol"] = r.tol;
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_heismag, m) {
  m.doc() = "Killing magnetic curves in Lorentzian-Heisenberg spaces";

  auto base = py::register_exception<Error>(m, "HeismagError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnboundedOrbit>(m, "UnboundedOrbit", base.ptr());
  py::register_exception<UnknownFamily>(m, "UnknownFamily", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<StepUnderflow>(m, "StepUnderflow", base.ptr());
  py::register_exception<IntegratorOverflow>(m, "IntegratorOverflow", base.ptr());

  m.def(
      "killing_residual",
      [](const std::string& metric, double lambda, const std::string& killing,
         const std::array<double, 3>& pt, double h) {
        return killing_residual({parse_metric(metric), lambda}, parse_killing(killing),
                                {pt[0], pt[1], pt[2]}, h);
      },
      py::arg("metric"), py::arg("lam"), py::arg("killing"), py::arg("point"), py::arg("h") = 1e-5);

  m.def(
      "integrate",
      [](const std::string& metric, const std::string& killing, double lambda, const State6& init,
         double t_end, const std::string& method, double tol, double dt, std::size_t samples,
         double charge) {
        const ModelParams p{parse_metric(metric), lambda};
        IntegratorConfig cfg;
        if (method == "rk4") {
          cfg.method = IntegratorMethod::FixedRK4;
        } else if (method != "rk45") {
          throw DomainError("method must be 'rk4' or 'rk45'");
        }
        cfg.t_end = t_end;
        cfg.abs_tol = cfg.rel_tol = tol;
        cfg.dt = dt;
        if (samples) cfg.output_times = uniform_grid(0.0, t_end, samples);
        const CurveState s0{0.0, {init[0], init[1], init[2]}, {init[3], init[4], init[5]}};
        Trajectory traj = [&] {
          py::gil_scoped_release nogil;
          return integrate(p, MagneticField{parse_killing(killing), charge}, s0, cfg);
        }();
        std::vector<double> t;
        std::vector<State6> states;
        for (const auto& s : traj.samples()) {
          t.push_back(s.t);
          states.push_back(pack(s));
        }
        const auto [ds, di] = conservation_report(traj);
        py::dict d;
        d["t"] = t;
        d["states"] = states;
        d["speed_drift"] = ds;
        d["first_integral_drift"] = di;
        // finite-difference residual needs five samples
        d["residual"] = traj.size() >= 5
                            ? py::object(report_dict(check_trajectory(traj))["max_ode_residual"])
                            : py::object(py::none());
        return d;
      },
      py::arg("metric"), py::arg("killing"), py::arg("lam"), py::arg("init"), py::arg("t_end") = 1.0,
      py::arg("method") = "rk45", py::arg("tol") = 1e-10, py::arg("dt") = 1e-3,
      py::arg("samples") = 0, py::arg("charge") = 1.0,
      "Integrates the Lorentz equation; states are (x, y, z, xp, yp, zp).");

  m.def(
      "eval_family",
      [](const std::string& family, double t, const std::string& variant, double lambda,
         std::optional<double> c, const std::array<double, 5>& k, double c1) {
        return pack(eval_family(make_spec(family, variant, lambda, c, k, c1), t));
      },
      py::arg("family"), py::arg("t"), py::arg("variant") = "derivation", py::arg("lam") = 1.0,
      py::arg("c") = py::none(), py::arg("k") = std::array<double, 5>{}, py::arg("c1") = 0.0);

  m.def(
      "check_family",
      [](const std::string& family, const std::string& variant, double lambda,
         std::optional<double> c, const std::array<double, 5>& k, double c1, double t0,
         std::optional<double> t1, std::size_t samples, double tol) {
        const FamilySpec s = make_spec(family, variant, lambda, c, k, c1);
        const double end =
            t1.value_or(s.family == Family::G2_V4_CIRCULAR ? 2.0 * std::numbers::pi : 1.0);
        return report_dict(check_family(s, uniform_grid(t0, end, samples), tol));
      },
      py::arg("family"), py::arg("variant") = "derivation", py::arg("lam") = 1.0,
      py::arg("c") = py::none(), py::arg("k") = std::array<double, 5>{}, py::arg("c1") = 0.0,
      py::arg("t0") = 0.0, py::arg("t1") = py::none(), py::arg("samples") = kDefaultSamples,
      py::arg("tol") = kAnalyticTol);

  m.def("complete_K", &complete_K, py::arg("m"));
  m.def(
      "jacobi",
      [](double u, double mm) {
        const auto j = jacobi(u, mm);
        return py::make_tuple(j.sn, j.cn, j.dn);
      },
      py::arg("u"), py::arg("m"), "(sn, cn, dn) with parameter m = k^2.");

  m.def(
      "solve_reduced",
      [](const std::string& which, double lambda, double u0, double up0,
         const std::vector<double>& grid, bool quadrature) {
        SolveOptions opts;
        if (quadrature) opts.method = ReducedMethod::Quadrature;
        const ReducedEquation r{parse_reduced(which), lambda, 0.0};
        std::vector<std::array<double, 3>> out;
        for (const auto& s : solve_reduced(r, u0, up0, grid, opts)) out.push_back({s.t, s.u, s.up});
        return out;
      },
      py::arg("which"), py::arg("lam"), py::arg("u0"), py::arg("up0"), py::arg("grid"),
      py::arg("quadrature") = false, "Rows (t, u, u') of the c = 0 reduced equation.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        std::vector<std::string> full{"heismag"};
        full.insert(full.end(), args.begin(), args.end());
        const int code = cli::run(full, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
