#include "heismag/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "heismag/closedform.hpp"
#include "heismag/errors.hpp"
#include "heismag/verify.hpp"

namespace heismag::cli {

using nlohmann::ordered_json;

const char* const kCsvHeader = "t,x,y,z,xp,yp,zp,speed,first_integral";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const auto& p = traj.params();
  const auto& f = traj.field();
  os << kCsvHeader << '\n';
  for (const auto& s : traj.samples()) {
    const double vals[] = {s.t,      s.pos.x,  s.pos.y,        s.pos.z,
                           s.vel.dx, s.vel.dy, s.vel.dz,       speed(p, s),
                           first_integral(p, f, s)};
    for (std::size_t i = 0; i < std::size(vals); ++i) {
      if (i) os << ',';
      os << format_double(vals[i]);
    }
    os << '\n';
  }
}

namespace {

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw DomainError(std::string(what) + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (expected && out.size() != expected) {
    throw DomainError(std::string(what) + " expects " + std::to_string(expected) +
                      " comma-separated values, got " + std::to_string(out.size()));
  }
  return out;
}

ordered_json report_json(const ResidualReport& r) {
  ordered_json per = ordered_json::array();
  for (const auto& s : r.per_sample) per.push_back({s.t, s.residual});
  return {{"max_ode_residual", r.max_ode_residual},
          {"max_speed_drift", r.max_speed_drift},
          {"max_first_integral_drift", r.max_first_integral_drift},
          {"tol", r.tol},
          {"pass", r.pass},
          {"per_sample", std::move(per)}};
}

std::string resolve_path(const std::string& given, const char* fallback) {
  if (!given.empty()) return given;
  return (std::filesystem::path(default_output_dir()) / fallback).string();
}

void write_file(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  write_csv(os, traj);
  if (!os) throw DomainError("failed writing '" + path + "'");
}

struct IntegrateArgs {
  std::string metric;
  std::string killing;
  double lambda = 0.0;
  double charge = 1.0;
  std::string init;
  double t_end = 1.0;
  std::string method = "rk45";
  double tol = 1e-10;
  double dt = 1e-3;
  std::size_t samples = 0;
  std::string out;
};

int cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  const ModelParams p{parse_metric(a.metric), a.lambda};
  p.validate();
  const MagneticField field{parse_killing(a.killing), a.charge};
  const auto v = parse_list(a.init, 6, "--init");
  const CurveState init{0.0, {v[0], v[1], v[2]}, {v[3], v[4], v[5]}};

  IntegratorConfig cfg;
  if (a.method == "rk4") {
    cfg.method = IntegratorMethod::FixedRK4;
  } else if (a.method == "rk45") {
    cfg.method = IntegratorMethod::EmbeddedRK45;
  } else {
    throw DomainError("--method must be rk4 or rk45");
  }
  cfg.t_end = a.t_end;
  cfg.abs_tol = cfg.rel_tol = a.tol;
  cfg.dt = a.dt;
  if (a.samples) {
    if (a.samples < 2) throw DomainError("--samples must be at least 2");
    cfg.output_times = uniform_grid(0.0, a.t_end, a.samples);
  }

  const Trajectory traj = integrate(p, field, init, cfg);
  const std::string path = resolve_path(a.out, "trajectory.csv");
  write_file(path, traj);

  const auto [ds, di] = conservation_report(traj);
  const auto& st = traj.meta().stats;
  ordered_json j = {{"command", "integrate"},
                    {"metric", std::string(to_string(p.metric))},
                    {"killing", std::string(to_string(field.killing))},
                    {"lambda", p.lambda},
                    {"charge", field.charge},
                    {"method", std::string(to_string(cfg.method))},
                    {"tol", a.tol},
                    {"t_end", a.t_end},
                    {"samples", traj.size()},
                    {"speed_drift", ds},
                    {"first_integral_drift", di},
                    {"steps",
                     {{"accepted", st.accepted},
                      {"rejected", st.rejected},
                      {"rhs_evaluations", st.rhs_evaluations},
                      {"smallest_step", st.smallest_step},
                      {"largest_step", st.largest_step}}},
                    {"csv", path}};
  out << j.dump(2) << '\n';
  return kPass;
}

struct VerifyArgs {
  std::string family;
  std::string variant = "derivation";
  double lambda = 1.0;
  double c = 0.0;
  std::string k = "0,0,0,0,0";
  double c1 = 0.0;
  double t0 = 0.0;
  double t1 = std::nan("");
  std::size_t samples = kDefaultSamples;
  double tol = std::nan("");
  std::string csv;
  // trajectory mode
  std::string trajectory;
  std::string metric;
  std::string killing;
  double charge = 1.0;
};

int cmd_verify_family(const VerifyArgs& a, std::ostream& out) {
  FamilySpec spec;
  spec.family = parse_family(a.family);
  spec.variant = parse_variant(a.variant);
  spec.lambda = a.lambda;
  spec.c = spec.family == Family::G2_V4_CIRCULAR && a.c == 0.0 ? 2.0 : a.c;
  const auto k = parse_list(a.k, 5, "--k");
  std::copy(k.begin(), k.end(), spec.k.begin());
  spec.c1 = a.c1;
  validate(spec);

  const double t1 = std::isnan(a.t1)
                        ? (spec.family == Family::G2_V4_CIRCULAR ? 2.0 * std::numbers::pi : 1.0)
                        : a.t1;
  const double tol = std::isnan(a.tol) ? kAnalyticTol : a.tol;
  if (a.samples < 2) throw DomainError("--samples must be at least 2");
  const auto grid = uniform_grid(a.t0, t1, a.samples);
  const ResidualReport r = check_family(spec, grid, tol);

  ordered_json j = {{"command", "verify"},
                    {"family", std::string(family_name(spec.family))},
                    {"variant", std::string(variant_name(spec.variant))},
                    {"lambda", spec.lambda},
                    {"c", family_c(spec)},
                    {"k", spec.k},
                    {"c1", spec.c1},
                    {"t0", a.t0},
                    {"t1", t1},
                    {"samples", a.samples}};
  j.update(report_json(r));
  if (!a.csv.empty()) {
    std::vector<CurveState> states;
    states.reserve(grid.size());
    for (double t : grid) states.push_back(eval_family(spec, t));
    write_file(a.csv, Trajectory(family_params(spec), MagneticField{family_killing(spec.family), 1.0},
                                 std::move(states)));
    j["csv"] = a.csv;
  }
  out << j.dump(2) << '\n';
  return r.pass ? kPass : kFail;
}

int cmd_verify_trajectory(const VerifyArgs& a, std::ostream& out) {
  if (a.metric.empty() || a.killing.empty()) {
    throw CLI::ValidationError("--trajectory needs --metric and --killing");
  }
  const ModelParams p{parse_metric(a.metric), a.lambda};
  p.validate();
  const MagneticField field{parse_killing(a.killing), a.charge};
  std::ifstream is(a.trajectory);
  if (!is) throw DomainError("cannot open '" + a.trajectory + "'");
  const Trajectory traj = read_csv(is, p, field);
  const double tol = std::isnan(a.tol) ? kFiniteDifferenceTol : a.tol;
  const ResidualReport r = check_trajectory(traj, tol);
  ordered_json j = {{"command", "verify"},
                    {"trajectory", a.trajectory},
                    {"metric", std::string(to_string(p.metric))},
                    {"killing", std::string(to_string(field.killing))},
                    {"lambda", p.lambda},
                    {"charge", field.charge},
                    {"samples", traj.size()}};
  j.update(report_json(r));
  out << j.dump(2) << '\n';
  return r.pass ? kPass : kFail;
}

struct KillingArgs {
  std::string metric;
  double lambda = 1.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-7;
  double box = 2.0;
  double h = 1e-5;
};

int cmd_killing_check(const KillingArgs& a, std::ostream& out) {
  const ModelParams p{parse_metric(a.metric), a.lambda};
  p.validate();
  if (!(a.tol >= 0.0)) throw DomainError("--tol must be non-negative");
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> coord(-a.box, a.box);
  std::vector<CoordPoint> pts(a.samples);
  for (auto& q : pts) q = {coord(rng), coord(rng), coord(rng)};

  ordered_json residuals = ordered_json::object();
  bool pass = true;
  for (KillingId k : kAllKilling) {
    double worst = 0.0;
    for (const auto& q : pts) worst = std::max(worst, killing_residual(p, k, q, a.h));
    residuals[std::string(to_string(k))] = worst;
    pass = pass && worst <= a.tol;
  }
  ordered_json j = {{"command", "killing-check"},
                    {"metric", std::string(to_string(p.metric))},
                    {"lambda", p.lambda},
                    {"samples", a.samples},
                    {"seed", a.seed},
                    {"box", a.box},
                    {"h", a.h},
                    {"tol", a.tol},
                    {"max_residual", residuals},
                    {"pass", pass}};
  out << j.dump(2) << '\n';
  return pass ? kPass : kFail;
}

}  // namespace

Trajectory read_csv(std::istream& is, const ModelParams& p, const MagneticField& field) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw DomainError("unexpected CSV header '" + line + "'");
  std::vector<CurveState> samples;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto v = parse_list(line, 9, ("CSV row " + std::to_string(row)).c_str());
    samples.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}});
  }
  TrajectoryMeta meta;
  meta.integrator = "csv";
  return Trajectory(p, field, std::move(samples), std::move(meta));
}

std::string default_output_dir() {
  const char* env = std::getenv("HEISMAG_OUT_DIR");
  return env && *env ? env : ".";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Killing magnetic curves in Lorentzian-Heisenberg spaces", "heismag"};
  app.require_subcommand(1);

  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "Integrate a magnetic trajectory, write CSV");
  integ->add_option("--metric", ia.metric, "g1 or g2")->required();
  integ->add_option("--killing", ia.killing, "V1..V4")->required();
  integ->add_option("--lambda", ia.lambda, "metric parameter > 0")->required();
  integ->add_option("--charge", ia.charge, "field strength multiplier");
  integ->add_option("--init", ia.init, "x,y,z,xp,yp,zp at t = 0")->required();
  integ->add_option("--t-end", ia.t_end, "final time");
  integ->add_option("--method", ia.method, "rk45 (adaptive) or rk4 (fixed step)");
  integ->add_option("--tol", ia.tol, "absolute and relative tolerance (rk45)");
  integ->add_option("--dt", ia.dt, "step (rk4) or initial step (rk45)");
  integ->add_option("--samples", ia.samples, "write N uniform samples instead of every step");
  integ->add_option("--out", ia.out, "CSV path (default $HEISMAG_OUT_DIR/trajectory.csv)");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check a family or a CSV trajectory against its system");
  auto* fam = ver->add_option("--family", va.family, "family name, e.g. g2-v4-circular");
  auto* trj = ver->add_option("--trajectory", va.trajectory, "CSV written by integrate");
  fam->excludes(trj);
  ver->add_option("--variant", va.variant, "as-printed or derivation");
  ver->add_option("--lambda", va.lambda, "metric parameter > 0");
  ver->add_option("--c", va.c, "integration constant c");
  ver->add_option("--k", va.k, "k1,k2,k3,k4,k5");
  ver->add_option("--c1", va.c1, "z constant of g2-v4-circular");
  ver->add_option("--t0", va.t0, "grid start");
  ver->add_option("--t1", va.t1, "grid end (default 1, or 2 pi for g2-v4-circular)");
  ver->add_option("--samples", va.samples, "grid size");
  ver->add_option("--tol", va.tol, "pass threshold (default 1e-8, 1e-6 for CSV input)");
  ver->add_option("--csv", va.csv, "also write the family samples as CSV");
  ver->add_option("--metric", va.metric, "metric of a CSV trajectory");
  ver->add_option("--killing", va.killing, "field of a CSV trajectory");
  ver->add_option("--charge", va.charge, "field strength of a CSV trajectory");

  KillingArgs ka;
  auto* kc = app.add_subcommand("killing-check", "Killing equation residuals at random points");
  kc->add_option("--metric", ka.metric, "g1 or g2")->required();
  kc->add_option("--lambda", ka.lambda, "metric parameter > 0");
  kc->add_option("--samples", ka.samples, "number of random points");
  kc->add_option("--seed", ka.seed, "RNG seed");
  kc->add_option("--tol", ka.tol, "pass threshold");
  kc->add_option("--box", ka.box, "points are drawn from [-box, box]^3");
  kc->add_option("--fd-step", ka.h, "finite-difference step");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (ver->parsed() && va.family.empty() && va.trajectory.empty()) {
      throw CLI::RequiredError("verify needs --family or --trajectory");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (integ->parsed()) return cmd_integrate(ia, out);
    if (ver->parsed()) {
      return va.trajectory.empty() ? cmd_verify_family(va, out) : cmd_verify_trajectory(va, out);
    }
    return cmd_killing_check(ka, out);
  } catch (const UnknownFamily& e) {
    err << "error: " << e.what() << '\n';
    return kUnknownFamily;
  } catch (const StepUnderflow& e) {
    err << "integrator failure: " << e.what() << '\n';
    return kIntegratorFailure;
  } catch (const IntegratorOverflow& e) {
    err << "integrator failure: " << e.what() << '\n';
    return kIntegratorFailure;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace heismag::cli
