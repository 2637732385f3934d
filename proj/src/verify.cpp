#include "heismag/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "heismag/errors.hpp"

namespace heismag {

namespace {

double norm(const FrameVector& v) { return std::sqrt(v.a1 * v.a1 + v.a2 * v.a2 + v.a3 * v.a3); }

// Fornberg's recursion, first-derivative weights only, at x0 on nodes xs.
std::array<double, 5> first_derivative_weights(double x0, const std::array<double, 5>& xs) {
  constexpr int n = 5;
  double c[n][2] = {};
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return {c[0][1], c[1][1], c[2][1], c[3][1], c[4][1]};
}

void finish(ResidualReport& r) {
  r.pass = r.max_ode_residual <= r.tol && r.max_speed_drift <= r.tol &&
           r.max_first_integral_drift <= r.tol;
}

}  // namespace

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 2) throw DomainError("uniform_grid needs at least two points");
  std::vector<double> g(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + h * static_cast<double>(i);
  g.back() = b;
  return g;
}

double ode_residual(const ModelParams& p, const MagneticField& field, const CurveJet& j) {
  const CurveState s{j.t, j.pos, j.vel};
  const FrameVector lhs = covariant_acceleration(p, s, j.acc);
  const FrameVector force =
      field.charge * cross(killing_field(p, field.killing, j.pos), frame_components(p, j.pos, j.vel));
  return norm(lhs - force);
}

double ode_residual(const ModelParams& p, KillingId k, const CurveJet& j) {
  return ode_residual(p, MagneticField{k, 1.0}, j);
}

CurveJet finite_difference_jet(const Trajectory& traj, std::size_t i) {
  const std::size_t n = traj.size();
  if (n < 5) {
    throw GridTooCoarse("finite differences need at least 5 samples, trajectory has " +
                        std::to_string(n));
  }
  if (i >= n) throw std::out_of_range("sample index out of range");
  const std::size_t first = std::min(i >= 2 ? i - 2 : 0, n - 5);
  std::array<double, 5> ts{};
  for (int k = 0; k < 5; ++k) ts[k] = traj[first + k].t;
  const auto w = first_derivative_weights(traj[i].t, ts);
  CoordAcceleration acc{};
  for (int k = 0; k < 5; ++k) {
    const auto& v = traj[first + k].vel;
    acc.dx += w[k] * v.dx;
    acc.dy += w[k] * v.dy;
    acc.dz += w[k] * v.dz;
  }
  const CurveState& s = traj[i];
  return {s.t, s.pos, s.vel, acc};
}

double ode_residual(const Trajectory& traj, std::size_t i) {
  return ode_residual(traj.params(), traj.field(), finite_difference_jet(traj, i));
}

ResidualReport check_family(const FamilySpec& spec, std::span<const double> grid, double tol) {
  validate(spec);
  const ModelParams p = family_params(spec);
  const KillingId k = family_killing(spec.family);
  ResidualReport r;
  r.tol = tol;
  r.per_sample.reserve(grid.size());
  double speed0 = 0.0;
  double first0 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CurveJet j = eval_family_jet(spec, grid[i]);
    const CurveState s{j.t, j.pos, j.vel};
    const double res = ode_residual(p, k, j);
    const double sp = speed(p, s);
    const double fi = first_integral(p, k, s);
    if (i == 0) {
      speed0 = sp;
      first0 = fi;
    }
    // NaN compares false with everything; make it fail loudly instead.
    auto worst = [](double acc, double v) { return std::isnan(v) ? v : std::max(acc, v); };
    r.max_ode_residual = worst(r.max_ode_residual, res);
    r.max_speed_drift = worst(r.max_speed_drift, std::abs(sp - speed0));
    r.max_first_integral_drift = worst(r.max_first_integral_drift, std::abs(fi - first0));
    r.per_sample.push_back({j.t, res});
  }
  finish(r);
  return r;
}

std::pair<double, double> conservation_report(const Trajectory& traj) {
  if (traj.size() == 0) return {0.0, 0.0};
  const auto& p = traj.params();
  const auto& f = traj.field();
  const double speed0 = speed(p, traj.front());
  const double first0 = first_integral(p, f, traj.front());
  double ds = 0.0;
  double di = 0.0;
  for (const auto& s : traj.samples()) {
    const double a = std::abs(speed(p, s) - speed0);
    const double b = std::abs(first_integral(p, f, s) - first0);
    ds = std::isnan(a) ? a : std::max(ds, a);
    di = std::isnan(b) ? b : std::max(di, b);
    if (std::isnan(ds) || std::isnan(di)) break;
  }
  return {ds, di};
}

ResidualReport check_trajectory(const Trajectory& traj, double tol) {
  ResidualReport r;
  r.tol = tol;
  r.per_sample.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double res = ode_residual(traj, i);
    r.max_ode_residual = std::isnan(res) ? res : std::max(r.max_ode_residual, res);
    r.per_sample.push_back({traj[i].t, res});
  }
  std::tie(r.max_speed_drift, r.max_first_integral_drift) = conservation_report(traj);
  finish(r);
  return r;
}

double compare(const Trajectory& a, const Trajectory& b) {
  if (!(a.params() == b.params())) throw ParamMismatch("trajectories use different model params");
  if (!(a.field() == b.field())) throw ParamMismatch("trajectories use different fields");
  if (a.size() != b.size()) throw ParamMismatch("trajectories have different sample counts");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t != b[i].t) throw ParamMismatch("trajectories are sampled at different times");
  }
  return compare(a, [&](double t) {
    const auto it = std::lower_bound(b.samples().begin(), b.samples().end(), t,
                                     [](const CurveState& s, double v) { return s.t < v; });
    return it->pos;
  });
}

double compare(const Trajectory& a, const FamilySpec& spec) {
  if (!(a.params() == family_params(spec)) ||
      !(a.field() == MagneticField{family_killing(spec.family), 1.0})) {
    throw ParamMismatch("trajectory and family " + std::string(family_name(spec.family)) +
                        " describe different systems");
  }
  return compare(a, [&](double t) { return eval_family(spec, t).pos; });
}

double compare(const Trajectory& a, const std::function<CoordPoint(double)>& curve) {
  double worst = 0.0;
  for (const auto& s : a.samples()) {
    const CoordPoint q = curve(s.t);
    const double dx = s.pos.x - q.x;
    const double dy = s.pos.y - q.y;
    const double dz = s.pos.z - q.z;
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (std::isnan(d)) return d;
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace heismag
