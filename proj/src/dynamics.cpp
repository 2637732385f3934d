#include "heismag/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heismag/errors.hpp"

namespace heismag {

namespace {

using State = std::array<double, 6>;

State pack(const CurveState& s) {
  return {s.pos.x, s.pos.y, s.pos.z, s.vel.dx, s.vel.dy, s.vel.dz};
}

CurveState unpack(double t, const State& y) {
  return {t, {y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
}

State axpy(const State& y, double h, const State& k) {
  State out;
  for (std::size_t i = 0; i < 6; ++i) out[i] = y[i] + h * k[i];
  return out;
}

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Bound on the state magnitude above which the solution is treated as blown up.
constexpr double kOverflowBound = 1e150;

bool overflowed(const State& y) {
  return !all_finite(y) ||
         std::any_of(y.begin(), y.end(), [](double v) { return std::abs(v) > kOverflowBound; });
}

class RhsEval {
 public:
  RhsEval(const ModelParams& p, const MagneticField& f, IntegratorStats& stats)
      : p_(p), f_(f), stats_(stats) {}
  State operator()(double t, const State& y) const {
    ++stats_.rhs_evaluations;
    return lorentz_rhs(p_, f_, unpack(t, y));
  }

 private:
  const ModelParams& p_;
  const MagneticField& f_;
  IntegratorStats& stats_;
};

State rk4_step(const RhsEval& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State k4 = f(t + h, axpy(y, h, k3));
  State out;
  for (std::size_t i = 0; i < 6; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct DopriResult {
  State y;
  State k_last;
  double err = 0.0;
};

DopriResult dopri_step(const RhsEval& f, double t, const State& y, const State& k1, double h,
                       const IntegratorConfig& cfg) {
  State tmp;
  auto stage = [&](std::initializer_list<std::pair<double, const State*>> terms) {
    for (std::size_t i = 0; i < 6; ++i) {
      double acc = y[i];
      for (const auto& [coef, k] : terms) acc += h * coef * (*k)[i];
      tmp[i] = acc;
    }
    return tmp;
  };
  const State k2 = f(t + c2 * h, stage({{a21, &k1}}));
  const State k3 = f(t + c3 * h, stage({{a31, &k1}, {a32, &k2}}));
  const State k4 = f(t + c4 * h, stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State k5 = f(t + c5 * h, stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State k6 =
      f(t + h, stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State y5 = stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State k7 = f(t + h, y5);

  double err = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    const double e =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
    err = std::max(err, std::abs(e) / scale);
  }
  if (!all_finite(y5) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  return {y5, k7, err};
}

void note_step(IntegratorStats& stats, double h) {
  ++stats.accepted;
  if (stats.accepted == 1) {
    stats.smallest_step = stats.largest_step = h;
  } else {
    stats.smallest_step = std::min(stats.smallest_step, h);
    stats.largest_step = std::max(stats.largest_step, h);
  }
}

}  // namespace

FrameVector covariant_acceleration(const ModelParams& p, const CurveState& s,
                                   const CoordAcceleration& acc) {
  const double x = s.pos.x;
  const double xp = s.vel.dx, yp = s.vel.dy, zp = s.vel.dz;
  const double vertical = zp + x * yp;
  const double vertical_rate = acc.dz + xp * yp + x * acc.dy;
  const double l = p.lambda;
  if (p.metric == Metric::G1) {
    return {vertical_rate, acc.dy + xp * vertical, acc.dx / l + l * yp * vertical};
  }
  return {acc.dy - xp * vertical, acc.dx / l + l * yp * vertical, vertical_rate};
}

FrameVector covariant_acceleration_from_connection(const ModelParams& p, const CurveState& s,
                                                   const CoordAcceleration& acc) {
  const FrameVector a = frame_components(p, s.pos, s.vel);
  // Derivative of the frame components along the curve.
  const double vertical_rate = acc.dz + s.vel.dx * s.vel.dy + s.pos.x * acc.dy;
  const FrameVector da = p.metric == Metric::G1
                             ? FrameVector{vertical_rate, acc.dy, acc.dx / p.lambda}
                             : FrameVector{acc.dy, acc.dx / p.lambda, vertical_rate};
  FrameVector out = da;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      out = out + (a[i - 1] * a[j - 1]) * connection_coeff(p, i, j);
    }
  }
  return out;
}

CoordAcceleration lorentz_acceleration(const ModelParams& p, const MagneticField& field,
                                       const CoordPoint& pos, const CoordVelocity& vel) {
  const FrameVector t = frame_components(p, pos, vel);
  const FrameVector w = field.charge * cross(killing_field(p, field.killing, pos), t);
  const double l = p.lambda;
  const double x = pos.x;
  const double xp = vel.dx, yp = vel.dy;
  const double vertical = vel.dz + x * yp;
  // The frame map is triangular in (z' + x y', y', x'): solve y'', then x'', then z''.
  double ypp = 0.0, xpp = 0.0, vertical_rate = 0.0;
  if (p.metric == Metric::G1) {
    ypp = w.a2 - xp * vertical;
    xpp = l * w.a3 - l * l * yp * vertical;
    vertical_rate = w.a1;
  } else {
    ypp = w.a1 + xp * vertical;
    xpp = l * w.a2 - l * l * yp * vertical;
    vertical_rate = w.a3;
  }
  const double zpp = vertical_rate - xp * yp - x * ypp;
  return {xpp, ypp, zpp};
}

StateDerivative lorentz_rhs(const ModelParams& p, const MagneticField& field,
                            const CurveState& s) {
  const CoordAcceleration a = lorentz_acceleration(p, field, s.pos, s.vel);
  return {s.vel.dx, s.vel.dy, s.vel.dz, a.dx, a.dy, a.dz};
}

StateDerivative lorentz_rhs(const ModelParams& p, KillingId k, const CurveState& s) {
  return lorentz_rhs(p, MagneticField{k, 1.0}, s);
}

double speed(const ModelParams& p, const CurveState& s) {
  const FrameVector t = frame_components(p, s.pos, s.vel);
  return inner(t, t);
}

CurveState normalize_speed(const ModelParams& p, const CurveState& s) {
  const double g = speed(p, s);
  if (!(std::abs(g) > 0.0) || !std::isfinite(g)) {
    throw DomainError("cannot normalize a null or zero velocity");
  }
  const double scale = 1.0 / std::sqrt(std::abs(g));
  CurveState out = s;
  out.vel = {s.vel.dx * scale, s.vel.dy * scale, s.vel.dz * scale};
  return out;
}

double field_potential(const ModelParams& p, KillingId k, double x, double y) {
  const double l = p.lambda;
  const double sign = p.metric == Metric::G1 ? 1.0 : -1.0;
  switch (k) {
    case KillingId::V1:
      return 0.0;
    case KillingId::V2:
      return sign * x / l;
    case KillingId::V3:
      return -sign * y;
    case KillingId::V4:
      return sign * x * x / (2.0 * l) - l * y * y / 2.0;
  }
  return 0.0;
}

double first_integral(const ModelParams& p, const MagneticField& field, const CurveState& s) {
  const double vertical = s.vel.dz + s.pos.x * s.vel.dy;
  return vertical - field.charge * field_potential(p, field.killing, s.pos.x, s.pos.y);
}

double first_integral(const ModelParams& p, KillingId k, const CurveState& s) {
  return first_integral(p, MagneticField{k, 1.0}, s);
}

std::string_view to_string(IntegratorMethod m) {
  return m == IntegratorMethod::FixedRK4 ? "rk4" : "rk45";
}

void IntegratorConfig::validate(double t_start) const {
  if (!(t_end > t_start)) throw DomainError("t_end must exceed the initial time");
  if (method == IntegratorMethod::FixedRK4) {
    if (!(dt > 0.0)) throw DomainError("RK4 step dt must be > 0");
  } else {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("tolerances must be > 0");
    if (!(dt_min > 0.0) || !(dt_max > 0.0)) throw DomainError("step bounds must be > 0");
    if (dt_min > dt_max) throw DomainError("dt_min must not exceed dt_max");
  }
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    const double t = output_times[i];
    const bool ordered = i == 0 ? t >= t_start : t > output_times[i - 1];
    if (!ordered || t > t_end) {
      throw DomainError("output_times must be strictly increasing and lie in [t_start, t_end]");
    }
  }
}

Trajectory::Trajectory(ModelParams params, MagneticField field, std::vector<CurveState> samples,
                       TrajectoryMeta meta)
    : params_(params), field_(field), samples_(std::move(samples)), meta_(std::move(meta)) {
  params_.validate();
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw DomainError("trajectory sample times must be strictly increasing");
    }
  }
}

Trajectory integrate(const ModelParams& p, const MagneticField& field, const CurveState& init,
                     const IntegratorConfig& cfg) {
  p.validate();
  cfg.validate(init.t);

  TrajectoryMeta meta;
  meta.integrator = std::string(to_string(cfg.method));
  meta.abs_tol = cfg.abs_tol;
  meta.rel_tol = cfg.rel_tol;
  meta.dt = cfg.dt;
  const RhsEval f(p, field, meta.stats);

  std::vector<double> targets;
  for (double t : cfg.output_times) {
    if (t > init.t) targets.push_back(t);
  }
  const bool every_step = targets.empty();
  if (every_step || targets.back() < cfg.t_end) targets.push_back(cfg.t_end);

  std::vector<CurveState> samples{init};
  double t = init.t;
  State y = pack(init);
  std::size_t next = 0;
  std::size_t steps = 0;

  auto advance = [&](double h_taken, const State& y_new, bool hit) {
    if (overflowed(y_new)) {
      throw IntegratorOverflow("state overflow at t = " + std::to_string(t + h_taken));
    }
    t = hit ? targets[next] : t + h_taken;
    y = y_new;
    note_step(meta.stats, h_taken);
    if ((every_step || hit) && samples.back().t < t) samples.push_back(unpack(t, y));
    if (hit) ++next;
    if (++steps > cfg.max_steps) throw StepUnderflow("maximum number of steps exceeded");
  };

  if (cfg.method == IntegratorMethod::FixedRK4) {
    while (next < targets.size()) {
      const double remaining = targets[next] - t;
      const bool hit = cfg.dt >= remaining;
      const double h = hit ? remaining : cfg.dt;
      advance(h, rk4_step(f, t, y, h), hit);
    }
    return Trajectory(p, field, std::move(samples), std::move(meta));
  }

  double h = cfg.dt > 0.0 ? std::min(cfg.dt, cfg.dt_max) : cfg.dt_max;
  h = std::max(h, cfg.dt_min);
  State k1 = f(t, y);
  while (next < targets.size()) {
    const double remaining = targets[next] - t;
    const bool clipped = h >= remaining;
    const double h_try = clipped ? remaining : h;
    const DopriResult r = dopri_step(f, t, y, k1, h_try, cfg);
    if (r.err <= 1.0) {
      advance(h_try, r.y, clipped);
      k1 = r.k_last;
      const double grow = r.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 5.0);
      // A step clipped to an output time says nothing about the controller's size.
      const double base = clipped ? std::max(h, h_try) : h_try;
      h = std::min(base * grow, cfg.dt_max);
    } else {
      ++meta.stats.rejected;
      const double shrink =
          std::isfinite(r.err) ? std::clamp(0.9 * std::pow(r.err, -0.2), 0.1, 0.9) : 0.1;
      h = h_try * shrink;
      if (h < cfg.dt_min) {
        throw StepUnderflow("adaptive step " + std::to_string(h) + " fell below dt_min at t = " +
                            std::to_string(t));
      }
    }
  }
  return Trajectory(p, field, std::move(samples), std::move(meta));
}

Trajectory integrate(const ModelParams& p, KillingId k, const CurveState& init,
                     const IntegratorConfig& cfg) {
  return integrate(p, MagneticField{k, 1.0}, init, cfg);
}

}  // namespace heismag
