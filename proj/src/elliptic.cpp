#include "heismag/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "heismag/errors.hpp"
#include "heismag/quadrature.hpp"

namespace heismag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 2.0 * kEps * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

void check_parameter(double m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw DomainError("elliptic parameter m = " + std::to_string(m) + " outside [0, 1]");
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double complete_K(double m) {
  if (!(m >= 0.0 && m < 1.0)) {
    throw DomainError("complete_K needs 0 <= m < 1, got m = " + std::to_string(m));
  }
  return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || (x == 0.0) + (y == 0.0) + (z == 0.0) > 1) {
    throw DomainError("carlson_rf needs non-negative arguments with at most one zero");
  }
  // Duplication theorem; stop when the spread is small enough for the
  // fifth-order Taylor tail to be below double precision.
  const double tol = 2.5e-3;  // truncation error ~ tol^6 / 4
  for (int i = 0; i < 200; ++i) {
    const double mu = (x + y + z) / 3.0;
    const double dx = (mu - x) / mu;
    const double dy = (mu - y) / mu;
    const double dz = (mu - z) / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < tol) {
      const double e2 = dx * dy - dz * dz;
      const double e3 = dx * dy * dz;
      return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
    }
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
  }
  throw DomainError("carlson_rf failed to converge");
}

double incomplete_F(double phi, double m) {
  check_parameter(m);
  const double n = std::round(phi / kPi);
  const double r = phi - n * kPi;
  const double s = std::sin(r);
  const double c = std::cos(r);
  double value = 0.0;
  if (s != 0.0) {
    if (m == 1.0 && c == 0.0) throw DomainError("F(pi/2 | 1) is infinite");
    value = s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
  }
  if (n != 0.0) {
    if (m == 1.0) throw DomainError("F(phi | 1) needs |phi| < pi/2");
    value += 2.0 * n * complete_K(m);
  }
  return value;
}

JacobiTriple jacobi(double u, double m) {
  check_parameter(m);
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (m == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  const double mc = 1.0 - m;
  // Reduce to one real period so that 2^N a_N u stays moderate.
  const double four_k = 4.0 * kPi / (2.0 * agm(1.0, std::sqrt(mc)));
  u -= four_k * std::round(u / four_k);

  std::array<double, 32> a{};
  std::array<double, 32> c{};
  a[0] = 1.0;
  double b = std::sqrt(mc);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > kEps * a[n] && n < 31) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  return {sn, cn, std::sqrt(mc + m * cn * cn)};
}

QuarticEnergy quartic_of(const ReducedEquation& r) {
  if (r.c != 0.0) {
    throw Unsupported("elliptic solutions exist only for c = 0 (got c = " + std::to_string(r.c) + ")");
  }
  const double l2 = r.lambda * r.lambda;
  switch (r.which) {
    case ReducedKind::G1_V2:
      return {1.0, 1.0, 0.0, 0.0};
    case ReducedKind::G1_V3:
      return {l2, -1.0, 0.0, 0.0};
    case ReducedKind::G2_V2:
      return {-1.0, 1.0, 0.0, 0.0};
    case ReducedKind::G2_V3:
      return {-l2, 1.0, 0.0, 0.0};
  }
  return {};
}

QuarticEnergy energy_from_state(const ReducedEquation& r, double u, double up) {
  QuarticEnergy q = quartic_of(r);
  q.energy = up * up - q.Q(u);
  return q;
}

std::string_view to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::Equilibrium:
      return "equilibrium";
    case OrbitKind::Sn:
      return "sn";
    case OrbitKind::Cn:
      return "cn";
    case OrbitKind::Dn:
      return "dn";
    case OrbitKind::Csch:
      return "csch";
    case OrbitKind::Coth:
      return "coth";
    case OrbitKind::Turning:
      return "turning";
    case OrbitKind::Monotone:
      return "monotone";
  }
  return "?";
}

OrbitInfo classify_orbit(const QuarticEnergy& q, double u0, double up0) {
  if (q.q4 == 0.0) throw Unsupported("classify_orbit needs a quartic term (q4 != 0)");
  OrbitInfo info;
  info.quartic = q;
  const double q4 = q.q4;
  const double q2 = q.q2;
  double e = q.q0 + q.energy;
  // Energy computed from a state on a separatrix is zero only up to rounding.
  const double e_scale = std::abs(q4) * u0 * u0 * u0 * u0 + std::abs(q2) * u0 * u0 + up0 * up0;
  if (e != 0.0 && std::abs(e) <= 64.0 * kEps * e_scale) {
    e = 0.0;
    info.quartic.energy = -q.q0;
  }
  const double accel = (2.0 * q4 * u0 * u0 + q2) * u0;
  const double scale = std::abs(q4) * u0 * u0 * u0 * u0 + std::abs(q2) * u0 * u0 + std::abs(e);
  const bool at_rest = std::abs(up0) <= 1e-12 * std::sqrt(std::max(scale, 1e-300)) &&
                       std::abs(accel) <= 1e-12 * std::max(1.0, std::abs(u0) * (std::abs(q2) + 1.0));
  if (at_rest) {
    info.kind = OrbitKind::Equilibrium;
    return info;
  }

  double disc = q2 * q2 - 4.0 * q4 * e;
  const double disc_tol = 64.0 * kEps * (q2 * q2 + std::abs(4.0 * q4 * e));
  const bool double_root = std::abs(disc) <= disc_tol;
  if (disc < 0.0 && !double_root) {
    if (q4 < 0.0) throw DomainError("state does not lie on a real orbit");
    info.kind = OrbitKind::Monotone;
    return info;
  }
  if (double_root) {
    const double s = -q2 / (2.0 * q4);
    info.s1 = info.s2 = s;
    if (q4 < 0.0 || s < 0.0) {
      // q4 < 0: the only real motion is at the double root itself.
      if (q4 < 0.0) {
        info.kind = OrbitKind::Equilibrium;
        return info;
      }
      info.kind = OrbitKind::Monotone;
      return info;
    }
    if (s == 0.0) throw Unsupported("q2 = 0 with zero energy: algebraic escape, no elliptic form");
    if (u0 * u0 < s) {
      info.kind = OrbitKind::Sn;
      info.m = 1.0;
      info.omega = std::sqrt(q4 * s);
    } else {
      info.kind = OrbitKind::Coth;
    }
    return info;
  }

  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (q2 + std::copysign(sq, q2));
  double r1 = qq / q4;
  double r2 = qq != 0.0 ? e / qq : 0.0;
  if (e == 0.0) r2 = 0.0;
  info.s1 = std::min(r1, r2);
  info.s2 = std::max(r1, r2);
  const double s1 = info.s1;
  const double s2 = info.s2;

  if (q4 > 0.0) {
    if (s2 < 0.0) {
      info.kind = OrbitKind::Monotone;
    } else if (s2 == 0.0) {
      info.kind = OrbitKind::Csch;
    } else if (s1 <= 0.0) {
      info.kind = OrbitKind::Turning;
    } else if (u0 * u0 <= 0.5 * (s1 + s2)) {
      info.kind = OrbitKind::Sn;
      info.m = s1 / s2;
      info.omega = std::sqrt(q4 * s2);
      info.period = 4.0 * complete_K(info.m) / info.omega;
    } else {
      info.kind = OrbitKind::Turning;
    }
    return info;
  }

  if (s2 <= 0.0) {
    info.kind = OrbitKind::Equilibrium;
  } else if (s1 < 0.0) {
    info.kind = OrbitKind::Cn;
    info.m = s2 / (s2 - s1);
    info.omega = std::sqrt(-q4 * (s2 - s1));
    info.period = 4.0 * complete_K(info.m) / info.omega;
  } else {
    info.kind = OrbitKind::Dn;
    info.m = (s2 - s1) / s2;
    info.omega = std::sqrt(-q4 * s2);
    if (info.m < 1.0) info.period = 2.0 * complete_K(info.m) / info.omega;
  }
  return info;
}

namespace {

struct Sample2 {
  double u;
  double up;
};

// Closed-form evaluation through jacobi() and hyperbolic functions.
class ClosedOrbit {
 public:
  ClosedOrbit(const OrbitInfo& o, double u0, double up0) : o_(o) {
    const auto& q = o.quartic;
    switch (o.kind) {
      case OrbitKind::Sn: {
        sign_ = up0 < 0.0 ? -1.0 : 1.0;
        amp_ = std::sqrt(o.s1);
        phase_ = incomplete_F(std::asin(clamp_unit(sign_ * u0 / amp_)), o.m);
        break;
      }
      case OrbitKind::Cn: {
        sign_ = up0 < 0.0 ? -1.0 : 1.0;
        amp_ = std::sqrt(o.s2);
        phase_ = -incomplete_F(std::acos(clamp_unit(sign_ * u0 / amp_)), o.m);
        break;
      }
      case OrbitKind::Dn: {
        sign_ = u0 < 0.0 ? -1.0 : 1.0;
        amp_ = std::sqrt(o.s2);
        const double x = std::clamp((o.s2 - u0 * u0) / (o.s2 - o.s1), 0.0, 1.0);
        const double ph = incomplete_F(std::asin(std::sqrt(x)), o.m);
        phase_ = sign_ * up0 >= 0.0 ? -ph : ph;
        break;
      }
      case OrbitKind::Csch: {
        sign_ = u0 < 0.0 ? -1.0 : 1.0;
        amp_ = std::sqrt(q.q2 / q.q4);
        rate_ = std::sqrt(q.q2);
        phase_ = std::asinh(amp_ / (sign_ * u0));
        dir_ = sign_ * up0 >= 0.0 ? 1.0 : -1.0;
        break;
      }
      case OrbitKind::Coth: {
        sign_ = u0 < 0.0 ? -1.0 : 1.0;
        amp_ = std::sqrt(o.s1);
        rate_ = std::sqrt(q.q4 * o.s1);
        phase_ = std::atanh(amp_ / (sign_ * u0));
        dir_ = sign_ * up0 >= 0.0 ? 1.0 : -1.0;
        break;
      }
      default:
        throw Unsupported("no closed form for " + std::string(to_string(o.kind)) + " orbits");
    }
  }

  Sample2 at(double t) const {
    switch (o_.kind) {
      case OrbitKind::Sn: {
        const auto j = jacobi(o_.omega * t + phase_, o_.m);
        return {sign_ * amp_ * j.sn, sign_ * amp_ * o_.omega * j.cn * j.dn};
      }
      case OrbitKind::Cn: {
        const auto j = jacobi(o_.omega * t + phase_, o_.m);
        return {sign_ * amp_ * j.cn, -sign_ * amp_ * o_.omega * j.sn * j.dn};
      }
      case OrbitKind::Dn: {
        const auto j = jacobi(o_.omega * t + phase_, o_.m);
        return {sign_ * amp_ * j.dn, -sign_ * amp_ * o_.omega * o_.m * j.sn * j.cn};
      }
      case OrbitKind::Csch: {
        const double w = escape_check(t);
        const double sh = std::sinh(w);
        return {sign_ * amp_ / sh, sign_ * dir_ * amp_ * rate_ * std::cosh(w) / (sh * sh)};
      }
      case OrbitKind::Coth: {
        const double w = escape_check(t);
        const double sh = std::sinh(w);
        return {sign_ * amp_ / std::tanh(w), sign_ * dir_ * amp_ * rate_ / (sh * sh)};
      }
      default:
        return {};
    }
  }

 private:
  double escape_check(double t) const {
    const double w = phase_ - dir_ * rate_ * t;
    if (!(w > 0.0)) {
      throw UnboundedOrbit("orbit escapes at t = " + std::to_string(dir_ * phase_ / rate_) +
                           " before grid time " + std::to_string(t));
    }
    return w;
  }

  OrbitInfo o_;
  double sign_ = 1.0;
  double amp_ = 0.0;
  double phase_ = 0.0;
  double rate_ = 0.0;
  double dir_ = 1.0;
};

// Inverts t(theta) = int dt/dtheta for an angle parametrisation u = U(theta) in
// which dt/dtheta is smooth and positive. Only forward times, in increasing order.
class AngleOrbit {
 public:
  AngleOrbit(const OrbitInfo& o, double u0, double up0, const SolveOptions& opts)
      : o_(o), opts_(opts) {
    const auto& q = o.quartic;
    const double e = q.q0 + q.energy;
    switch (o.kind) {
      case OrbitKind::Sn: {
        sign_ = up0 < 0.0 ? -1.0 : 1.0;
        half_ = std::sqrt(o.s1);
        theta0_ = std::asin(clamp_unit(sign_ * u0 / half_));
        const double a = q.q4, s2 = o.s2;
        const double h = half_;
        g_ = [a, s2, h](double th) {
          const double u = h * std::sin(th);
          return 1.0 / std::sqrt(a * (s2 - u * u));
        };
        periodic_ = true;
        break;
      }
      case OrbitKind::Cn: {
        sign_ = up0 < 0.0 ? -1.0 : 1.0;
        half_ = std::sqrt(o.s2);
        theta0_ = std::asin(clamp_unit(sign_ * u0 / half_));
        const double a = -q.q4, s1 = o.s1;
        const double h = half_;
        g_ = [a, s1, h](double th) {
          const double u = h * std::sin(th);
          return 1.0 / std::sqrt(a * (u * u - s1));
        };
        periodic_ = true;
        break;
      }
      case OrbitKind::Dn: {
        sign_ = u0 < 0.0 ? -1.0 : 1.0;
        const double r1 = std::sqrt(o.s1);
        const double r2 = std::sqrt(o.s2);
        mid_ = 0.5 * (r1 + r2);
        half_ = 0.5 * (r2 - r1);
        theta0_ = std::asin(clamp_unit((sign_ * u0 - mid_) / half_));
        if (sign_ * up0 < 0.0) theta0_ = kPi - theta0_;
        const double a = -q.q4, m = mid_, h = half_;
        g_ = [a, r1, r2, m, h](double th) {
          const double u = m + h * std::sin(th);
          return 1.0 / std::sqrt(a * (u + r1) * (u + r2));
        };
        periodic_ = true;
        break;
      }
      case OrbitKind::Turning: {
        sign_ = u0 < 0.0 ? -1.0 : 1.0;
        half_ = std::sqrt(o.s2);  // b
        const double dir = sign_ * up0 < 0.0 ? -1.0 : 1.0;
        theta0_ = dir * std::acos(std::clamp(half_ / (sign_ * u0), 0.0, 1.0));
        const double a = q.q4, b2 = o.s2, so = o.s1;
        g_ = [a, b2, so](double th) {
          const double c = std::cos(th);
          return 1.0 / std::sqrt(a * (b2 - so * c * c));
        };
        theta_end_ = kPi / 2.0;
        break;
      }
      case OrbitKind::Monotone: {
        sign_ = up0 < 0.0 ? -1.0 : 1.0;
        half_ = std::pow(e / q.q4, 0.25);  // kappa
        theta0_ = std::atan(sign_ * u0 / half_);
        const double k = half_, a = q.q4, b = q.q2;
        g_ = [k, a, b, e](double th) {
          const double s = std::sin(th), c = std::cos(th);
          const double s2 = s * s, c2 = c * c;
          return k / std::sqrt(a * k * k * k * k * s2 * s2 + b * k * k * s2 * c2 + e * c2 * c2);
        };
        theta_end_ = kPi / 2.0;
        break;
      }
      default:
        throw Unsupported("no angle parametrisation for " + std::string(to_string(o.kind)) +
                          " orbits");
    }
    anchor_theta_ = theta0_;
    if (periodic_) {
      period_ = integral(theta0_, theta0_ + 2.0 * kPi);
    } else {
      escape_ = integral(theta0_, theta_end_);
    }
  }

  Sample2 at(double t) {
    if (t < anchor_t_) throw DomainError("AngleOrbit times must be non-decreasing");
    if (!periodic_ && t >= escape_) {
      throw UnboundedOrbit("orbit escapes at t = " + std::to_string(escape_) +
                           " before grid time " + std::to_string(t));
    }
    if (periodic_) {
      const double n = std::floor(t / period_);
      if (n * period_ > anchor_t_) {
        anchor_t_ = n * period_;
        anchor_theta_ = theta0_ + 2.0 * kPi * n;
      }
    }
    double lo = anchor_theta_;
    double hi = periodic_ ? anchor_theta_ + 2.0 * kPi : theta_end_;
    const double target = t - anchor_t_;
    double th = std::min(lo + target / g_(lo), 0.5 * (lo + hi));
    if (target == 0.0) th = lo;
    const double ftol = opts_.root_tol * std::max(1.0, std::abs(t));
    for (int it = 0; it < 200 && target != 0.0; ++it) {
      const double f = integral(anchor_theta_, th) - target;
      if (std::abs(f) <= ftol) break;
      (f > 0.0 ? hi : lo) = th;
      double next = th - f / g_(th);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 4.0 * kEps * std::max(1.0, std::abs(th))) break;
      th = next;
    }
    anchor_theta_ = th;
    anchor_t_ = t;
    return eval(th);
  }

 private:
  double integral(double a, double b) const {
    if (a == b) return 0.0;
    return integrate_gk15(g_, a, b, opts_.quad_tol).value;
  }

  Sample2 eval(double th) const {
    const double rate = 1.0 / g_(th);
    const double s = std::sin(th), c = std::cos(th);
    switch (o_.kind) {
      case OrbitKind::Sn:
      case OrbitKind::Cn:
        return {sign_ * half_ * s, sign_ * half_ * c * rate};
      case OrbitKind::Dn:
        return {sign_ * (mid_ + half_ * s), sign_ * half_ * c * rate};
      case OrbitKind::Turning:
        return {sign_ * half_ / c, sign_ * half_ * s / (c * c) * rate};
      case OrbitKind::Monotone:
        return {sign_ * half_ * s / c, sign_ * half_ / (c * c) * rate};
      default:
        return {};
    }
  }

  OrbitInfo o_;
  SolveOptions opts_;
  std::function<double(double)> g_;
  double sign_ = 1.0;
  double mid_ = 0.0;
  double half_ = 0.0;
  double theta0_ = 0.0;
  double theta_end_ = 0.0;
  bool periodic_ = false;
  double period_ = 0.0;
  double escape_ = 0.0;
  double anchor_theta_ = 0.0;
  double anchor_t_ = 0.0;
};

bool uses_closed_form(const OrbitInfo& o, ReducedMethod method) {
  switch (o.kind) {
    case OrbitKind::Csch:
    case OrbitKind::Coth:
      return true;
    case OrbitKind::Sn:
    case OrbitKind::Dn:
      // m = 1 separatrices never reach the far turning point; the angle
      // integrand would be singular there.
      return method == ReducedMethod::Auto || o.m == 1.0;
    case OrbitKind::Cn:
      return method == ReducedMethod::Auto;
    default:
      return false;
  }
}

// Forward solve for non-negative times (given in increasing order).
void solve_forward(const QuarticEnergy& q, double u0, double up0, const std::vector<double>& times,
                   const SolveOptions& opts, std::vector<Sample2>& out) {
  const OrbitInfo o = classify_orbit(q, u0, up0);
  if (o.kind == OrbitKind::Equilibrium) {
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back({u0, 0.0});
    return;
  }
  if (uses_closed_form(o, opts.method)) {
    const ClosedOrbit orbit(o, u0, up0);
    for (double t : times) out.push_back(orbit.at(t));
    return;
  }
  AngleOrbit orbit(o, u0, up0, opts);
  for (double t : times) out.push_back(orbit.at(t));
}

}  // namespace

std::vector<ReducedSample> solve_quartic(const QuarticEnergy& q, double u0, double up0,
                                         std::span<const double> grid, const SolveOptions& opts) {
  std::vector<std::size_t> fwd;
  std::vector<std::size_t> bwd;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError("grid times must be finite");
    (grid[i] >= 0.0 ? fwd : bwd).push_back(i);
  }
  std::sort(fwd.begin(), fwd.end(), [&](auto a, auto b) { return grid[a] < grid[b]; });
  std::sort(bwd.begin(), bwd.end(), [&](auto a, auto b) { return grid[a] > grid[b]; });

  std::vector<ReducedSample> result(grid.size());
  auto run = [&](const std::vector<std::size_t>& idx, double direction) {
    if (idx.empty()) return;
    std::vector<double> times;
    times.reserve(idx.size());
    for (auto i : idx) times.push_back(direction * grid[i]);
    std::vector<Sample2> vals;
    vals.reserve(idx.size());
    // u(-t) for (u0, up0) is u(t) for (u0, -up0).
    solve_forward(q, u0, direction * up0, times, opts, vals);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      result[idx[j]] = {grid[idx[j]], vals[j].u, direction * vals[j].up};
    }
  };
  run(fwd, 1.0);
  run(bwd, -1.0);
  return result;
}

std::vector<ReducedSample> solve_reduced(const ReducedEquation& r, double u0, double up0,
                                         std::span<const double> grid, const SolveOptions& opts) {
  const QuarticEnergy q = energy_from_state(r, u0, up0);
  return solve_quartic(q, u0, up0, grid, opts);
}

}  // namespace heismag
