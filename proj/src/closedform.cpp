#include "heismag/closedform.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "heismag/errors.hpp"
#include "heismag/quadrature.hpp"

namespace heismag {

namespace {

template <class T>
using Point3 = std::array<T, 3>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// g1, V1 with c = -1/lambda: straight lines in (x, y).
template <class T>
Point3<T> g1_v1_linear(const FamilySpec& s, Variant v, T t) {
  const auto& k = s.k;
  const double l = s.lambda;
  const T x = k[0] * t + k[1];
  const T y = k[2] * t + k[3];
  if (v == Variant::AsPrinted) {
    return {x, y, -(t / l + k[0] * k[2] * t + k[1] * k[2])};
  }
  return {x, y, k[4] - t / l - 0.5 * k[0] * k[2] * t * t - k[1] * k[2] * t};
}

// g1, V1, mu = lambda c + 1 != 0: hyperbolic family. The as-printed form uses
// lambda + c where the planar solution needs mu.
template <class T>
Point3<T> g1_v1_exp(const FamilySpec& s, Variant v, T t) {
  using std::exp;
  const auto& k = s.k;
  const double l = s.lambda;
  const double c = s.c;
  const double mu = l * c + 1.0;
  const double denom = v == Variant::AsPrinted ? l + c : mu;
  const T e = exp(mu * t);
  const T f = exp(-mu * t);
  const T x = -(l / denom) * (k[0] * e + k[1] * f) + k[2];
  const T y = (1.0 / denom) * (k[0] * e - k[1] * f) + k[3];
  auto antiderivative = [&](const T& tt, const T& ee, const T& ff) {
    return (c + 2.0 * l * k[0] * k[1] / mu) * tt +
           (l / (2.0 * mu * mu)) * (k[0] * k[0] * ee * ee - k[1] * k[1] * ff * ff) -
           (k[2] / mu) * (k[0] * ee - k[1] * ff);
  };
  const T z_raw = antiderivative(t, e, f);
  if (v == Variant::AsPrinted) return {x, y, z_raw + k[4]};
  const T z0 = antiderivative(T(0.0), T(1.0), T(1.0));
  return {x, y, z_raw - z0 + k[4]};
}

// g1, V4, c = 0 and x = lambda y.
template <class T>
Point3<T> g1_v4_special(const FamilySpec& s, Variant v, T t) {
  const auto& k = s.k;
  const double l = s.lambda;
  const T y = k[0] * t + k[1];
  const T x = l * y;
  if (v == Variant::AsPrinted) {
    const double c = 0.0;
    return {x, y, (c - l * k[0] * k[1]) * t - (l * k[0] / 2.0) * t * t + k[2]};
  }
  return {x, y, k[2] - l * k[0] * k[1] * t - 0.5 * l * k[0] * k[0] * t * t};
}

// g2, V1 with c = 1/lambda.
template <class T>
Point3<T> g2_v1_linear(const FamilySpec& s, Variant v, T t) {
  const auto& k = s.k;
  const double l = s.lambda;
  const T x = k[0] * t + k[1];
  const T y = k[2] * t + k[3];
  if (v == Variant::AsPrinted) {
    return {x, y, (1.0 / l - k[0] * k[2]) * t - k[0] * k[2]};
  }
  return {x, y, k[4] + t / l - 0.5 * k[0] * k[2] * t * t - k[1] * k[2] * t};
}

// g2, V1, nu = lambda c - 1 != 0: circular family.
template <class T>
Point3<T> g2_v1_trig(const FamilySpec& s, Variant v, T t) {
  using std::cos;
  using std::sin;
  const auto& k = s.k;
  const double l = s.lambda;
  const double c = s.c;
  const double nu = l * c - 1.0;
  const T cs = cos(nu * t);
  const T sn = sin(nu * t);
  const T x = (l / nu) * (k[0] * cs + k[1] * sn) + k[2];
  const T y = (1.0 / nu) * (k[0] * sn - k[1] * cs) + k[3];
  const double k11 = k[0] * k[0], k22 = k[1] * k[1], k12 = k[0] * k[1];
  if (v == Variant::AsPrinted) {
    // Literal as-printed reading: the argument of the first sine is
    // (2t nu) / nu = 2t, and the nu+2 = lambda c + 1 denominators are kept.
    const double p = l * c + 1.0;
    const T braces = (l / (4.0 * nu)) * (k11 - k22) * sin(2.0 * t) +
                     (2.0 * l / p) * (k11 + k22) * 2.0 * t -
                     (l * k12 / (2.0 * p * p)) * cos(2.0 * t * nu) +
                     (k[0] * k[2] / nu) * sin(nu * t) - (k[1] * k[2] / nu) * cos(nu * t);
    return {x, y, c * t - braces + k[4]};
  }
  auto antiderivative = [&](const T& tt, const T& ct, const T& st, const T& c2, const T& s2) {
    return c * tt -
           (l / nu) * (0.5 * (k11 + k22) * tt + (k11 - k22) / (4.0 * nu) * s2 -
                       k12 / (2.0 * nu) * c2) -
           (k[2] / nu) * (k[0] * st - k[1] * ct);
  };
  const T z_raw = antiderivative(t, cs, sn, cos(2.0 * nu * t), sin(2.0 * nu * t));
  const T z0 = antiderivative(T(0.0), T(1.0), T(0.0), T(1.0), T(0.0));
  return {x, y, z_raw - z0 + k[4]};
}

// g2, V4 with lambda = 1, c = 2: z' + x y' vanishes identically.
template <class T>
Point3<T> g2_v4_circular(const FamilySpec& s, Variant, T t) {
  using std::cos;
  using std::sin;
  return {2.0 * cos(2.0 * t), -2.0 * sin(2.0 * t), 4.0 * t + sin(4.0 * t) + s.c1};
}

template <class T>
Point3<T> eval_point(const FamilySpec& s, T t) {
  switch (s.family) {
    case Family::G1_V1_LINEAR:
      return g1_v1_linear(s, s.variant, t);
    case Family::G1_V1_EXP:
      return g1_v1_exp(s, s.variant, t);
    case Family::G1_V4_SPECIAL:
      return g1_v4_special(s, s.variant, t);
    case Family::G2_V1_LINEAR:
      return g2_v1_linear(s, s.variant, t);
    case Family::G2_V1_TRIG:
      return g2_v1_trig(s, s.variant, t);
    case Family::G2_V4_CIRCULAR:
      return g2_v4_circular(s, s.variant, t);
  }
  return {};
}

double central_derivative(const ScalarFn& f, double t) {
  const double h = 1e-3;
  return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::G1_V1_LINEAR:
      return "g1-v1-linear";
    case Family::G1_V1_EXP:
      return "g1-v1-exp";
    case Family::G1_V4_SPECIAL:
      return "g1-v4-special";
    case Family::G2_V1_LINEAR:
      return "g2-v1-linear";
    case Family::G2_V1_TRIG:
      return "g2-v1-trig";
    case Family::G2_V4_CIRCULAR:
      return "g2-v4-circular";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  const auto s = lower(name);
  for (Family f : kAllFamilies) {
    if (family_name(f) == s) return f;
  }
  throw UnknownFamily("unknown family '" + std::string(name) + "'");
}

std::string_view variant_name(Variant v) {
  return v == Variant::AsPrinted ? "as-printed" : "derivation";
}

Variant parse_variant(std::string_view name) {
  const auto s = lower(name);
  if (s == "as-printed" || s == "asprinted" || s == "printed") return Variant::AsPrinted;
  if (s == "derivation" || s == "derivation-consistent" || s == "derived") {
    return Variant::DerivationConsistent;
  }
  throw DomainError("unknown variant '" + std::string(name) + "' (expected as-printed|derivation)");
}

ModelParams family_params(const FamilySpec& spec) {
  const bool g1 = spec.family == Family::G1_V1_LINEAR || spec.family == Family::G1_V1_EXP ||
                  spec.family == Family::G1_V4_SPECIAL;
  return {g1 ? Metric::G1 : Metric::G2, spec.lambda};
}

KillingId family_killing(Family f) {
  return (f == Family::G1_V4_SPECIAL || f == Family::G2_V4_CIRCULAR) ? KillingId::V4
                                                                     : KillingId::V1;
}

double family_c(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::G1_V1_LINEAR:
      return -1.0 / spec.lambda;
    case Family::G2_V1_LINEAR:
      return 1.0 / spec.lambda;
    case Family::G1_V4_SPECIAL:
      return 0.0;
    case Family::G2_V4_CIRCULAR:
      return 2.0;
    default:
      return spec.c;
  }
}

void validate(const FamilySpec& spec) {
  family_params(spec).validate();
  const double l = spec.lambda;
  switch (spec.family) {
    case Family::G1_V1_EXP:
      if (l * spec.c + 1.0 == 0.0) {
        throw DomainError("g1-v1-exp requires c != -1/lambda (use g1-v1-linear)");
      }
      if (spec.variant == Variant::AsPrinted && l + spec.c == 0.0) {
        throw DomainError("printed g1-v1-exp divides by lambda + c = 0");
      }
      break;
    case Family::G2_V1_TRIG:
      if (l * spec.c - 1.0 == 0.0) {
        throw DomainError("g2-v1-trig requires c != 1/lambda (use g2-v1-linear)");
      }
      if (spec.variant == Variant::AsPrinted && l * spec.c + 1.0 == 0.0) {
        throw DomainError("printed g2-v1-trig divides by lambda c + 1 = 0");
      }
      break;
    case Family::G2_V4_CIRCULAR:
      if (l != 1.0 || spec.c != 2.0) {
        throw DomainError("g2-v4-circular is defined for lambda = 1 and c = 2 only");
      }
      break;
    default:
      break;
  }
}

CurveJet eval_family_jet(const FamilySpec& spec, double t) {
  validate(spec);
  FamilySpec s = spec;
  s.c = family_c(spec);
  const auto p = eval_point<Jet>(s, Jet::variable(t));
  return {t, {p[0].v, p[1].v, p[2].v}, {p[0].d1, p[1].d1, p[2].d1}, {p[0].d2, p[1].d2, p[2].d2}};
}

CurveState eval_family(const FamilySpec& spec, double t) {
  const CurveJet j = eval_family_jet(spec, t);
  return {t, j.pos, j.vel};
}

double z_by_quadrature(const ModelParams& p, KillingId k, const ScalarFn& xfun, const ScalarFn& yfun,
                       double c, double z0, double t, const ScalarFn& dyfun, double tol) {
  p.validate();
  auto integrand = [&](double s) {
    const double x = xfun(s);
    const double y = yfun(s);
    const double dy = dyfun ? dyfun(s) : central_derivative(yfun, s);
    return field_potential(p, k, x, y) + c - x * dy;
  };
  if (t == 0.0) return z0;
  return z0 + integrate_gk15(integrand, 0.0, t, tol).value;
}

// ---------------------------------------------------------------------------
// Reduced equations

std::string_view to_string(ReducedKind k) {
  switch (k) {
    case ReducedKind::G1_V2:
      return "g1-v2";
    case ReducedKind::G1_V3:
      return "g1-v3";
    case ReducedKind::G2_V2:
      return "g2-v2";
    case ReducedKind::G2_V3:
      return "g2-v3";
  }
  return "?";
}

ModelParams reduced_params(const ReducedEquation& r) {
  const bool g1 = r.which == ReducedKind::G1_V2 || r.which == ReducedKind::G1_V3;
  return {g1 ? Metric::G1 : Metric::G2, r.lambda};
}

KillingId reduced_killing(const ReducedEquation& r) {
  return reduces_x(r) ? KillingId::V2 : KillingId::V3;
}

bool reduces_x(const ReducedEquation& r) {
  return r.which == ReducedKind::G1_V2 || r.which == ReducedKind::G2_V2;
}

double reduced_rhs(const ReducedEquation& r, double u, double /*up*/) {
  const double l = r.lambda;
  const double c = r.c;
  const double u2 = u * u;
  const double u3 = u2 * u;
  switch (r.which) {
    case ReducedKind::G1_V2:
      return 2.0 * u3 + 3.0 * l * c * u2 + (1.0 + l * l * c * c) * u + l * c;
    case ReducedKind::G1_V3:
      return 2.0 * l * l * u3 - 3.0 * l * l * c * u2 + (l * l * c * c - 1.0) * u + c;
    case ReducedKind::G2_V2:
      return -2.0 * u3 + 3.0 * l * c * u2 + (1.0 - l * l * c * c) * u - l * c;
    case ReducedKind::G2_V3:
      return -2.0 * l * l * u3 - 3.0 * l * l * c * u2 + (1.0 - l * l * c * c) * u + c;
  }
  return 0.0;
}

double companion_rate(const ReducedEquation& r, double u) {
  const double l = r.lambda;
  const double c = r.c;
  switch (r.which) {
    case ReducedKind::G1_V2:
      return -u * u / l - c * u;
    case ReducedKind::G1_V3:
      return l * l * (u * u - c * u);
    case ReducedKind::G2_V2:
      return -u * u / l + c * u;
    case ReducedKind::G2_V3:
      return -l * l * (u * u + c * u);
  }
  return 0.0;
}

namespace {

double companion_rate_du(const ReducedEquation& r, double u) {
  const double l = r.lambda;
  const double c = r.c;
  switch (r.which) {
    case ReducedKind::G1_V2:
      return -2.0 * u / l - c;
    case ReducedKind::G1_V3:
      return l * l * (2.0 * u - c);
    case ReducedKind::G2_V2:
      return -2.0 * u / l + c;
    case ReducedKind::G2_V3:
      return -l * l * (2.0 * u + c);
  }
  return 0.0;
}

// d/dt field_potential along (x', y').
double potential_rate(const ModelParams& p, KillingId k, double x, double y, double xp,
                      double yp) {
  const double l = p.lambda;
  const double sign = p.metric == Metric::G1 ? 1.0 : -1.0;
  switch (k) {
    case KillingId::V1:
      return 0.0;
    case KillingId::V2:
      return sign * xp / l;
    case KillingId::V3:
      return -sign * yp;
    case KillingId::V4:
      return sign * x * xp / l - l * y * yp;
  }
  return 0.0;
}

}  // namespace

Trajectory lift_reduced(const ReducedEquation& r, std::span<const ReducedSample> samples,
                        const LiftInit& init) {
  const ModelParams p = reduced_params(r);
  p.validate();
  const KillingId k = reduced_killing(r);
  const bool rx = reduces_x(r);

  struct Jet3 {
    double x, y, xp, yp, zp, xpp, ypp, zpp;
  };
  auto local = [&](const ReducedSample& s) {
    const double w = companion_rate(r, s.u);
    const double wp = companion_rate_du(r, s.u) * s.up;
    const double upp = reduced_rhs(r, s.u, s.up);
    Jet3 j{};
    j.xp = rx ? s.up : w;
    j.yp = rx ? w : s.up;
    j.xpp = rx ? upp : wp;
    j.ypp = rx ? wp : upp;
    return j;
  };

  std::vector<CurveState> out;
  out.reserve(samples.size());
  double companion = init.companion;
  double z = init.z;
  Jet3 prev{};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ReducedSample& s = samples[i];
    Jet3 j = local(s);
    if (i > 0) {
      const double h = s.t - samples[i - 1].t;
      // Cubic Hermite rule: exact for cubics, O(h^4) globally.
      const double c0 = rx ? prev.yp : prev.xp;
      const double c1 = rx ? j.yp : j.xp;
      const double d0 = rx ? prev.ypp : prev.xpp;
      const double d1 = rx ? j.ypp : j.xpp;
      companion += 0.5 * h * (c0 + c1) + h * h / 12.0 * (d0 - d1);
    }
    j.x = rx ? s.u : companion;
    j.y = rx ? companion : s.u;
    const double vertical = field_potential(p, k, j.x, j.y) + r.c;
    j.zp = vertical - j.x * j.yp;
    j.zpp = potential_rate(p, k, j.x, j.y, j.xp, j.yp) - j.xp * j.yp - j.x * j.ypp;
    if (i > 0) {
      const double h = s.t - samples[i - 1].t;
      z += 0.5 * h * (prev.zp + j.zp) + h * h / 12.0 * (prev.zpp - j.zpp);
    }
    out.push_back({s.t, {j.x, j.y, z}, {j.xp, j.yp, j.zp}});
    prev = j;
  }
  TrajectoryMeta meta;
  meta.integrator = "lift";
  return Trajectory(p, MagneticField{k, 1.0}, std::move(out), std::move(meta));
}

}  // namespace heismag
