#pragma once

// Truncated second-order Taylor arithmetic: a Jet carries f, f' and f'' of a
// scalar function of one variable. Closed-form curves are written once as
// templates and evaluated on Jet to get exact velocities and accelerations.

#include <cmath>

namespace heismag {

struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
  constexpr Jet(double value, double first, double second) : v(value), d1(first), d2(second) {}

  static constexpr Jet variable(double t) { return {t, 1.0, 0.0}; }

  friend constexpr Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend constexpr Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  friend constexpr Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
  friend constexpr Jet operator*(Jet a, Jet b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
  }
  friend constexpr Jet operator/(Jet a, Jet b) {
    const double inv = 1.0 / b.v;
    // chain rule for 1/u: f' = -1/u^2, f'' = 2/u^3
    const Jet rb{inv, -inv * inv * b.d1, 2.0 * inv * inv * inv * b.d1 * b.d1 - inv * inv * b.d2};
    return a * rb;
  }
  Jet& operator+=(Jet o) { return *this = *this + o; }
  Jet& operator-=(Jet o) { return *this = *this - o; }
  Jet& operator*=(Jet o) { return *this = *this * o; }
};

namespace detail {
/// Compose an outer function with value f, first f1, second f2 derivative.
constexpr Jet compose(const Jet& u, double f, double f1, double f2) {
  return {f, f1 * u.d1, f2 * u.d1 * u.d1 + f1 * u.d2};
}
}  // namespace detail

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.v);
  return detail::compose(u, e, e, e);
}
inline Jet sin(const Jet& u) {
  const double s = std::sin(u.v);
  return detail::compose(u, s, std::cos(u.v), -s);
}
inline Jet cos(const Jet& u) {
  const double c = std::cos(u.v);
  return detail::compose(u, c, -std::sin(u.v), -c);
}
inline Jet sqrt(const Jet& u) {
  const double r = std::sqrt(u.v);
  return detail::compose(u, r, 0.5 / r, -0.25 / (r * u.v));
}

}  // namespace heismag
