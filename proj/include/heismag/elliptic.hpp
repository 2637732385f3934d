#pragma once

// Jacobi elliptic functions and exact solutions of the reduced equations at
// c = 0. Every reduced equation then has the form u'' = 2 q4 u^3 + q2 u with
// energy u'^2 - Q(u), Q(u) = q4 u^4 + q2 u^2 + q0. Throughout, m is the
// parameter (m = k^2), not the modulus.

#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "heismag/reduced.hpp"

namespace heismag {

/// Complete elliptic integral of the first kind, 0 <= m < 1.
double complete_K(double m);

/// Carlson's symmetric integral R_F(x, y, z); at most one argument may be zero.
double carlson_rf(double x, double y, double z);

/// Incomplete integral F(phi | m) for real phi. For m = 1 only |phi| < pi/2.
double incomplete_F(double phi, double m);

struct JacobiTriple {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

/// sn, cn, dn of real u for 0 <= m <= 1 (descending Landen transformation).
JacobiTriple jacobi(double u, double m);

struct QuarticEnergy {
  double q4 = 0.0;
  double q2 = 0.0;
  double q0 = 0.0;
  double energy = 0.0;

  double Q(double u) const { return (q4 * u * u + q2) * u * u + q0; }
  /// u'^2 on the orbit.
  double P(double u) const { return Q(u) + energy; }
};

/// The quartic of r with energy zero. Throws Unsupported if r.c != 0.
QuarticEnergy quartic_of(const ReducedEquation& r);
/// Quartic of r with E = up^2 - Q(u). Throws Unsupported if r.c != 0.
QuarticEnergy energy_from_state(const ReducedEquation& r, double u, double up);

enum class OrbitKind {
  Equilibrium,
  Sn,        // oscillation through 0 inside the barrier (q4 > 0)
  Cn,        // oscillation through 0 between +-sqrt(s2) (q4 < 0)
  Dn,        // one-signed oscillation in [sqrt(s1), sqrt(s2)] (q4 < 0)
  Csch,      // zero energy, q2 > 0: decays to 0 one way, escapes the other
  Coth,      // outside a double root: escapes, tends to the root the other way
  Turning,   // one turning point at |u| = sqrt(s2), escapes both ways
  Monotone,  // no turning point, escapes both ways
};

std::string_view to_string(OrbitKind k);

struct OrbitInfo {
  OrbitKind kind = OrbitKind::Equilibrium;
  QuarticEnergy quartic;
  /// Roots of q4 s^2 + q2 s + (q0 + E) in s = u^2, s1 <= s2; NaN when complex.
  double s1 = std::numeric_limits<double>::quiet_NaN();
  double s2 = std::numeric_limits<double>::quiet_NaN();
  /// Jacobi parameter and frequency for Sn, Cn, Dn (m = 1 on separatrices).
  double m = 0.0;
  double omega = 0.0;
  /// Period in t; infinity for non-periodic orbits.
  double period = std::numeric_limits<double>::infinity();
};

/// Classifies the orbit through (u0, up0) of u'^2 = q.P(u).
OrbitInfo classify_orbit(const QuarticEnergy& q, double u0, double up0);

enum class ReducedMethod {
  Auto,        // jacobi() / closed forms where available, quadrature otherwise
  Quadrature,  // quadrature inversion for every orbit with turning points or escape
};

struct SolveOptions {
  ReducedMethod method = ReducedMethod::Auto;
  double quad_tol = 1e-12;
  double root_tol = 1e-13;
};

/// u(t), u'(t) on grid (any order, any sign) for the orbit through (u0, up0) at
/// t = 0. Throws Unsupported if r.c != 0 and UnboundedOrbit if a grid time lies
/// beyond the escape time.
std::vector<ReducedSample> solve_reduced(const ReducedEquation& r, double u0, double up0,
                                         std::span<const double> grid,
                                         const SolveOptions& opts = {});

/// Same for a bare quartic (u'' = 2 q4 u^3 + q2 u).
std::vector<ReducedSample> solve_quartic(const QuarticEnergy& q, double u0, double up0,
                                         std::span<const double> grid,
                                         const SolveOptions& opts = {});

}  // namespace heismag
