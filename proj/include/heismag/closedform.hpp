#pragma once

// Closed-form families of Killing magnetic curves.
//
//   family           metric/field   constants used
//   g1-v1-linear     g1, V1         k1..k5          (c forced to -1/lambda)
//   g1-v1-exp        g1, V1         c, k1..k5       (lambda c + 1 != 0)
//   g1-v4-special    g1, V4         k1, k2, k3      (c forced to 0, x = lambda y)
//   g2-v1-linear     g2, V1         k1..k5          (c forced to 1/lambda)
//   g2-v1-trig       g2, V1         c, k1..k5       (lambda c - 1 != 0)
//   g2-v4-circular   g2, V4         c1              (lambda = 1, c = 2)
//
// Each family has two variants. AsPrinted keeps the original closed forms
// verbatim, misprints included. DerivationConsistent keeps those
// x(t), y(t) where they solve the planar system and rebuilds z(t) as the exact
// antiderivative of z' = field_potential(x, y) + c - x y', normalised so that
// z(0) equals the family's z-constant (k5, k3 or c1).

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "heismag/dynamics.hpp"
#include "heismag/geometry.hpp"
#include "heismag/jet.hpp"
#include "heismag/reduced.hpp"

namespace heismag {

enum class Family { G1_V1_LINEAR, G1_V1_EXP, G1_V4_SPECIAL, G2_V1_LINEAR, G2_V1_TRIG, G2_V4_CIRCULAR };
enum class Variant { AsPrinted, DerivationConsistent };

inline constexpr std::array<Family, 6> kAllFamilies = {
    Family::G1_V1_LINEAR, Family::G1_V1_EXP,  Family::G1_V4_SPECIAL,
    Family::G2_V1_LINEAR, Family::G2_V1_TRIG, Family::G2_V4_CIRCULAR};

struct FamilySpec {
  Family family = Family::G2_V4_CIRCULAR;
  Variant variant = Variant::DerivationConsistent;
  double lambda = 1.0;
  double c = 0.0;
  std::array<double, 5> k{};
  double c1 = 0.0;
};

/// CLI names: "g1-v1-linear", ..., "g2-v4-circular".
std::string_view family_name(Family f);
/// Throws UnknownFamily.
Family parse_family(std::string_view name);
/// "as-printed" / "derivation".
std::string_view variant_name(Variant v);
/// Accepts "as-printed", "asprinted", "derivation", "derivation-consistent".
Variant parse_variant(std::string_view name);

ModelParams family_params(const FamilySpec& spec);
KillingId family_killing(Family f);
/// The constant c actually used by the family (forced for the linear,
/// special and circular families).
double family_c(const FamilySpec& spec);
/// Throws DomainError when the spec violates its family's constraints.
void validate(const FamilySpec& spec);

/// Position and analytic velocity at t.
CurveState eval_family(const FamilySpec& spec, double t);
/// Position, velocity and acceleration at t (exact derivatives via Jet).
CurveJet eval_family_jet(const FamilySpec& spec, double t);

using ScalarFn = std::function<double(double)>;

/// z(t) = z0 + int_0^t (field_potential(x, y) + c - x y') ds by adaptive
/// quadrature. y' comes from dyfun when given, otherwise from fourth-order
/// central differences of yfun. Throws QuadratureFailure if tol is not met.
double z_by_quadrature(const ModelParams& p, KillingId k, const ScalarFn& xfun, const ScalarFn& yfun,
                       double c, double z0, double t, const ScalarFn& dyfun = {},
                       double tol = 1e-12);

}  // namespace heismag
