#pragma once

// Scalar reductions of the V2 and V3 systems. Integrating the vertical
// equation (constant c) and one companion equation (integration constant 0)
// leaves a single second-order equation for u = x (V2) or u = y (V3):
//
//   g1, V2:  x'' = 2x^3 + 3 lambda c x^2 + (1 + lambda^2 c^2) x + lambda c,   y' = -x^2/lambda - c x
//   g1, V3:  y'' = 2 lambda^2 y^3 - 3 lambda^2 c y^2 + (lambda^2 c^2 - 1) y + c,
//            x' = lambda^2 (y^2 - c y)
//   g2, V2:  x'' = -2x^3 + 3 lambda c x^2 + (1 - lambda^2 c^2) x - lambda c,  y' = -x^2/lambda + c x
//   g2, V3:  y'' = -2 lambda^2 y^3 - 3 lambda^2 c y^2 + (1 - lambda^2 c^2) y + c,
//            x' = -lambda^2 (y^2 + c y)

#include <span>
#include <string_view>

#include "heismag/dynamics.hpp"
#include "heismag/geometry.hpp"

namespace heismag {

enum class ReducedKind { G1_V2, G1_V3, G2_V2, G2_V3 };

inline constexpr std::array<ReducedKind, 4> kAllReduced = {ReducedKind::G1_V2, ReducedKind::G1_V3,
                                                           ReducedKind::G2_V2, ReducedKind::G2_V3};

struct ReducedEquation {
  ReducedKind which = ReducedKind::G1_V2;
  double lambda = 1.0;
  double c = 0.0;
};

/// One point of a reduced solution: the reduced variable and its derivative.
struct ReducedSample {
  double t = 0.0;
  double u = 0.0;
  double up = 0.0;
};

std::string_view to_string(ReducedKind k);

ModelParams reduced_params(const ReducedEquation& r);
KillingId reduced_killing(const ReducedEquation& r);
/// True when the reduced variable is x (V2 kinds), false when it is y (V3 kinds).
bool reduces_x(const ReducedEquation& r);

/// u'' of the reduced equation, c-terms included.
double reduced_rhs(const ReducedEquation& r, double u, double up);

/// Derivative of the companion coordinate (y for V2 kinds, x for V3 kinds) as a
/// function of the reduced variable.
double companion_rate(const ReducedEquation& r, double u);

struct LiftInit {
  double companion = 0.0;
  double z = 0.0;
};

/// Rebuilds the full curve from reduced samples: the companion coordinate by
/// cumulative Hermite quadrature of companion_rate, then z from
/// z' + x y' = field_potential(x, y) + c. Samples must have increasing t.
Trajectory lift_reduced(const ReducedEquation& r, std::span<const ReducedSample> samples,
                        const LiftInit& init = {});

}  // namespace heismag
