#pragma once

#include <functional>

namespace heismag {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature of f over [a, b].
/// Subdivides the interval with the largest error estimate until the summed
/// estimate is below tol * max(1, |integral|). Throws QuadratureFailure when
/// max_intervals is reached first or the integrand is not finite.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double tol = 1e-12, int max_intervals = 4000);

}  // namespace heismag
