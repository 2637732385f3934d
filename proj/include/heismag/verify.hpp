#pragma once

// The referee: does a curve satisfy nabla_t t = q V ^ t, and does it conserve
// what it should?

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "heismag/closedform.hpp"
#include "heismag/dynamics.hpp"
#include "heismag/geometry.hpp"

namespace heismag {

inline constexpr double kAnalyticTol = 1e-8;
inline constexpr double kFiniteDifferenceTol = 1e-6;
inline constexpr std::size_t kDefaultSamples = 1001;

struct SampleResidual {
  double t = 0.0;
  double residual = 0.0;
};

struct ResidualReport {
  double max_ode_residual = 0.0;
  double max_speed_drift = 0.0;
  double max_first_integral_drift = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::vector<SampleResidual> per_sample;
};

/// n uniform points on [a, b] including both ends (n >= 2).
std::vector<double> uniform_grid(double a, double b, std::size_t n);

/// Euclidean norm of the frame components of nabla_t t - charge * V ^ t.
double ode_residual(const ModelParams& p, const MagneticField& field, const CurveJet& j);
double ode_residual(const ModelParams& p, KillingId k, const CurveJet& j);

/// Acceleration at sample i from fourth-order finite differences of the sampled
/// velocities (centred where possible, one-sided near the ends). Throws
/// GridTooCoarse when the trajectory has fewer than five samples.
CurveJet finite_difference_jet(const Trajectory& traj, std::size_t i);

/// Residual of the sampled trajectory at sample i (finite-difference mode).
double ode_residual(const Trajectory& traj, std::size_t i);

/// Residual, speed drift and first-integral drift of a family over grid.
ResidualReport check_family(const FamilySpec& spec, std::span<const double> grid,
                            double tol = kAnalyticTol);

/// Same for a sampled trajectory, derivatives by finite differences.
ResidualReport check_trajectory(const Trajectory& traj, double tol = kFiniteDifferenceTol);

/// Max |speed - speed_0| and max |I - I_0| over the samples.
std::pair<double, double> conservation_report(const Trajectory& traj);

/// Max Euclidean coordinate distance between samples at equal times. Throws
/// ParamMismatch for different params, fields or sample times.
double compare(const Trajectory& a, const Trajectory& b);
/// Against a closed-form family evaluated at a's sample times.
double compare(const Trajectory& a, const FamilySpec& spec);
/// Against any curve evaluable at a's sample times.
double compare(const Trajectory& a, const std::function<CoordPoint(double)>& curve);

}  // namespace heismag
