#pragma once

// The Lorentz equation  nabla_t t = q V ^ t  written as a first-order system in
// (x, y, z, x', y', z'), its integration, and the quantities it conserves.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "heismag/geometry.hpp"

namespace heismag {

struct CurveState {
  double t = 0.0;
  CoordPoint pos;
  CoordVelocity vel;
};

/// Position with its first two derivatives at parameter t.
struct CurveJet {
  double t = 0.0;
  CoordPoint pos;
  CoordVelocity vel;
  CoordAcceleration acc;
};

using StateDerivative = std::array<double, 6>;

/// Frame components of nabla_t t from coordinate position, velocity and
/// acceleration (closed expression for each metric).
FrameVector covariant_acceleration(const ModelParams& p, const CurveState& s,
                                   const CoordAcceleration& acc);

/// Same quantity assembled as sum_i a_i' e_i + sum_{ij} a_i a_j nabla_{e_i} e_j
/// from connection_coeff. Independent route used for cross-checks.
FrameVector covariant_acceleration_from_connection(const ModelParams& p, const CurveState& s,
                                                   const CoordAcceleration& acc);

/// Coordinate second derivatives solving nabla_t t = charge * V ^ t.
CoordAcceleration lorentz_acceleration(const ModelParams& p, const MagneticField& field,
                                       const CoordPoint& pos, const CoordVelocity& vel);

/// (x', y', z', x'', y'', z'') at s.
StateDerivative lorentz_rhs(const ModelParams& p, const MagneticField& field, const CurveState& s);
StateDerivative lorentz_rhs(const ModelParams& p, KillingId k, const CurveState& s);

/// g(t, t) for t = gamma'. Positive for spacelike, negative for timelike curves.
double speed(const ModelParams& p, const CurveState& s);

/// Rescales the velocity so that |g(t, t)| = 1. Throws DomainError for null
/// (lightlike) or zero velocity.
CurveState normalize_speed(const ModelParams& p, const CurveState& s);

/// Function of (x, y) whose derivative along any solution (charge 1) equals the
/// derivative of z' + x y'. Integrating the vertical equation gives
/// z' + x y' = charge * field_potential + c.
double field_potential(const ModelParams& p, KillingId k, double x, double y);

/// z' + x y' - charge * field_potential(x, y); constant along solutions.
double first_integral(const ModelParams& p, const MagneticField& field, const CurveState& s);
double first_integral(const ModelParams& p, KillingId k, const CurveState& s);

enum class IntegratorMethod { FixedRK4, EmbeddedRK45 };

std::string_view to_string(IntegratorMethod m);

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::EmbeddedRK45;
  double t_end = 1.0;
  /// Step of FixedRK4; initial trial step of EmbeddedRK45 when > 0.
  double dt = 1e-3;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double dt_min = 1e-12;
  double dt_max = 0.1;
  /// When non-empty, samples are recorded exactly at these (strictly increasing) times
  /// instead of at every accepted step.
  std::vector<double> output_times;
  std::size_t max_steps = 50'000'000;

  /// Throws DomainError on non-positive tolerances/steps or dt_min > dt_max.
  void validate(double t_start) const;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double smallest_step = 0.0;
  double largest_step = 0.0;
};

struct TrajectoryMeta {
  std::string integrator;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  double dt = 0.0;
  IntegratorStats stats;
};

/// Immutable sampled curve. Sample times are strictly increasing.
class Trajectory {
 public:
  Trajectory(ModelParams params, MagneticField field, std::vector<CurveState> samples,
             TrajectoryMeta meta = {});

  const ModelParams& params() const { return params_; }
  const MagneticField& field() const { return field_; }
  const std::vector<CurveState>& samples() const { return samples_; }
  const TrajectoryMeta& meta() const { return meta_; }
  std::size_t size() const { return samples_.size(); }
  const CurveState& operator[](std::size_t i) const { return samples_[i]; }
  const CurveState& front() const { return samples_.front(); }
  const CurveState& back() const { return samples_.back(); }

 private:
  ModelParams params_;
  MagneticField field_;
  std::vector<CurveState> samples_;
  TrajectoryMeta meta_;
};

/// Integrates the Lorentz equation from init to cfg.t_end.
/// Throws StepUnderflow when the adaptive step drops below dt_min and
/// IntegratorOverflow when the state stops being finite.
Trajectory integrate(const ModelParams& p, const MagneticField& field, const CurveState& init,
                     const IntegratorConfig& cfg);
Trajectory integrate(const ModelParams& p, KillingId k, const CurveState& init,
                     const IntegratorConfig& cfg);

}  // namespace heismag
