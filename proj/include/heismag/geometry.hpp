#pragma once

// Frames, metrics, Levi-Civita tables, the Lorentzian cross product and the
// Killing fields of the two non-flat left-invariant Lorentzian metrics on the
// Heisenberg group H3:
//
//   g1 = -dx^2/lambda^2 + dy^2 + (x dy + dz)^2
//   g2 =  dx^2/lambda^2 + dy^2 - (x dy + dz)^2
//
// Vectors are carried either as coordinate components (dx, dy, dz) or as
// components relative to the orthonormal frame {e1, e2, e3}; e3 is timelike
// for both metrics, so the frame inner product has signature (+, +, -).

#include <array>
#include <functional>
#include <string>
#include <string_view>

namespace heismag {

enum class Metric { G1, G2 };

struct ModelParams {
  Metric metric = Metric::G1;
  double lambda = 1.0;

  /// Throws DomainError unless lambda is finite and positive.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct CoordPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Coordinate derivatives (x', y', z'); reused for second derivatives.
struct CoordVelocity {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
};

using CoordAcceleration = CoordVelocity;

struct FrameVector {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? a1 : (i == 1 ? a2 : a3); }

  friend constexpr FrameVector operator+(FrameVector a, FrameVector b) {
    return {a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3};
  }
  friend constexpr FrameVector operator-(FrameVector a, FrameVector b) {
    return {a.a1 - b.a1, a.a2 - b.a2, a.a3 - b.a3};
  }
  friend constexpr FrameVector operator*(double s, FrameVector a) {
    return {s * a.a1, s * a.a2, s * a.a3};
  }
  friend constexpr bool operator==(const FrameVector&, const FrameVector&) = default;
};

enum class KillingId { V1, V2, V3, V4 };

inline constexpr std::array<KillingId, 4> kAllKilling = {KillingId::V1, KillingId::V2,
                                                         KillingId::V3, KillingId::V4};
inline constexpr std::array<Metric, 2> kAllMetrics = {Metric::G1, Metric::G2};

/// Magnetic field F_V = charge * i_V dv_g. A zero charge gives the geodesic flow.
struct MagneticField {
  KillingId killing = KillingId::V1;
  double charge = 1.0;

  friend bool operator==(const MagneticField&, const MagneticField&) = default;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

std::string_view to_string(Metric m);
std::string_view to_string(KillingId k);
/// Accepts "g1"/"g2" (case-insensitive). Throws DomainError otherwise.
Metric parse_metric(std::string_view name);
/// Accepts "V1".."V4" (case-insensitive). Throws DomainError otherwise.
KillingId parse_killing(std::string_view name);

/// Frame components of a coordinate vector at pt.
FrameVector frame_components(const ModelParams& p, const CoordPoint& pt, const CoordVelocity& v);

/// Inverse of frame_components.
CoordVelocity coord_components(const ModelParams& p, const CoordPoint& pt, const FrameVector& a);

/// Coordinate expression of the frame vector e_i (i = 1, 2, 3) at pt.
CoordVelocity frame_basis(const ModelParams& p, int i, const CoordPoint& pt);

/// a1 b1 + a2 b2 - a3 b3
double inner(const FrameVector& a, const FrameVector& b);

/// Lorentzian vector product in the frame. The orientation is the one for which
/// inner(cross(a, b), c) = det[a; b; c].
FrameVector cross(const FrameVector& a, const FrameVector& b);

/// nabla_{e_i} e_j for i, j in {1, 2, 3}. Throws std::out_of_range otherwise.
FrameVector connection_coeff(const ModelParams& p, int i, int j);

/// Killing field V_k at pt, in frame components.
FrameVector killing_field(const ModelParams& p, KillingId k, const CoordPoint& pt);

/// Coordinate-basis matrix of the metric at pt (rows/cols x, y, z).
Matrix3 metric_tensor(const ModelParams& p, const CoordPoint& pt);

/// Coordinate vector field used by lie_derivative_residual.
using CoordField = std::function<CoordVelocity(const CoordPoint&)>;

/// max_{i,j} |(L_W g)_{ij}| at pt, with every partial derivative of the metric
/// and of W taken by central differences of step h.
double lie_derivative_residual(const ModelParams& p, const CoordField& w, const CoordPoint& pt,
                               double h = 1e-5);

/// lie_derivative_residual for the Killing field V_k. Near zero for genuine
/// Killing fields (bounded by rounding and O(h^2) truncation).
double killing_residual(const ModelParams& p, KillingId k, const CoordPoint& pt, double h = 1e-5);

}  // namespace heismag
