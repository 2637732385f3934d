#include "heismag/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "heismag/errors.hpp"

namespace heismag {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

CoordPoint shifted(CoordPoint pt, int axis, double delta) {
  if (axis == 0) pt.x += delta;
  if (axis == 1) pt.y += delta;
  if (axis == 2) pt.z += delta;
  return pt;
}

std::array<double, 3> as_array(const CoordVelocity& v) { return {v.dx, v.dy, v.dz}; }

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw DomainError("lambda must be finite and > 0, got " + std::to_string(lambda));
  }
}

std::string_view to_string(Metric m) { return m == Metric::G1 ? "g1" : "g2"; }

std::string_view to_string(KillingId k) {
  switch (k) {
    case KillingId::V1:
      return "V1";
    case KillingId::V2:
      return "V2";
    case KillingId::V3:
      return "V3";
    case KillingId::V4:
      return "V4";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  const auto s = lower(name);
  if (s == "g1") return Metric::G1;
  if (s == "g2") return Metric::G2;
  throw DomainError("unknown metric '" + std::string(name) + "' (expected g1 or g2)");
}

KillingId parse_killing(std::string_view name) {
  const auto s = lower(name);
  if (s == "v1") return KillingId::V1;
  if (s == "v2") return KillingId::V2;
  if (s == "v3") return KillingId::V3;
  if (s == "v4") return KillingId::V4;
  throw DomainError("unknown Killing field '" + std::string(name) + "' (expected V1..V4)");
}

FrameVector frame_components(const ModelParams& p, const CoordPoint& pt, const CoordVelocity& v) {
  const double vertical = v.dz + pt.x * v.dy;
  if (p.metric == Metric::G1) return {vertical, v.dy, v.dx / p.lambda};
  return {v.dy, v.dx / p.lambda, vertical};
}

CoordVelocity coord_components(const ModelParams& p, const CoordPoint& pt, const FrameVector& a) {
  if (p.metric == Metric::G1) return {p.lambda * a.a3, a.a2, a.a1 - pt.x * a.a2};
  return {p.lambda * a.a2, a.a1, a.a3 - pt.x * a.a1};
}

CoordVelocity frame_basis(const ModelParams& p, int i, const CoordPoint& pt) {
  if (i < 1 || i > 3) throw std::out_of_range("frame index must be 1, 2 or 3");
  FrameVector unit{};
  if (i == 1) unit.a1 = 1.0;
  if (i == 2) unit.a2 = 1.0;
  if (i == 3) unit.a3 = 1.0;
  return coord_components(p, pt, unit);
}

double inner(const FrameVector& a, const FrameVector& b) {
  return a.a1 * b.a1 + a.a2 * b.a2 - a.a3 * b.a3;
}

FrameVector cross(const FrameVector& a, const FrameVector& b) {
  return {a.a2 * b.a3 - a.a3 * b.a2, a.a3 * b.a1 - a.a1 * b.a3, a.a2 * b.a1 - a.a1 * b.a2};
}

FrameVector connection_coeff(const ModelParams& p, int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3) {
    throw std::out_of_range("connection_coeff: frame indices must be in {1, 2, 3}");
  }
  const double h = 0.5 * p.lambda;
  const int ij = 10 * i + j;
  if (p.metric == Metric::G1) {
    // [e2, e3] = lambda e1 is the only nonzero bracket.
    switch (ij) {
      case 12:
      case 21:
        return {0.0, 0.0, h};
      case 13:
      case 31:
        return {0.0, h, 0.0};
      case 23:
        return {h, 0.0, 0.0};
      case 32:
        return {-h, 0.0, 0.0};
      default:
        return {};
    }
  }
  // g2: [e1, e2] = lambda e3 is the only nonzero bracket.
  switch (ij) {
    case 12:
      return {0.0, 0.0, h};
    case 21:
      return {0.0, 0.0, -h};
    case 13:
    case 31:
      return {0.0, h, 0.0};
    case 23:
    case 32:
      return {-h, 0.0, 0.0};
    default:
      return {};
  }
}

FrameVector killing_field(const ModelParams& p, KillingId k, const CoordPoint& pt) {
  const double l = p.lambda;
  const double x = pt.x;
  const double y = pt.y;
  if (p.metric == Metric::G1) {
    switch (k) {
      case KillingId::V1:
        return {1.0, 0.0, 0.0};
      case KillingId::V2:
        return {x, 1.0, 0.0};
      case KillingId::V3:
        return {-l * y, 0.0, 1.0};
      case KillingId::V4:
        return {0.5 * (x * x - l * l * y * y), x, l * y};
    }
  } else {
    switch (k) {
      case KillingId::V1:
        return {0.0, 0.0, 1.0};
      case KillingId::V2:
        return {1.0, 0.0, x};
      case KillingId::V3:
        return {0.0, 1.0, -l * y};
      case KillingId::V4:
        return {x, -l * y, 0.5 * (x * x + l * l * y * y)};
    }
  }
  return {};
}

Matrix3 metric_tensor(const ModelParams& p, const CoordPoint& pt) {
  const double x = pt.x;
  const double s = p.metric == Metric::G1 ? 1.0 : -1.0;
  const double gxx = -s / (p.lambda * p.lambda);
  // dy^2 + s (x dy + dz)^2
  return {{{gxx, 0.0, 0.0}, {0.0, 1.0 + s * x * x, s * x}, {0.0, s * x, s}}};
}

double lie_derivative_residual(const ModelParams& p, const CoordField& w, const CoordPoint& pt,
                               double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be > 0");
  const Matrix3 g = metric_tensor(p, pt);
  const auto wc = as_array(w(pt));

  // dg[k][i][j] = d_k g_ij, dw[i][k] = d_i W^k
  std::array<Matrix3, 3> dg{};
  std::array<std::array<double, 3>, 3> dw{};
  for (int axis = 0; axis < 3; ++axis) {
    const auto plus = shifted(pt, axis, h);
    const auto minus = shifted(pt, axis, -h);
    const Matrix3 gp = metric_tensor(p, plus);
    const Matrix3 gm = metric_tensor(p, minus);
    const auto wp = as_array(w(plus));
    const auto wm = as_array(w(minus));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) dg[axis][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
      dw[axis][i] = (wp[i] - wm[i]) / (2.0 * h);
    }
  }

  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double lie = 0.0;
      for (int k = 0; k < 3; ++k) {
        lie += wc[k] * dg[k][i][j] + g[k][j] * dw[i][k] + g[i][k] * dw[j][k];
      }
      worst = std::max(worst, std::abs(lie));
    }
  }
  return worst;
}

double killing_residual(const ModelParams& p, KillingId k, const CoordPoint& pt, double h) {
  const CoordField field = [&p, k](const CoordPoint& q) {
    return coord_components(p, q, killing_field(p, k, q));
  };
  return lie_derivative_residual(p, field, pt, h);
}

}  // namespace heismag
