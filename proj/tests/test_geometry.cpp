#include <gtest/gtest.h>

#include <cmath>

#include "heismag/errors.hpp"
#include "heismag/geometry.hpp"
#include "test_support.hpp"

using namespace heismag;
using heismag::testing::Rng;

namespace {

void expect_frame(const FrameVector& got, FrameVector want, double tol = 1e-15) {
  EXPECT_NEAR(got.a1, want.a1, tol);
  EXPECT_NEAR(got.a2, want.a2, tol);
  EXPECT_NEAR(got.a3, want.a3, tol);
}

void expect_coord(const CoordVelocity& got, CoordVelocity want, double tol = 1e-15) {
  EXPECT_NEAR(got.dx, want.dx, tol);
  EXPECT_NEAR(got.dy, want.dy, tol);
  EXPECT_NEAR(got.dz, want.dz, tol);
}

double det3(const FrameVector& a, const FrameVector& b, const FrameVector& c) {
  return a.a1 * (b.a2 * c.a3 - b.a3 * c.a2) - a.a2 * (b.a1 * c.a3 - b.a3 * c.a1) +
         a.a3 * (b.a1 * c.a2 - b.a2 * c.a1);
}

FrameVector random_frame(Rng& r, double box) {
  return {r.uniform(-box, box), r.uniform(-box, box), r.uniform(-box, box)};
}

}  // namespace

TEST(Geometry, FrameComponentsExamples) {
  expect_frame(frame_components({Metric::G1, 1.0}, {0, 0, 0}, {0, 0, 1}), {1, 0, 0});
  expect_frame(frame_components({Metric::G1, 2.0}, {3, 0, 0}, {2, 1, 0}), {3, 1, 1});
  expect_frame(frame_components({Metric::G2, 1.0}, {2, 0, 0}, {0, -4, 8}), {-4, 0, 0});
}

TEST(Geometry, CoordComponentsExamples) {
  expect_coord(coord_components({Metric::G1, 1.0}, {0, 0, 0}, {1, 0, 0}), {0, 0, 1});
  expect_coord(coord_components({Metric::G1, 2.0}, {3, 0, 0}, {3, 1, 1}), {2, 1, 0});
  expect_coord(coord_components({Metric::G2, 1.0}, {5, 0, 0}, {1, 0, 0}), {0, 1, -5});
}

TEST(Geometry, RoundTripRandom) {
  Rng r(7);
  for (Metric m : kAllMetrics) {
    for (int i = 0; i < 200; ++i) {
      const ModelParams p{m, r.uniform(0.5, 2.0)};
      const CoordPoint pt{r.uniform(-3, 3), r.uniform(-3, 3), r.uniform(-3, 3)};
      const FrameVector a = random_frame(r, 5.0);
      expect_frame(frame_components(p, pt, coord_components(p, pt, a)), a, 1e-13);
    }
  }
}

TEST(Geometry, InnerExamples) {
  EXPECT_EQ(inner({1, 0, 0}, {1, 0, 0}), 1.0);
  EXPECT_EQ(inner({0, 0, 1}, {0, 0, 1}), -1.0);
  for (double t : {0.0, 0.3, 1.7, 4.0}) {
    const FrameVector v{-4 * std::cos(2 * t), -4 * std::sin(2 * t), 0};
    EXPECT_NEAR(inner(v, v), 16.0, 1e-13);
  }
}

TEST(Geometry, CrossExamples) {
  expect_frame(cross({1, 0, 0}, {0, 1, 0}), {0, 0, -1});
  expect_frame(cross({2, -3, 5}, {2, -3, 5}), {0, 0, 0});
  expect_frame(cross({1, 0, 0}, {0.4, -1.5, 2.5}), {0, -2.5, 1.5});
}

TEST(Geometry, CrossProperties) {
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    const FrameVector a = random_frame(r, 10);
    const FrameVector b = random_frame(r, 10);
    const FrameVector c = random_frame(r, 10);
    const FrameVector ab = cross(a, b);
    expect_frame(ab, -1.0 * cross(b, a), 0.0);
    const double scale = 1000.0;  // |a||b||c| bound order
    EXPECT_LE(std::abs(inner(ab, a)), 1e-12 * scale);
    EXPECT_LE(std::abs(inner(ab, b)), 1e-12 * scale);
    EXPECT_LE(std::abs(inner(ab, c) - det3(a, b, c)), 1e-12 * scale);
  }
}

TEST(Geometry, ConnectionExamples) {
  expect_frame(connection_coeff({Metric::G1, 2.0}, 1, 2), {0, 0, 1});
  expect_frame(connection_coeff({Metric::G1, 0.7}, 1, 1), {0, 0, 0});
  expect_frame(connection_coeff({Metric::G2, 2.0}, 2, 1), {0, 0, -1});
  EXPECT_THROW(connection_coeff({Metric::G1, 1.0}, 0, 1), std::out_of_range);
  EXPECT_THROW(connection_coeff({Metric::G2, 1.0}, 1, 4), std::out_of_range);
}

TEST(Geometry, ConnectionIsMetricCompatible) {
  const FrameVector basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (Metric m : kAllMetrics) {
    const ModelParams p{m, 1.3};
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= 3; ++k) {
          const double v = inner(connection_coeff(p, i, j), basis[k - 1]) +
                           inner(basis[j - 1], connection_coeff(p, i, k));
          EXPECT_EQ(v, 0.0) << to_string(m) << " i=" << i << " j=" << j << " k=" << k;
        }
      }
    }
  }
}

// [e_i, e_j] from the coordinate expressions, by central differences of the
// coefficient functions, expressed back in the frame.
TEST(Geometry, ConnectionIsTorsionFree) {
  Rng r(3);
  const double h = 1e-5;
  for (Metric m : kAllMetrics) {
    const ModelParams p{m, r.uniform(0.5, 2.0)};
    const CoordPoint pt{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
    auto field = [&](int i, CoordPoint q) { return frame_basis(p, i, q); };
    auto directional = [&](int i, const CoordVelocity& dir) {
      auto shift = [&](double s) {
        return field(i, {pt.x + s * dir.dx, pt.y + s * dir.dy, pt.z + s * dir.dz});
      };
      const CoordVelocity a = shift(h);
      const CoordVelocity b = shift(-h);
      return CoordVelocity{(a.dx - b.dx) / (2 * h), (a.dy - b.dy) / (2 * h), (a.dz - b.dz) / (2 * h)};
    };
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const CoordVelocity ei = field(i, pt);
        const CoordVelocity ej = field(j, pt);
        const CoordVelocity dj = directional(j, ei);
        const CoordVelocity di = directional(i, ej);
        const CoordVelocity bracket{dj.dx - di.dx, dj.dy - di.dy, dj.dz - di.dz};
        const FrameVector want = frame_components(p, pt, bracket);
        const FrameVector got = connection_coeff(p, i, j) - connection_coeff(p, j, i);
        expect_frame(got, want, 1e-9);
      }
    }
  }
}

TEST(Geometry, FrameIsOrthonormal) {
  const double diag[3] = {1, 1, -1};
  for (Metric m : kAllMetrics) {
    const ModelParams p{m, 0.8};
    const CoordPoint pt{1.5, -0.5, 2.0};
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const double v = inner(frame_components(p, pt, frame_basis(p, i, pt)),
                               frame_components(p, pt, frame_basis(p, j, pt)));
        EXPECT_EQ(v, i == j ? diag[i - 1] : 0.0);
      }
    }
  }
}

TEST(Geometry, MetricTensorExamples) {
  const Matrix3 a = metric_tensor({Metric::G1, 1.0}, {0, 0, 0});
  EXPECT_EQ(a, (Matrix3{{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}));
  const Matrix3 b = metric_tensor({Metric::G1, 1.0}, {2, 0, 0});
  EXPECT_EQ(b, (Matrix3{{{-1, 0, 0}, {0, 5, 2}, {0, 2, 1}}}));
  const Matrix3 c = metric_tensor({Metric::G2, 2.0}, {0, 0, 0});
  EXPECT_EQ(c, (Matrix3{{{0.25, 0, 0}, {0, 1, 0}, {0, 0, -1}}}));
}

TEST(Geometry, MetricTensorMatchesFrameInner) {
  Rng r(5);
  for (Metric m : kAllMetrics) {
    for (int n = 0; n < 500; ++n) {
      const ModelParams p{m, r.uniform(0.5, 2.0)};
      const CoordPoint pt{r.uniform(-3, 3), r.uniform(-3, 3), r.uniform(-3, 3)};
      const CoordVelocity v{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
      const CoordVelocity w{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
      const Matrix3 g = metric_tensor(p, pt);
      const double vv[3] = {v.dx, v.dy, v.dz};
      const double ww[3] = {w.dx, w.dy, w.dz};
      double q = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q += vv[i] * g[i][j] * ww[j];
      const double f = inner(frame_components(p, pt, v), frame_components(p, pt, w));
      EXPECT_LE(std::abs(q - f), 1e-12 * std::max(1.0, std::abs(f)) * 100);
    }
  }
}

TEST(Geometry, KillingFieldExamples) {
  expect_frame(killing_field({Metric::G1, 1.3}, KillingId::V1, {4, -2, 1}), {1, 0, 0});
  expect_frame(killing_field({Metric::G2, 1.0}, KillingId::V4, {2, 0, 5}), {2, 0, 2});
  expect_frame(killing_field({Metric::G1, 0.5}, KillingId::V4, {0, 0, 0}), {0, 0, 0});
}

TEST(Geometry, KillingResidualExamples) {
  EXPECT_LE(killing_residual({Metric::G1, 1.0}, KillingId::V1, {0.3, -1, 2}, 1e-5), 1e-7);
  EXPECT_LE(killing_residual({Metric::G2, 1.0}, KillingId::V4, {1, 1, 0}, 1e-5), 1e-7);
  // W = x d/dx: (L_W g)_xx = 2 g_xx = -2 for g1 at lambda = 1.
  const CoordField w = [](const CoordPoint& q) { return CoordVelocity{q.x, 0, 0}; };
  EXPECT_GE(lie_derivative_residual({Metric::G1, 1.0}, w, {1, 0, 0}), 0.1);
  EXPECT_NEAR(lie_derivative_residual({Metric::G1, 1.0}, w, {1, 0, 0}), 2.0, 1e-6);
}

TEST(Geometry, AllKillingResidualsSmall) {
  Rng r(42);
  for (Metric m : kAllMetrics) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const ModelParams p{m, lam};
      for (int n = 0; n < 1000; ++n) {
        const CoordPoint pt{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
        for (KillingId k : kAllKilling) {
          ASSERT_LE(killing_residual(p, k, pt), 1e-7)
              << to_string(m) << " " << to_string(k) << " lambda=" << lam;
        }
      }
    }
  }
}

TEST(Geometry, ParamsValidation) {
  EXPECT_THROW((ModelParams{Metric::G1, 0.0}).validate(), DomainError);
  EXPECT_THROW((ModelParams{Metric::G2, -1.0}).validate(), DomainError);
  EXPECT_THROW((ModelParams{Metric::G2, std::nan("")}).validate(), DomainError);
  EXPECT_NO_THROW((ModelParams{Metric::G2, 0.1}).validate());
  EXPECT_EQ(parse_metric("G2"), Metric::G2);
  EXPECT_EQ(parse_killing("v3"), KillingId::V3);
  EXPECT_THROW(parse_metric("g3"), DomainError);
  EXPECT_THROW(parse_killing("V5"), DomainError);
}
