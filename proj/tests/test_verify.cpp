#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heismag/closedform.hpp"
#include "heismag/dynamics.hpp"
#include "heismag/errors.hpp"
#include "heismag/verify.hpp"
#include "test_support.hpp"

using namespace heismag;
using heismag::testing::Rng;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

FamilySpec circular() {
  FamilySpec s;
  s.family = Family::G2_V4_CIRCULAR;
  s.c = 2.0;
  return s;
}

Trajectory sampled_family(const FamilySpec& s, const std::vector<double>& grid) {
  std::vector<CurveState> pts;
  for (double t : grid) pts.push_back(eval_family(s, t));
  return Trajectory(family_params(s), {family_killing(s.family), 1.0}, std::move(pts));
}

Trajectory integrate_circle(double tol, std::size_t samples = 1001) {
  IntegratorConfig cfg;
  cfg.t_end = kTwoPi;
  cfg.abs_tol = cfg.rel_tol = tol;
  cfg.output_times = uniform_grid(0.0, kTwoPi, samples);
  return integrate(family_params(circular()), KillingId::V4, eval_family(circular(), 0.0), cfg);
}

}  // namespace

TEST(Verify, AnalyticResidualExamples) {
  const FamilySpec c = circular();
  const ModelParams p = family_params(c);
  for (double t : uniform_grid(0.0, kTwoPi, 101)) {
    EXPECT_LE(ode_residual(p, KillingId::V4, eval_family_jet(c, t)), 1e-12) << t;
  }

  FamilySpec lin;
  lin.family = Family::G1_V1_LINEAR;
  lin.variant = Variant::AsPrinted;
  lin.lambda = 1.3;
  lin.k = {1.0, 0.0, 1.0, 0.0, 0.0};
  EXPECT_GT(ode_residual(family_params(lin), KillingId::V1, eval_family_jet(lin, 0.7)), 1e-3);

  // vertical geodesic: z = t, no force
  CurveJet line;
  line.t = 0.4;
  line.pos = {0.0, 0.0, 0.4};
  line.vel = {0.0, 0.0, 1.0};
  for (Metric m : {Metric::G1, Metric::G2}) {
    EXPECT_EQ(ode_residual({m, 1.0}, MagneticField{KillingId::V1, 0.0}, line), 0.0);
  }
}

TEST(Verify, CheckFamilyExamples) {
  EXPECT_TRUE(check_family(circular(), uniform_grid(0.0, kTwoPi, 1001), 1e-9).pass);

  Rng r(31);
  FamilySpec e;
  e.family = Family::G1_V1_EXP;
  e.lambda = r.uniform(0.5, 2.0);
  e.c = r.uniform(-0.5, 0.5);
  for (auto& k : e.k) k = r.uniform(-1, 1);
  EXPECT_TRUE(check_family(e, uniform_grid(0.0, 1.0, 1001), 1e-8).pass);

  FamilySpec sp;
  sp.family = Family::G1_V4_SPECIAL;
  sp.variant = Variant::AsPrinted;
  sp.lambda = 1.2;
  sp.k = {0.7, 1.0, 0.3, 0.0, 0.0};
  const ResidualReport bad = check_family(sp, uniform_grid(0.0, 1.0, 101), 1e-6);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.per_sample.size(), 101u);
  EXPECT_EQ(bad.tol, 1e-6);
}

TEST(Verify, UniformGrid) {
  const auto g = uniform_grid(0.0, 1.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
  EXPECT_THROW(uniform_grid(0.0, 1.0, 1), DomainError);
}

TEST(Verify, CompareExamples) {
  const Trajectory a = integrate_circle(1e-10);
  EXPECT_EQ(compare(a, a), 0.0);
  EXPECT_LE(compare(a, circular()), 1e-6);

  const Trajectory loose = integrate_circle(1e-8);
  const Trajectory tight = integrate_circle(1e-12);
  EXPECT_LE(compare(loose, tight), 1e-7);

  const Trajectory other(family_params(circular()), {KillingId::V3, 1.0}, a.samples());
  EXPECT_THROW(compare(a, other), ParamMismatch);
  FamilySpec lin;
  lin.family = Family::G2_V1_LINEAR;
  EXPECT_THROW(compare(a, lin), ParamMismatch);
  const Trajectory shorter = integrate_circle(1e-10, 11);
  EXPECT_THROW(compare(a, shorter), ParamMismatch);
}

TEST(Verify, ConservationReport) {
  const Trajectory a = integrate_circle(1e-10);
  const auto [ds, di] = conservation_report(a);
  EXPECT_LE(ds, 1e-7);
  EXPECT_LE(di, 1e-7);

  std::vector<CurveState> still;
  for (int i = 0; i < 5; ++i) still.push_back({static_cast<double>(i), {1, 2, 3}, {0, 0, 0}});
  const Trajectory constant({Metric::G1, 1.0}, {KillingId::V1, 0.0}, still);
  const auto [s0, i0] = conservation_report(constant);
  EXPECT_EQ(s0, 0.0);
  EXPECT_EQ(i0, 0.0);

  auto broken = a.samples();
  broken[500].vel.dz += 0.5;
  const Trajectory corrupted(a.params(), a.field(), broken);
  const auto [dsb, dib] = conservation_report(corrupted);
  EXPECT_GT(dsb, 0.1);
  EXPECT_GT(dib, 0.1);
  EXPECT_FALSE(check_trajectory(corrupted).pass);
  EXPECT_TRUE(check_trajectory(a).pass);
}

TEST(Verify, GridTooCoarse) {
  const Trajectory a = sampled_family(circular(), uniform_grid(0.0, 1.0, 4));
  EXPECT_THROW(ode_residual(a, 1), GridTooCoarse);
  EXPECT_THROW(check_trajectory(a), GridTooCoarse);
}

// The finite-difference residual of exact samples is pure truncation error,
// so halving the step should cut it by about 2^4.
TEST(Verify, FiniteDifferenceIsFourthOrder) {
  FamilySpec s;
  s.family = Family::G1_V1_EXP;
  s.lambda = 1.3;
  s.c = 0.4;
  s.k = {0.5, -0.4, 0.7, 0.2, 0.1};
  const Trajectory coarse = sampled_family(s, uniform_grid(0.0, 1.0, 21));
  const Trajectory fine = sampled_family(s, uniform_grid(0.0, 1.0, 41));
  const double e1 = ode_residual(coarse, 10);
  const double e2 = ode_residual(fine, 20);
  ASSERT_GT(e2, 1e-10);
  EXPECT_NEAR(e1 / e2, 16.0, 3.0) << e1 << " " << e2;
}

// Safe data: g1 orbits grow or escape from larger boxes (see the dynamics tests).
TEST(Verify, NumericTrajectoriesPassForEveryPair) {
  Rng r(99);
  for (Metric m : {Metric::G1, Metric::G2}) {
    for (KillingId k : {KillingId::V1, KillingId::V2, KillingId::V3, KillingId::V4}) {
      const double b = m == Metric::G1 ? 0.01 : 1.0;
      for (int n = 0; n < 3; ++n) {
        CurveState init;
        init.pos = {r.uniform(-b, b), r.uniform(-b, b), r.uniform(-b, b)};
        init.vel = {r.uniform(-b, b), r.uniform(-b, b), r.uniform(-b, b)};
        IntegratorConfig cfg;
        cfg.t_end = 5.0;
        cfg.output_times = uniform_grid(0.0, 5.0, 2001);
        const Trajectory traj = integrate({m, 1.0}, k, init, cfg);
        const ResidualReport rep = check_trajectory(traj, 1e-6);
        EXPECT_TRUE(rep.pass) << to_string(m) << " " << to_string(k) << " residual "
                              << rep.max_ode_residual;
      }
    }
  }
}

TEST(Verify, NaNFails) {
  auto pts = sampled_family(circular(), uniform_grid(0.0, 1.0, 11)).samples();
  pts[5].pos.x = std::nan("");
  const Trajectory t(family_params(circular()), {KillingId::V4, 1.0}, pts);
  EXPECT_FALSE(check_trajectory(t).pass);
}
