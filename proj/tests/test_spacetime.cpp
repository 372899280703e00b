#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "evolve/evolve.hpp"
#include "oracles.hpp"

using namespace evolve;

namespace {

constexpr double kPi = std::numbers::pi;

ParamPoint angle(double th) { return {0, Vec::Constant(1, th)}; }

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Constant field in (time, space) order on R x R^2.
SpaceTimeField constant_field(const Vec& c) {
  return {[c](double, const Vec&) { return c; },
          [c](double, const Vec&) { return Mat(Mat::Zero(c.size(), c.size())); }};
}

}  // namespace

TEST(SpaceTimeImmersion, Examples) {
  const Scenario still = scenarios::static_interval();
  EXPECT_LT((spacetime_immersion(still.domain, 0.5, {1, Vec()}) - vec({0.5, 1.0})).norm(), 1e-15);
  const Scenario disk = scenarios::shrinking_disk();
  EXPECT_LT((spacetime_immersion(disk.domain, 1.0, angle(0.0)) - vec({1.0, 0.9, 0.0})).norm(), 1e-15);
  const Scenario lb = scenarios::leibniz_interval();
  EXPECT_LT((spacetime_immersion(lb.domain, 1.0, {1, Vec()}) - vec({1.0, 3.0})).norm(), 1e-15);
}

TEST(SpaceTimeFrame, Invariants) {
  const Vec x = vec({0.1, 0.2});
  EXPECT_LT((bottom_frame(0.0, x).normal - vec({-1, 0, 0})).norm(), 1e-15);
  EXPECT_LT((top_frame(1.0, x).normal - vec({1, 0, 0})).norm(), 1e-15);
  EXPECT_THROW(SpaceTimeFrame(SpaceTimeFrame::Part::bottom, vec({0, 0, 0}), vec({1, 0, 0})),
               ConfigError);
  EXPECT_THROW(SpaceTimeFrame(SpaceTimeFrame::Part::lateral, vec({0, 0, 0}), vec({1, 1, 0})),
               ConfigError);
}

TEST(LateralNormal, StaticBoundaryIsSpatial) {
  const Scenario sc = scenarios::static_disk();
  const Vec w = lateral_normal(sc.domain, 0.2, angle(1.0));
  EXPECT_EQ(w[0], 0.0);
  EXPECT_LT((w.tail(2) - vec({std::cos(1.0), std::sin(1.0)})).norm(), 1e-14);
}

// Checks the three characterizing properties directly.
void expect_characterized(const Vec& w, double v, const Vec& n) {
  Vec that = Vec::Zero(w.size());
  that[0] = 1.0;
  Vec nn = Vec::Zero(w.size());
  nn.tail(n.size()) = n;
  EXPECT_NEAR(w.norm(), 1.0, 1e-14);
  EXPECT_NEAR(w.dot(v * nn + that), 0.0, 1e-14);
  EXPECT_GT(w.dot(nn), 0.0);
}

TEST(LateralNormal, ShrinkingDisk) {
  const Scenario sc = scenarios::shrinking_disk();
  const Vec w = lateral_normal(sc.domain, 0.0, angle(0.0));
  EXPECT_LT((w - vec({0.1, 1.0, 0.0}) / std::sqrt(1.01)).norm(), 1e-14);
  EXPECT_NEAR(w[0], 0.0995037, 1e-7);
  EXPECT_NEAR(w[1], 0.9950372, 1e-7);
  expect_characterized(w, -0.1, vec({1.0, 0.0}));
}

TEST(LateralNormal, MovingEndpoint) {
  // b(t) = 2 + t^2 moves at b' = 2 at t = 1
  const Scenario sc = scenarios::leibniz_interval();
  const Vec w = lateral_normal(sc.domain, 1.0, {1, Vec()});
  EXPECT_LT((w - vec({-2.0, 1.0}) / std::sqrt(5.0)).norm(), 1e-14);
  expect_characterized(w, 2.0, vec({1.0}));
}

TEST(LateralNormal, DiagnosticsOnSphere) {
  const Scenario sc = scenarios::spherical_cap();
  const LateralNormalDiagnostics d = lateral_normal_diagnostics(sc.domain, 0.5, angle(2.0));
  EXPECT_LT(d.unit_error, 1e-14);
  EXPECT_LT(std::abs(d.tangency), 1e-14);
  EXPECT_GT(d.exterior, 0.0);
  EXPECT_LT(d.boundary_orthogonality, 1e-14);
}

TEST(SpaceTimeJacobian, StaticEqualsBoundaryJacobian) {
  const Scenario sc = scenarios::static_disk();
  const SpaceTimeJacobian j = spacetime_jacobian(sc.domain, 0.0, angle(0.7));
  EXPECT_NEAR(j.direct, 1.0, 1e-14);
  EXPECT_NEAR(j.factored, 1.0, 1e-14);
}

TEST(SpaceTimeJacobian, ShrinkingDisk) {
  const Scenario sc = scenarios::shrinking_disk();
  const SpaceTimeJacobian j = spacetime_jacobian(sc.domain, 0.0, angle(2.0));
  EXPECT_NEAR(j.direct, std::sqrt(1.01), 1e-14);
  EXPECT_NEAR(j.factored, 1.004987562, 1e-9);
}

TEST(SpaceTimeJacobian, CapEdge) {
  const Scenario sc = scenarios::spherical_cap();
  const SpaceTimeJacobian j = spacetime_jacobian(sc.domain, 0.0, angle(1.0));
  const double expect = std::sin(kPi / 4) * std::sqrt(1.01);
  EXPECT_NEAR(j.direct, expect, 1e-14);
  EXPECT_NEAR(j.factored, expect, 1e-14);
  EXPECT_NEAR(oracle::svd_jacobian(spacetime_differential(sc.domain, 0.0, angle(1.0))), expect,
              1e-14);
}

TEST(SpaceTimeJacobian, DifferentialLayout) {
  const Scenario sc = scenarios::shrinking_disk();
  const Mat d = spacetime_differential(sc.domain, 0.0, angle(0.0));
  ASSERT_EQ(d.rows(), 3);
  ASSERT_EQ(d.cols(), 2);
  EXPECT_EQ(d(0, 0), 1.0);
  EXPECT_EQ(d(0, 1), 0.0);
  EXPECT_NEAR(d(1, 0), -0.1, 1e-15);
}

TEST(LateralIntegral, ShrinkingDiskClosedForm) {
  const Scenario sc = scenarios::shrinking_disk();
  const auto rule = QuadratureRule::gauss(16);
  const double exact = 2.0 * kPi * std::sqrt(1.01) * 0.95;
  EXPECT_NEAR(exact, 5.99879693, 1e-8);
  EXPECT_NEAR(lateral_integral_direct(sc.domain, 0.0, 1.0, fields::one(), rule).value, exact, 1e-12);
  EXPECT_NEAR(lateral_integral_iterated(sc.domain, 0.0, 1.0, fields::one(), rule).value, exact, 1e-12);
}

TEST(LateralIntegral, StaticCylinder) {
  const Scenario sc = scenarios::static_disk();
  const auto rule = QuadratureRule::gauss(16);
  EXPECT_NEAR(lateral_integral_direct(sc.domain, 0.0, 1.0, fields::one(), rule).value, 2.0 * kPi, 1e-12);
  ScalarField s;
  s.value = [](double t, const Vec&) { return t; };
  EXPECT_NEAR(lateral_integral_direct(sc.domain, 0.0, 1.0, s, rule).value, kPi, 1e-12);
  EXPECT_NEAR(lateral_integral_iterated(sc.domain, 0.0, 1.0, s, rule).value, kPi, 1e-12);
}

TEST(LateralIntegral, RoutesAgreeEverywhere) {
  const auto rule = QuadratureRule::gauss(16);
  for (const Scenario& sc : scenarios::registry()) {
    const TimeWindow& w = sc.time_window();
    const double t0 = w.lower + 0.1 * w.length(), t1 = w.lower + 0.6 * w.length();
    for (const auto& [key, f] : sc.fields) {
      const double a = lateral_integral_direct(sc.domain, t0, t1, f, rule).value;
      const double b = lateral_integral_iterated(sc.domain, t0, t1, f, rule).value;
      EXPECT_LT(std::abs(a - b), 1e-8 * (1.0 + std::abs(a))) << sc.name << " " << key;
    }
  }
}

TEST(LateralIntegral, IntervalIsTimeIntegralOfEndpoints) {
  // Both endpoints of (t, 2 + t^2): sqrt(1 + 1) + sqrt(1 + 4 t^2)
  const Scenario sc = scenarios::leibniz_interval();
  const double expect = oracle::simpson(
      [](double s) { return std::sqrt(2.0) + std::sqrt(1.0 + 4.0 * s * s); }, 0.0, 2.0);
  EXPECT_NEAR(lateral_integral_direct(sc.domain, 0.0, 2.0, fields::one(), QuadratureRule::gauss(16)).value,
              expect, 1e-10);
}

TEST(LateralIntegral, Errors) {
  const Scenario sc = scenarios::shrinking_disk();
  EXPECT_THROW(lateral_integral_direct(sc.domain, 1.0, 0.0, fields::one(), QuadratureRule::gauss(8)),
               ConfigError);
  EXPECT_THROW(lateral_integral_direct(sc.domain, 0.0, 9.0, fields::one(), QuadratureRule::gauss(8)),
               WindowExceeded);
  EXPECT_THROW(lateral_integral_iterated(sc.domain, 0.0, 1.0, fields::one(),
                                         QuadratureRule::monte_carlo(10, 1)),
               ConfigError);
}

TEST(Divergence, ConstantFieldHasNoResidual) {
  const Scenario sc = scenarios::translating_ellipse();
  const DivergenceReport r = divergence_theorem_residual(
      sc.domain, 0.0, 1.0, constant_field(vec({0.4, -1.0, 2.0})), QuadratureRule::gauss(16));
  EXPECT_NEAR(r.volume, 0.0, 1e-14);
  EXPECT_LT(r.residual(), 1e-8);
}

TEST(Divergence, TimeFluxOfClockOnShrinkingDisk) {
  const Scenario sc = scenarios::shrinking_disk();
  ScalarField s;
  s.value = [](double t, const Vec&) { return t; };
  s.time_partial = [](double, const Vec&) { return 1.0; };
  EXPECT_THROW(divergence_theorem_residual(sc.domain, 0.0, 1.0, fields::time_flux(s),
                                           QuadratureRule::gauss(8)),
               ConfigError);
  s.ambient_gradient = [](double, const Vec& x) -> Vec { return Vec::Zero(x.size()); };
  const DivergenceReport r = divergence_theorem_residual(
      sc.domain, 0.0, 1.0, fields::time_flux(s), QuadratureRule::gauss(16));
  const double expect = kPi * (1.0 - 0.1 + 0.01 / 3.0);
  const double simpson = oracle::simpson([](double u) { return kPi * std::pow(1.0 - 0.1 * u, 2); }, 0.0, 1.0);
  EXPECT_NEAR(simpson, expect, 1e-12);
  EXPECT_NEAR(r.volume, expect, 1e-12);
  EXPECT_NEAR(r.surface(), expect, 1e-12);
}

TEST(Divergence, SpatialDilationOnStaticDisk) {
  const Scenario sc = scenarios::static_disk();
  const SpaceTimeField a{[](double, const Vec& x) { return vec({0.0, x[0], x[1]}); },
                         [](double, const Vec&) {
                           Mat j = Mat::Zero(3, 3);
                           j(1, 1) = 1.0;
                           j(2, 2) = 1.0;
                           return j;
                         }};
  const DivergenceReport r = divergence_theorem_residual(sc.domain, 0.0, 1.0, a, QuadratureRule::gauss(16));
  EXPECT_NEAR(r.volume, 2.0 * kPi, 1e-12);
  EXPECT_NEAR(r.lateral, 2.0 * kPi, 1e-12);
  EXPECT_NEAR(r.bottom, 0.0, 1e-14);
  EXPECT_NEAR(r.top, 0.0, 1e-14);
}

TEST(Divergence, IntrinsicDivergenceOnSphereIgnoresNormalPart) {
  // a = x on R^3 restricted to the sphere: Da = I, tangential divergence 2
  const ManifoldChart sphere = scenarios::sphere_chart();
  Vec u(2);
  u << 0.8, 2.1;
  Mat frame = Mat::Zero(4, 3);
  frame(0, 0) = 1.0;
  frame.block(1, 1, 3, 2) = chart_jacobian(sphere, u);
  Mat da = Mat::Zero(4, 4);
  da.block(1, 1, 3, 3) = Mat::Identity(3, 3);
  EXPECT_NEAR(spacetime_divergence(frame, da), 2.0, 1e-13);
}

TEST(Divergence, AllVectorFieldsOnSmoothScenarios) {
  for (const char* name : {"shrinking_disk", "translating_ellipse", "expanding_ball",
                           "spherical_cap", "torus_patch"}) {
    const Scenario sc = scenarios::make(name);
    for (const auto& [key, a] : sc.vector_fields) {
      const DivergenceReport r =
          divergence_theorem_residual(sc.domain, 0.2, 0.9, a, QuadratureRule::gauss(16));
      EXPECT_LT(r.residual(), 1e-6) << name << " " << key;
    }
  }
}

TEST(Divergence, Errors) {
  Scenario sc = scenarios::shrinking_disk();
  SpaceTimeField no_jac{[](double, const Vec&) { return vec({1, 0, 0}); }, nullptr};
  EXPECT_THROW(divergence_theorem_residual(sc.domain, 0.0, 1.0, no_jac, QuadratureRule::gauss(8)),
               ConfigError);
  sc.domain.bulk.reset();
  EXPECT_THROW(divergence_theorem_residual(sc.domain, 0.0, 1.0, fields::dilation(),
                                           QuadratureRule::gauss(8)),
               NoIntegrationPath);
}
