#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "evolve/evolve.hpp"
#include "oracles.hpp"

using namespace evolve;

namespace {

constexpr double kPi = std::numbers::pi;

ParamPoint angle(double th) { return {0, Vec::Constant(1, th)}; }

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST(ImmersionJacobian, OrthonormalColumns) {
  Mat d = Mat::Zero(3, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  EXPECT_DOUBLE_EQ(immersion_jacobian(d), 1.0);
}

TEST(ImmersionJacobian, SingleColumnNorm) {
  Mat d(3, 1);
  d << 3.0, 4.0, 0.0;
  EXPECT_NEAR(immersion_jacobian(d), 5.0, 1e-14);
}

TEST(ImmersionJacobian, CircleOfRadius) {
  const Scenario sc = scenarios::shrinking_disk();
  for (double th : {0.0, 0.4, 2.0, 5.5}) {
    // r(1) = 0.9
    const Mat d = immersion_differential(sc.domain.boundary, 1.0, angle(th));
    EXPECT_NEAR(immersion_jacobian(d), 0.9, 1e-13);
    EXPECT_NEAR(immersion_jacobian(d), oracle::svd_jacobian(d), 1e-13);
  }
}

TEST(ImmersionJacobian, MatchesSvdOnRandomMatrices) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 1; k <= 3; ++k) {
    Mat d(4, k);
    for (int i = 0; i < d.size(); ++i) d.data()[i] = g(rng);
    EXPECT_NEAR(immersion_jacobian(d), oracle::svd_jacobian(d), 1e-12);
  }
}

TEST(ImmersionJacobian, RankDeficientThrows) {
  Mat d(3, 2);
  d << 1, 2, 1, 2, 0, 0;
  EXPECT_THROW(immersion_jacobian(d), RankDeficient);
}

TEST(TangentProjection, AxisFrame) {
  TangentFrame f{v2(0, 0), v2(1, 0)};
  const Vec p = tangent_projection(f, v2(3, 4));
  EXPECT_NEAR((p - v2(3, 0)).norm(), 0.0, 1e-15);
}

TEST(TangentProjection, Idempotent) {
  Mat basis(3, 2);
  basis << 1, 0, 1, 1, 0, 2;
  TangentFrame f{Vec::Zero(3), basis};
  const Vec w = basis * v2(0.3, -1.1);
  EXPECT_LT((tangent_projection(f, w) - w).norm(), 1e-14);
  Vec x(3);
  x << 0.2, -0.7, 1.9;
  const Vec once = tangent_projection(f, x);
  EXPECT_LT((tangent_projection(f, once) - once).norm(), 1e-14);
}

TEST(TangentProjection, DiagonalFrame) {
  Vec b(3);
  b << 1.0, 1.0, 0.0;
  TangentFrame f{Vec::Zero(3), b / std::sqrt(2.0)};
  Vec w(3), expect(3);
  w << 1.0, 0.0, 0.0;
  expect << 0.5, 0.5, 0.0;
  EXPECT_LT((tangent_projection(f, w) - expect).norm(), 1e-15);
}

TEST(BoundaryVelocity, StaticIsZero) {
  const Scenario sc = scenarios::static_disk();
  EXPECT_EQ(boundary_velocity(sc.domain, 0.3, angle(1.0)).norm(), 0.0);
}

TEST(BoundaryVelocity, ShrinkingDiskMatchesDifference) {
  const Scenario sc = scenarios::shrinking_disk();
  const Vec v = boundary_velocity(sc.domain, 0.0, angle(0.0));
  auto f = [&](double t) { return immersion_point(sc.domain.boundary, t, angle(0.0)); };
  const Vec fd = (f(1e-6) - f(-1e-6)) / 2e-6;
  EXPECT_LT((v - v2(-0.1, 0.0)).norm(), 1e-14);
  EXPECT_LT((v - fd).norm(), 1e-8);
}

TEST(BoundaryVelocity, FallbackWithoutAnalyticDerivative) {
  Scenario sc = scenarios::shrinking_disk();
  sc.domain.boundary.time_derivative = nullptr;
  EXPECT_LT((boundary_velocity(sc.domain, 0.0, angle(0.0)) - v2(-0.1, 0.0)).norm(), 1e-8);
}

TEST(BoundaryVelocity, TranslatingIntervalEndpoint) {
  // f(t, z) = z + t on the line: the endpoints of (t, 1 + t)
  const Scenario sc = scenarios::moving_interval("shift", "", scenarios::linear(0.0, 1.0),
                                                 scenarios::linear(1.0, 1.0), {-1.0, 1.0},
                                                 Box::interval(-3.0, 4.0));
  auto f = [&](double t) { return immersion_point(sc.domain.boundary, t, {1, Vec()})[0]; };
  const double fd = oracle::central_difference(f, 0.2, 1e-6);
  EXPECT_NEAR(boundary_velocity(sc.domain, 0.2, {1, Vec()})[0], 1.0, 1e-14);
  EXPECT_NEAR(fd, 1.0, 1e-8);
}

TEST(ExteriorNormal, IntervalEndpoints) {
  const Scenario sc = scenarios::static_interval();
  EXPECT_DOUBLE_EQ(exterior_unit_normal(sc.domain, 0.0, {1, Vec()})[0], 1.0);
  EXPECT_DOUBLE_EQ(exterior_unit_normal(sc.domain, 0.0, {0, Vec()})[0], -1.0);
}

TEST(ExteriorNormal, CircleTop) {
  const Scenario sc = scenarios::shrinking_disk();
  const Vec n = exterior_unit_normal(sc.domain, 0.0, angle(kPi / 2));
  EXPECT_LT((n - v2(0.0, 1.0)).norm(), 1e-14);
  const Vec p = immersion_point(sc.domain.boundary, 0.0, angle(kPi / 2));
  EXPECT_TRUE(is_inside(sc.domain, 0.0, p - 1e-3 * n));
  EXPECT_FALSE(is_inside(sc.domain, 0.0, p + 1e-3 * n));
}

TEST(ExteriorNormal, CapPointsDownTheSphere) {
  const Scenario sc = scenarios::spherical_cap();
  const Vec n = exterior_unit_normal(sc.domain, 0.0, angle(0.0));
  // d/d(polar angle) of (sin a, 0, cos a) at a = pi/4
  Vec expect(3);
  expect << std::cos(kPi / 4), 0.0, -std::sin(kPi / 4);
  EXPECT_LT((n - expect).norm(), 1e-12);
  const Vec p = immersion_point(sc.domain.boundary, 0.0, angle(0.0));
  EXPECT_NEAR(n.dot(p), 0.0, 1e-14);
}

TEST(ExteriorNormal, AmbiguousOrientationThrows) {
  Scenario sc = scenarios::static_disk();
  sc.domain.membership = [](double, const Vec&) { return true; };
  EXPECT_THROW(exterior_unit_normal(sc.domain, 0.0, angle(0.3)), OrientationAmbiguous);
}

TEST(ExteriorNormal, RankDeficientAtCusp) {
  Scenario sc = scenarios::static_disk();
  sc.domain.boundary.space_jacobian = [](double, const ParamPoint&) -> Mat {
    return Mat::Zero(2, 1);
  };
  EXPECT_THROW(exterior_unit_normal(sc.domain, 0.0, angle(0.3)), RankDeficient);
}

TEST(NormalVelocity, StaticIsZero) {
  const Scenario sc = scenarios::static_disk();
  EXPECT_EQ(normal_velocity(sc.domain, 0.0, angle(2.0)), 0.0);
}

TEST(NormalVelocity, ShrinkingDiskConstant) {
  const Scenario sc = scenarios::shrinking_disk();
  for (double t : {-0.5, 0.0, 2.0, 4.5}) {
    for (double th : {0.0, 1.0, 3.0, 6.0}) {
      EXPECT_NEAR(normal_velocity(sc.domain, t, angle(th)), -0.1, 1e-14);
    }
  }
}

TEST(NormalVelocity, CapEdgeSpeed) {
  const Scenario sc = scenarios::spherical_cap();
  for (double t : {-0.5, 0.0, 1.0}) {
    for (double b : {0.0, 1.7, 4.0}) {
      EXPECT_NEAR(normal_velocity(sc.domain, t, angle(b)), 0.1, 1e-13);
    }
  }
}

TEST(NormalVelocity, TranslatingEllipseIsVelocityDotNormal) {
  const Scenario sc = scenarios::translating_ellipse();
  for (double th : {0.0, 0.9, 2.2, 4.1}) {
    // outward normal of the ellipse 1.5 cos, 0.8 sin is prop. to (cos/1.5, sin/0.8)
    Vec n = v2(std::cos(th) / 1.5, std::sin(th) / 0.8);
    n.normalize();
    EXPECT_NEAR(normal_velocity(sc.domain, 0.7, angle(th)), v2(0.3, -0.2).dot(n), 1e-13);
  }
}

TEST(ReparametrizationGap, IdenticalIsZero) {
  const Scenario sc = scenarios::torus_patch();
  EXPECT_LT(reparametrization_gap(sc.domain, sc.domain.boundary, 0.2, 50), 1e-12);
}

TEST(ReparametrizationGap, DriftingCircle) {
  const Scenario sc = scenarios::shrinking_disk();
  for (double t : {0.0, 1.3, 3.9}) {
    EXPECT_LT(reparametrization_gap(sc.domain, *sc.paired, t, 300), 1e-8);
  }
}

TEST(ReparametrizationGap, AffineIntervalCopy) {
  const Scenario sc = scenarios::leibniz_interval();
  BoundaryImmersion alt = sc.domain.boundary;
  // swap the chart order: a different (affine, here trivial) parametrization
  // of the same two endpoints
  auto map = sc.domain.boundary.map;
  auto vel = sc.domain.boundary.time_derivative;
  alt.map = [map](double t, const ParamPoint& z) { return map(t, {1 - z.chart, z.z}); };
  alt.time_derivative = [vel](double t, const ParamPoint& z) { return vel(t, {1 - z.chart, z.z}); };
  EXPECT_LT(reparametrization_gap(sc.domain, alt, 1.0, 10), 1e-12);
}

TEST(ReparametrizationGap, DetectsDifferentMotion) {
  const Scenario sc = scenarios::shrinking_disk();
  BoundaryImmersion alt = sc.domain.boundary;
  alt.time_derivative = [](double, const ParamPoint& z) {
    return Vec(0.2 * v2(std::cos(z.z[0]), std::sin(z.z[0])));
  };
  EXPECT_GT(reparametrization_gap(sc.domain, alt, 0.0, 50), 0.1);
}

TEST(ReparametrizationGap, FigureEightRawCurve) {
  const Scenario sc = scenarios::figure_eight();
  EXPECT_LT(reparametrization_gap(sc.domain, *sc.paired, 0.3, 200), 1e-8);
}

TEST(ReparametrizationGap, RejectsNoSamples) {
  const Scenario sc = scenarios::shrinking_disk();
  EXPECT_THROW(reparametrization_gap(sc.domain, *sc.paired, 0.0, 0), ConfigError);
}

TEST(ReparametrizationGap, DifferentImageIsMatchFailure) {
  const Scenario sc = scenarios::shrinking_disk();
  BoundaryImmersion alt = sc.domain.boundary;
  alt.map = [](double, const ParamPoint& z) { return Vec(1.2 * v2(std::cos(z.z[0]), std::sin(z.z[0]))); };
  EXPECT_THROW(reparametrization_gap(sc.domain, alt, 0.0, 5), MatchFailure);
}
