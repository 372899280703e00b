#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "evolve/evolve.hpp"
#include "oracles.hpp"

using namespace evolve;

TEST(Registry, NamesAreUniqueAndConstructible) {
  auto names = scenarios::names();
  EXPECT_EQ(names.size(), 9u);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
  for (const auto& n : scenarios::names()) EXPECT_EQ(scenarios::make(n).name, n);
  EXPECT_EQ(scenarios::make("static_ball").name, "static_ball");
}

TEST(Registry, UnknownNameIsConfigError) {
  EXPECT_THROW(scenarios::make("moebius"), ConfigError);
}

TEST(Registry, EveryScenarioHasStandardFields) {
  for (const Scenario& sc : scenarios::registry()) {
    for (const char* f : {"one", "one_plus_x2", "wave"}) {
      EXPECT_NO_THROW(sc.field(f)) << sc.name << " " << f;
    }
    EXPECT_THROW(sc.field("nope"), ConfigError);
    EXPECT_GE(sc.vector_fields.size(), 3u) << sc.name;
    EXPECT_GT(sc.default_h(), 0.0);
  }
}

TEST(Registry, SmoothFlagAndPairs) {
  EXPECT_FALSE(scenarios::figure_eight().smooth);
  EXPECT_TRUE(scenarios::torus_patch().smooth);
  EXPECT_TRUE(scenarios::shrinking_disk().paired.has_value());
  EXPECT_FALSE(scenarios::expanding_ball().paired.has_value());
}

// Closed-form references agree with quadrature, and their derivatives with a
// difference quotient of the integral.
TEST(References, MatchQuadratureAndDifferences) {
  std::vector<Scenario> all = scenarios::registry();
  all.push_back(scenarios::static_ball());
  int seen = 0;
  for (const Scenario& sc : all) {
    for (const auto& [key, ref] : sc.reference) {
      for (double t : sc.time_window().interior_times(3)) {
        if (ref.integral) {
          const double q = integrate_domain(sc.domain, t, sc.field(key), QuadratureRule::gauss(24)).value;
          EXPECT_NEAR(ref.integral(t), q, 1e-9 * (1.0 + std::abs(q))) << sc.name << " " << key;
        }
        if (ref.integral && ref.derivative) {
          const double fd = oracle::central_difference(ref.integral, t, 1e-5);
          EXPECT_NEAR(ref.derivative(t), fd, 1e-7 * (1.0 + std::abs(fd))) << sc.name << " " << key;
        }
        ++seen;
      }
    }
  }
  EXPECT_GT(seen, 20);
}

TEST(FigureEight, AreaClosedFormAtCrossingInstant) {
  // at t = 0 the two lobes of (sin th, sin 2th / 2) have total area 4/3
  const Scenario sc = scenarios::figure_eight();
  EXPECT_NEAR(sc.reference_for("one")->integral(0.0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(integrate_domain(sc.domain, 0.0, fields::one(), QuadratureRule::gauss(16)).value,
              4.0 / 3.0, 1e-12);
}

TEST(FigureEight, LobeChartsMeetAtTheCrossing) {
  const Scenario sc = scenarios::figure_eight();
  for (double t : {-0.5, 0.0, 0.4}) {
    Vec cross(2);
    cross << -t, 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      for (double z : {0.0, 1.0}) {
        EXPECT_LT((immersion_point(sc.domain.boundary, t, {c, Vec::Constant(1, z)}) - cross).norm(), 1e-14);
      }
    }
  }
}

TEST(TimeShift, ReportsAreBitIdentical) {
  // dyadic t, h and shift keep (t + c) - c exact
  const double c = 0.5, h = std::ldexp(1.0, -12);
  for (const char* name : {"shrinking_disk", "spherical_cap", "figure_eight", "leibniz_interval"}) {
    const Scenario sc = scenarios::make(name);
    const Scenario shifted = scenarios::time_shifted(sc, c);
    EXPECT_EQ(shifted.time_window().lower, sc.time_window().lower + c);
    for (double t : {0.25, 0.5}) {
      for (const auto& [key, f] : sc.fields) {
        const TransportReport a = verify_transport(sc, key, t, h, QuadratureRule::gauss(12));
        const TransportReport b = verify_transport(shifted, key, t + c, h, QuadratureRule::gauss(12));
        EXPECT_EQ(a.lhs, b.lhs) << name << " " << key;
        EXPECT_EQ(a.rhs, b.rhs) << name << " " << key;
      }
    }
  }
}

TEST(Motion, LinearAndConstant) {
  const auto m = scenarios::linear(2.0, -0.5);
  EXPECT_EQ(m.value(4.0), 0.0);
  EXPECT_EQ(m.rate(1.0), -0.5);
  EXPECT_EQ(scenarios::constant(3.0).rate(9.0), 0.0);
}

TEST(VectorFields, JacobiansMatchDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Scenario& sc : scenarios::registry()) {
    const int d = sc.domain.ambient_dim();
    for (const auto& [key, a] : sc.vector_fields) {
      if (!a.jacobian) continue;
      const double s = u(rng);
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = u(rng);
      auto g = [&](const Vec& q) { return a.value(q[0], q.tail(d)); };
      Vec q(1 + d);
      q << s, x;
      const Mat fd = detail::central_jacobian(g, q, 1 + d, 1e-6);
      EXPECT_LT((a.jacobian(s, x) - fd).norm(), 1e-7) << sc.name << " " << key;
    }
  }
}

TEST(VectorFields, TangentToManifold) {
  // On curved M the spatial part of a must lie in T_xM.
  for (const char* name : {"spherical_cap", "torus_patch"}) {
    const Scenario sc = scenarios::make(name);
    std::mt19937_64 rng(4);
    for (const auto& [key, a] : sc.vector_fields) {
      for (int k = 0; k < 20; ++k) {
        const Vec u = sc.domain.manifold.domain.at(Vec::Random(2).cwiseAbs());
        const Vec x = chart_point(sc.domain.manifold, u);
        const Vec v = a.value(0.3, x).tail(3);
        const TangentFrame frame{x, chart_jacobian(sc.domain.manifold, u)};
        EXPECT_LT((tangent_projection(frame, v) - v).norm(), 1e-12) << name << " " << key;
      }
    }
  }
}
