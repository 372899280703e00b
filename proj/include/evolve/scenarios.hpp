#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evolve/fields.hpp"

namespace evolve {

// Closed-form I(t) = integral of the field over O_t and its derivative.
struct ReferenceValues {
  std::function<double(double)> integral;
  std::function<double(double)> derivative;
};

struct Scenario {
  std::string name;
  std::string description;
  EvolvingDomain domain;
  std::map<std::string, ScalarField> fields;
  std::map<std::string, SpaceTimeField> vector_fields;
  std::map<std::string, ReferenceValues> reference;
  double tolerance = 1e-6;
  bool smooth = true;
  // Second parametrization of the same boundary, if the scenario has one.
  std::optional<BoundaryImmersion> paired;

  const TimeWindow& time_window() const { return domain.window; }

  double default_h() const { return 1e-4 * domain.window.length(); }

  const ScalarField& field(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw ConfigError("scenario " + name + " has no field '" + key + "'");
    }
    return it->second;
  }

  const ReferenceValues* reference_for(const std::string& key) const {
    auto it = reference.find(key);
    return it == reference.end() ? nullptr : &it->second;
  }
};

namespace scenarios {

// A scalar function of time with its derivative.
struct Motion {
  std::function<double(double)> value;
  std::function<double(double)> rate;
};

inline Motion constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

inline Motion linear(double c0, double c1) {
  return {[=](double t) { return c0 + c1 * t; }, [=](double) { return c1; }};
}

namespace detail {

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// Unit sphere point at polar angle a, azimuth b, and its partials.
inline Vec sphere_point(double a, double b) {
  return vec3(std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a));
}
inline Vec sphere_da(double a, double b) {
  return vec3(std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), -std::sin(a));
}
inline Vec sphere_db(double a, double b) {
  return vec3(-std::sin(a) * std::sin(b), std::sin(a) * std::cos(b), 0.0);
}

inline double wrap(double x, double lo, double width) {
  const double off = x - lo;
  return lo + off - width * std::floor(off / width);
}

inline std::map<std::string, ScalarField> standard_fields() {
  return {{"one", fields::one()},
          {"one_plus_x2", fields::one_plus_x2()},
          {"wave", fields::wave()}};
}

inline std::map<std::string, SpaceTimeField> flat_vector_fields() {
  return {{"time_flux", fields::time_flux(fields::wave())},
          {"dilation", fields::dilation()},
          {"mixed", fields::mixed_flat()}};
}

}  // namespace detail

// Ellipse with semi-axes (a(t), b(t)) centered at (cx(t), cy(t)) in the plane.
inline Scenario ellipse_scenario(std::string name, std::string description,
                                 Motion cx, Motion cy, Motion a, Motion b,
                                 TimeWindow window, Box plane) {
  using detail::vec2;
  Scenario sc;
  sc.name = std::move(name);
  sc.description = std::move(description);

  EvolvingDomain& dom = sc.domain;
  dom.manifold = flat_chart(std::move(plane));
  dom.window = window;
  dom.feature_size = 1.0;

  BoundaryImmersion& imm = dom.boundary;
  imm.charts = {Box::interval(0.0, 2.0 * std::numbers::pi).with_periodic(0).with_panels(0, 2)};
  imm.seams = {Seam{0, 0, true, 0, 0, false}};
  imm.map = [=](double t, const ParamPoint& z) {
    const double th = z.z[0];
    return vec2(cx.value(t) + a.value(t) * std::cos(th),
                cy.value(t) + b.value(t) * std::sin(th));
  };
  imm.time_derivative = [=](double t, const ParamPoint& z) {
    const double th = z.z[0];
    return vec2(cx.rate(t) + a.rate(t) * std::cos(th),
                cy.rate(t) + b.rate(t) * std::sin(th));
  };
  imm.space_jacobian = [=](double t, const ParamPoint& z) -> Mat {
    const double th = z.z[0];
    return vec2(-a.value(t) * std::sin(th), b.value(t) * std::cos(th));
  };

  BulkMap bulk;
  bulk.boxes = {Box::rect(0.0, 1.0, 0.0, 2.0 * std::numbers::pi).with_periodic(1).with_panels(1, 2)};
  bulk.map = [=](double t, const ParamPoint& u) {
    const double r = u.z[0], th = u.z[1];
    return vec2(cx.value(t) + r * a.value(t) * std::cos(th),
                cy.value(t) + r * b.value(t) * std::sin(th));
  };
  bulk.jacobian = [=](double t, const ParamPoint& u) -> Mat {
    const double r = u.z[0], th = u.z[1];
    Mat j(2, 2);
    j << a.value(t) * std::cos(th), -r * a.value(t) * std::sin(th),
        b.value(t) * std::sin(th), r * b.value(t) * std::cos(th);
    return j;
  };
  bulk.time_derivative = [=](double t, const ParamPoint& u) {
    const double r = u.z[0], th = u.z[1];
    return vec2(cx.rate(t) + r * a.rate(t) * std::cos(th),
                cy.rate(t) + r * b.rate(t) * std::sin(th));
  };
  dom.bulk = std::move(bulk);

  dom.membership = [=](double t, const Vec& x) {
    const double u = (x[0] - cx.value(t)) / a.value(t);
    const double v = (x[1] - cy.value(t)) / b.value(t);
    return u * u + v * v < 1.0;
  };

  sc.fields = detail::standard_fields();
  sc.vector_fields = detail::flat_vector_fields();

  // Area pi a b; second moment about the origin pi a b (cx^2 + a^2/4).
  auto area = [=](double t) { return std::numbers::pi * a.value(t) * b.value(t); };
  auto area_rate = [=](double t) {
    return std::numbers::pi * (a.rate(t) * b.value(t) + a.value(t) * b.rate(t));
  };
  sc.reference["one"] = {area, area_rate};
  sc.reference["one_plus_x2"] = {
      [=](double t) {
        const double c = cx.value(t), aa = a.value(t);
        return area(t) * (1.0 + c * c + 0.25 * aa * aa);
      },
      [=](double t) {
        const double c = cx.value(t), aa = a.value(t);
        const double q = 1.0 + c * c + 0.25 * aa * aa;
        const double dq = 2.0 * c * cx.rate(t) + 0.5 * aa * a.rate(t);
        return area_rate(t) * q + area(t) * dq;
      }};
  return sc;
}

inline Scenario static_disk() {
  return ellipse_scenario("static_disk", "unit disk at rest in the plane",
                          constant(0.0), constant(0.0), constant(1.0),
                          constant(1.0), {-1.0, 1.0},
                          Box::rect(-1.5, 1.5, -1.5, 1.5));
}

inline Scenario shrinking_disk() {
  const Motion r = linear(1.0, -0.1);
  Scenario sc = ellipse_scenario("shrinking_disk", "disk of radius 1 - 0.1 t",
                                 constant(0.0), constant(0.0), r, r,
                                 {-1.0, 5.0}, Box::rect(-1.5, 1.5, -1.5, 1.5));
  // Same circle through psi = z + 0.3 sin z + 0.2 t: tangential drift only.
  BoundaryImmersion alt = sc.domain.boundary;
  alt.map = [r](double t, const ParamPoint& z) {
    const double psi = z.z[0] + 0.3 * std::sin(z.z[0]) + 0.2 * t;
    return detail::vec2(r.value(t) * std::cos(psi), r.value(t) * std::sin(psi));
  };
  alt.time_derivative = [r](double t, const ParamPoint& z) {
    const double psi = z.z[0] + 0.3 * std::sin(z.z[0]) + 0.2 * t;
    const double rr = r.value(t);
    return detail::vec2(r.rate(t) * std::cos(psi) - 0.2 * rr * std::sin(psi),
                        r.rate(t) * std::sin(psi) + 0.2 * rr * std::cos(psi));
  };
  alt.space_jacobian = [r](double t, const ParamPoint& z) -> Mat {
    const double psi = z.z[0] + 0.3 * std::sin(z.z[0]) + 0.2 * t;
    const double dpsi = 1.0 + 0.3 * std::cos(z.z[0]);
    return detail::vec2(-r.value(t) * std::sin(psi) * dpsi,
                        r.value(t) * std::cos(psi) * dpsi);
  };
  sc.paired = std::move(alt);
  return sc;
}

inline Scenario translating_ellipse() {
  return ellipse_scenario("translating_ellipse",
                          "ellipse 1.5 x 0.8 translating with velocity (0.3, -0.2)",
                          linear(0.0, 0.3), linear(0.0, -0.2), constant(1.5),
                          constant(0.8), {-3.0, 3.0},
                          Box::rect(-2.5, 2.5, -1.8, 1.8));
}

// Ball of radius r(t) about the origin in R^3.
inline Scenario ball_scenario(std::string name, std::string description,
                              Motion r, TimeWindow window, double half_width) {
  using detail::sphere_da;
  using detail::sphere_db;
  using detail::sphere_point;
  Scenario sc;
  sc.name = std::move(name);
  sc.description = std::move(description);
  EvolvingDomain& dom = sc.domain;
  dom.manifold = flat_chart(Box::cuboid(Vec::Constant(3, -half_width),
                                        Vec::Constant(3, half_width)));
  dom.window = window;
  dom.feature_size = 1.0;

  BoundaryImmersion& imm = dom.boundary;
  imm.charts = {Box::rect(0.0, std::numbers::pi, 0.0, 2.0 * std::numbers::pi)
                    .with_periodic(1)
                    .with_panels(1, 2)};
  imm.seams = {Seam{0, 1, true, 0, 1, false}};
  imm.map = [r](double t, const ParamPoint& z) {
    return Vec(r.value(t) * sphere_point(z.z[0], z.z[1]));
  };
  imm.time_derivative = [r](double t, const ParamPoint& z) {
    return Vec(r.rate(t) * sphere_point(z.z[0], z.z[1]));
  };
  imm.space_jacobian = [r](double t, const ParamPoint& z) -> Mat {
    Mat j(3, 2);
    j.col(0) = r.value(t) * sphere_da(z.z[0], z.z[1]);
    j.col(1) = r.value(t) * sphere_db(z.z[0], z.z[1]);
    return j;
  };

  BulkMap bulk;
  Vec lo(3), hi(3);
  lo << 0.0, 0.0, 0.0;
  hi << 1.0, std::numbers::pi, 2.0 * std::numbers::pi;
  bulk.boxes = {Box::cuboid(lo, hi).with_periodic(2).with_panels(2, 2)};
  bulk.map = [r](double t, const ParamPoint& u) {
    return Vec(u.z[0] * r.value(t) * sphere_point(u.z[1], u.z[2]));
  };
  bulk.jacobian = [r](double t, const ParamPoint& u) -> Mat {
    const double rr = r.value(t);
    Mat j(3, 3);
    j.col(0) = rr * sphere_point(u.z[1], u.z[2]);
    j.col(1) = u.z[0] * rr * sphere_da(u.z[1], u.z[2]);
    j.col(2) = u.z[0] * rr * sphere_db(u.z[1], u.z[2]);
    return j;
  };
  bulk.time_derivative = [r](double t, const ParamPoint& u) {
    return Vec(u.z[0] * r.rate(t) * sphere_point(u.z[1], u.z[2]));
  };
  dom.bulk = std::move(bulk);
  dom.membership = [r](double t, const Vec& x) { return x.norm() < r.value(t); };

  sc.fields = detail::standard_fields();
  sc.fields["x_sq"] = fields::coordinate_squared(0);
  sc.fields["t_times_g"] = fields::time_times(fields::one_plus_x2());
  sc.vector_fields = detail::flat_vector_fields();

  const double pi = std::numbers::pi;
  auto vol = [=](double t) { return 4.0 / 3.0 * pi * std::pow(r.value(t), 3); };
  auto dvol = [=](double t) { return 4.0 * pi * std::pow(r.value(t), 2) * r.rate(t); };
  auto mom = [=](double t) { return 4.0 * pi * std::pow(r.value(t), 5) / 15.0; };
  auto dmom = [=](double t) {
    return 4.0 * pi * std::pow(r.value(t), 4) * r.rate(t) / 3.0;
  };
  sc.reference["one"] = {vol, dvol};
  sc.reference["x_sq"] = {mom, dmom};
  sc.reference["one_plus_x2"] = {[=](double t) { return vol(t) + mom(t); },
                                 [=](double t) { return dvol(t) + dmom(t); }};
  sc.reference["t_times_g"] = {
      [=](double t) { return t * (vol(t) + mom(t)); },
      [=](double t) { return vol(t) + mom(t) + t * (dvol(t) + dmom(t)); }};
  return sc;
}

inline Scenario expanding_ball() {
  return ball_scenario("expanding_ball", "ball of radius 1 + t in R^3",
                       linear(1.0, 1.0), {-0.5, 2.5}, 4.0);
}

inline Scenario static_ball() {
  return ball_scenario("static_ball", "unit ball at rest in R^3", constant(1.0),
                       {-1.0, 1.0}, 1.5);
}

// Unit sphere chart (polar angle, azimuth); the azimuth is periodic.
inline ManifoldChart sphere_chart() {
  using detail::sphere_da;
  using detail::sphere_db;
  ManifoldChart chart;
  chart.domain = Box::rect(0.0, std::numbers::pi, 0.0, 2.0 * std::numbers::pi).with_periodic(1);
  chart.ambient_dim = 3;
  chart.embed = [](const Vec& u) { return detail::sphere_point(u[0], u[1]); };
  chart.embed_jacobian = [](const Vec& u) -> Mat {
    Mat j(3, 2);
    j.col(0) = sphere_da(u[0], u[1]);
    j.col(1) = sphere_db(u[0], u[1]);
    return j;
  };
  chart.locate = [](const Vec& x) {
    const double n = x.norm();
    const double a = std::acos(std::clamp(x[2] / n, -1.0, 1.0));
    const double b = detail::wrap(std::atan2(x[1], x[0]), 0.0, 2.0 * std::numbers::pi);
    return detail::vec2(a, b);
  };
  return chart;
}

// Polar cap {polar angle < th(t)} on the unit sphere.
inline Scenario spherical_cap() {
  using detail::sphere_da;
  using detail::sphere_db;
  using detail::sphere_point;
  const Motion th = linear(std::numbers::pi / 4.0, 0.1);
  Scenario sc;
  sc.name = "spherical_cap";
  sc.description = "polar cap of half-angle pi/4 + 0.1 t on the unit sphere";
  EvolvingDomain& dom = sc.domain;
  dom.manifold = sphere_chart();
  dom.window = {-1.0, 5.0};
  dom.feature_size = 1.0;

  BoundaryImmersion& imm = dom.boundary;
  imm.charts = {Box::interval(0.0, 2.0 * std::numbers::pi).with_periodic(0).with_panels(0, 2)};
  imm.seams = {Seam{0, 0, true, 0, 0, false}};
  imm.map = [th](double t, const ParamPoint& z) { return sphere_point(th.value(t), z.z[0]); };
  imm.time_derivative = [th](double t, const ParamPoint& z) {
    return Vec(th.rate(t) * sphere_da(th.value(t), z.z[0]));
  };
  imm.space_jacobian = [th](double t, const ParamPoint& z) -> Mat {
    return sphere_db(th.value(t), z.z[0]);
  };

  BulkMap bulk;
  bulk.boxes = {Box::rect(0.0, 1.0, 0.0, 2.0 * std::numbers::pi).with_periodic(1).with_panels(1, 2)};
  bulk.map = [th](double t, const ParamPoint& u) {
    return sphere_point(u.z[0] * th.value(t), u.z[1]);
  };
  bulk.jacobian = [th](double t, const ParamPoint& u) -> Mat {
    const double a = u.z[0] * th.value(t);
    Mat j(3, 2);
    j.col(0) = th.value(t) * sphere_da(a, u.z[1]);
    j.col(1) = sphere_db(a, u.z[1]);
    return j;
  };
  bulk.time_derivative = [th](double t, const ParamPoint& u) {
    return Vec(u.z[0] * th.rate(t) * sphere_da(u.z[0] * th.value(t), u.z[1]));
  };
  dom.bulk = std::move(bulk);
  dom.membership = [th](double t, const Vec& x) {
    return x[2] / x.norm() > std::cos(th.value(t));
  };

  sc.fields = detail::standard_fields();
  sc.vector_fields = {{"time_flux", fields::time_flux(fields::wave())},
                      {"swirl", fields::swirl()},
                      {"gradient_z", fields::sphere_gradient_z()}};
  const double pi = std::numbers::pi;
  sc.reference["one"] = {
      [=](double t) { return 2.0 * pi * (1.0 - std::cos(th.value(t))); },
      [=](double t) { return 2.0 * pi * std::sin(th.value(t)) * th.rate(t); }};
  // integral of sin^2(a) cos^2(b) over the cap = pi (2/3 - c + c^3/3)
  sc.reference["one_plus_x2"] = {
      [=](double t) {
        const double c = std::cos(th.value(t));
        return 2.0 * pi * (1.0 - c) + pi * (2.0 / 3.0 - c + c * c * c / 3.0);
      },
      [=](double t) {
        const double s = std::sin(th.value(t));
        return (2.0 * pi * s + pi * s * s * s) * th.rate(t);
      }};
  return sc;
}

// Torus with center-circle radius R and tube radius r, chart (u, v) with
// both angles periodic.
inline ManifoldChart torus_chart(double big_r, double small_r) {
  using detail::vec3;
  ManifoldChart chart;
  const double tau = 2.0 * std::numbers::pi;
  chart.domain = Box::rect(0.0, tau, 0.0, tau).with_periodic(0).with_periodic(1);
  chart.ambient_dim = 3;
  chart.embed = [=](const Vec& u) {
    const double w = big_r + small_r * std::cos(u[1]);
    return vec3(w * std::cos(u[0]), w * std::sin(u[0]), small_r * std::sin(u[1]));
  };
  chart.embed_jacobian = [=](const Vec& u) -> Mat {
    const double w = big_r + small_r * std::cos(u[1]);
    Mat j(3, 2);
    j.col(0) = vec3(-w * std::sin(u[0]), w * std::cos(u[0]), 0.0);
    j.col(1) = vec3(-small_r * std::sin(u[1]) * std::cos(u[0]),
                    -small_r * std::sin(u[1]) * std::sin(u[0]),
                    small_r * std::cos(u[1]));
    return j;
  };
  chart.locate = [=](const Vec& x) {
    const double rho = std::hypot(x[0], x[1]);
    return detail::vec2(detail::wrap(std::atan2(x[1], x[0]), 0.0, tau),
                        detail::wrap(std::atan2(x[2], rho - big_r), 0.0, tau));
  };
  return chart;
}

// Patch of the torus around (u0, v0) = (pi, 0) whose chart-coordinate boundary
// is the polar curve rho(t, b) = 0.6 + 0.15 sin(2t) cos(3b).
inline Scenario torus_patch() {
  constexpr double big_r = 2.0, small_r = 0.5;
  constexpr double u0 = std::numbers::pi, v0 = 0.0;
  const ManifoldChart chart = torus_chart(big_r, small_r);
  auto rho = [](double t, double b) { return 0.6 + 0.15 * std::sin(2.0 * t) * std::cos(3.0 * b); };
  auto rho_t = [](double t, double b) { return 0.3 * std::cos(2.0 * t) * std::cos(3.0 * b); };
  auto rho_b = [](double t, double b) { return -0.45 * std::sin(2.0 * t) * std::sin(3.0 * b); };
  auto at = [=](double du, double dv) {
    return chart.embed(detail::vec2(u0 + du, v0 + dv));
  };
  auto jac_at = [=](double du, double dv) {
    return chart.embed_jacobian(detail::vec2(u0 + du, v0 + dv));
  };

  Scenario sc;
  sc.name = "torus_patch";
  sc.description = "patch with oscillating boundary on the torus R = 2, r = 0.5";
  EvolvingDomain& dom = sc.domain;
  dom.manifold = chart;
  dom.window = {-1.5, 1.5};
  dom.feature_size = 0.5;

  BoundaryImmersion& imm = dom.boundary;
  imm.charts = {Box::interval(0.0, 2.0 * std::numbers::pi).with_periodic(0).with_panels(0, 4)};
  imm.seams = {Seam{0, 0, true, 0, 0, false}};
  imm.map = [=](double t, const ParamPoint& z) {
    const double b = z.z[0], p = rho(t, b);
    return at(p * std::cos(b), p * std::sin(b));
  };
  imm.time_derivative = [=](double t, const ParamPoint& z) {
    const double b = z.z[0], p = rho(t, b);
    return Vec(jac_at(p * std::cos(b), p * std::sin(b)) *
               detail::vec2(rho_t(t, b) * std::cos(b), rho_t(t, b) * std::sin(b)));
  };
  imm.space_jacobian = [=](double t, const ParamPoint& z) -> Mat {
    const double b = z.z[0], p = rho(t, b), pb = rho_b(t, b);
    return jac_at(p * std::cos(b), p * std::sin(b)) *
           detail::vec2(pb * std::cos(b) - p * std::sin(b),
                        pb * std::sin(b) + p * std::cos(b));
  };

  BulkMap bulk;
  bulk.boxes = {Box::rect(0.0, 1.0, 0.0, 2.0 * std::numbers::pi).with_periodic(1).with_panels(1, 4)};
  bulk.map = [=](double t, const ParamPoint& u) {
    const double s = u.z[0], b = u.z[1], p = rho(t, b);
    return at(s * p * std::cos(b), s * p * std::sin(b));
  };
  bulk.jacobian = [=](double t, const ParamPoint& u) -> Mat {
    const double s = u.z[0], b = u.z[1], p = rho(t, b), pb = rho_b(t, b);
    Mat inner(2, 2);
    inner << p * std::cos(b), s * (pb * std::cos(b) - p * std::sin(b)),
        p * std::sin(b), s * (pb * std::sin(b) + p * std::cos(b));
    return jac_at(s * p * std::cos(b), s * p * std::sin(b)) * inner;
  };
  bulk.time_derivative = [=](double t, const ParamPoint& u) {
    const double s = u.z[0], b = u.z[1], p = rho(t, b);
    return Vec(jac_at(s * p * std::cos(b), s * p * std::sin(b)) *
               detail::vec2(s * rho_t(t, b) * std::cos(b), s * rho_t(t, b) * std::sin(b)));
  };
  dom.bulk = std::move(bulk);
  dom.membership = [=](double t, const Vec& x) {
    const Vec uv = chart.locate(x);
    const double du = detail::wrap(uv[0] - u0, -std::numbers::pi, 2.0 * std::numbers::pi);
    const double dv = detail::wrap(uv[1] - v0, -std::numbers::pi, 2.0 * std::numbers::pi);
    return std::hypot(du, dv) < rho(t, std::atan2(dv, du));
  };

  sc.fields = detail::standard_fields();
  sc.vector_fields = {{"time_flux", fields::time_flux(fields::wave())},
                      {"swirl", fields::swirl()},
                      {"poloidal", fields::torus_poloidal(big_r)}};
  return sc;
}

// Curve g(t, th) = (sin th, sin(2 th)/2 + t cos th). It crosses itself at
// (-t, 0) where sin th = -t, th in {-asin t, pi + asin t}; the two lobes
// between the crossing preimages are the boundary charts.
inline Scenario figure_eight() {
  using detail::vec2;
  const double pi = std::numbers::pi;
  // chart 0 (left lobe): th = pi + a + z (pi - 2a)
  // chart 1 (right lobe): th = -a + z (pi + 2a)
  auto theta = [=](double t, std::size_t chart, double z) {
    const double a = std::asin(t);
    return chart == 0 ? pi + a + z * (pi - 2.0 * a) : -a + z * (pi + 2.0 * a);
  };
  auto theta_z = [=](double t, std::size_t chart) {
    const double a = std::asin(t);
    return chart == 0 ? pi - 2.0 * a : pi + 2.0 * a;
  };
  auto theta_t = [=](double t, std::size_t chart, double z) {
    const double da = 1.0 / std::sqrt(1.0 - t * t);
    return chart == 0 ? da * (1.0 - 2.0 * z) : da * (2.0 * z - 1.0);
  };
  auto g = [](double t, double th) {
    return vec2(std::sin(th), 0.5 * std::sin(2.0 * th) + t * std::cos(th));
  };
  auto g_th = [](double t, double th) {
    return vec2(std::cos(th), std::cos(2.0 * th) - t * std::sin(th));
  };
  auto g_t = [](double, double th) { return vec2(0.0, std::cos(th)); };

  Scenario sc;
  sc.name = "figure_eight";
  sc.description = "curve (sin th, sin 2th / 2 + t cos th), self-crossing at (-t, 0)";
  sc.tolerance = 1e-4;
  sc.smooth = false;
  EvolvingDomain& dom = sc.domain;
  dom.manifold = flat_chart(Box::rect(-1.5, 1.5, -1.5, 1.5));
  dom.window = {-0.75, 0.75};
  dom.feature_size = 1.0;

  BoundaryImmersion& imm = dom.boundary;
  imm.charts = {Box::interval(0.0, 1.0), Box::interval(0.0, 1.0)};
  imm.seams = {Seam{0, 0, true, 1, 0, false}, Seam{1, 0, true, 0, 0, false}};
  imm.map = [=](double t, const ParamPoint& z) { return g(t, theta(t, z.chart, z.z[0])); };
  imm.time_derivative = [=](double t, const ParamPoint& z) {
    const double th = theta(t, z.chart, z.z[0]);
    return Vec(g_t(t, th) + g_th(t, th) * theta_t(t, z.chart, z.z[0]));
  };
  imm.space_jacobian = [=](double t, const ParamPoint& z) -> Mat {
    return g_th(t, theta(t, z.chart, z.z[0])) * theta_z(t, z.chart);
  };
  imm.exceptional = [](double) {
    ExceptionalSet ex;
    ex.image_points = 1;
    for (std::size_t c = 0; c < 2; ++c) {
      ex.preimages.push_back({c, Vec::Constant(1, 0.0)});
      ex.preimages.push_back({c, Vec::Constant(1, 1.0)});
    }
    return ex;
  };

  // Vertical sweep: x = sin th, y from -Y to Y, Y = cos th (sin th + t); the
  // left piece covers th in (-pi/2, -a), the right piece (-a, pi/2).
  auto piece_theta = [=](double t, std::size_t piece, double u) {
    const double a = std::asin(t);
    return piece == 0 ? -pi / 2.0 + u * (pi / 2.0 - a) : -a + u * (pi / 2.0 + a);
  };
  auto piece_theta_u = [=](double t, std::size_t piece) {
    const double a = std::asin(t);
    return piece == 0 ? pi / 2.0 - a : pi / 2.0 + a;
  };
  auto piece_theta_t = [=](double t, std::size_t piece, double u) {
    const double da = 1.0 / std::sqrt(1.0 - t * t);
    return piece == 0 ? -u * da : -(1.0 - u) * da;
  };
  auto lift = [](double t, double th) { return std::cos(th) * (std::sin(th) + t); };
  auto lift_th = [](double t, double th) { return std::cos(2.0 * th) - t * std::sin(th); };

  BulkMap bulk;
  bulk.boxes = {Box::rect(0.0, 1.0, 0.0, 1.0), Box::rect(0.0, 1.0, 0.0, 1.0)};
  bulk.map = [=](double t, const ParamPoint& u) {
    const double th = piece_theta(t, u.chart, u.z[0]);
    return vec2(std::sin(th), (1.0 - 2.0 * u.z[1]) * lift(t, th));
  };
  bulk.jacobian = [=](double t, const ParamPoint& u) -> Mat {
    const double th = piece_theta(t, u.chart, u.z[0]);
    const double thu = piece_theta_u(t, u.chart);
    Mat j(2, 2);
    j << std::cos(th) * thu, 0.0,
        (1.0 - 2.0 * u.z[1]) * lift_th(t, th) * thu, -2.0 * lift(t, th);
    return j;
  };
  bulk.time_derivative = [=](double t, const ParamPoint& u) {
    const double th = piece_theta(t, u.chart, u.z[0]);
    const double tht = piece_theta_t(t, u.chart, u.z[0]);
    return vec2(std::cos(th) * tht,
                (1.0 - 2.0 * u.z[1]) * (std::cos(th) + lift_th(t, th) * tht));
  };
  dom.bulk = std::move(bulk);

  // The vertical line through q meets the curve at th1 = asin(q_x) and
  // pi - th1, at heights +-cos(th1)(q_x + t); q is enclosed iff it lies
  // strictly between them.
  dom.membership = [](double t, const Vec& q) {
    if (std::abs(q[0]) >= 1.0) return false;
    return std::abs(q[1]) < std::sqrt(1.0 - q[0] * q[0]) * std::abs(q[0] + t);
  };

  sc.fields = detail::standard_fields();
  sc.vector_fields = detail::flat_vector_fields();
  sc.reference["one"] = {
      [](double t) {
        const double a = std::asin(t), c = std::sqrt(1.0 - t * t);
        return 4.0 / 3.0 * c * c * c + 2.0 * t * a + 2.0 * t * t * c;
      },
      [](double t) { return 2.0 * (std::asin(t) + t * std::sqrt(1.0 - t * t)); }};

  // The raw curve on th in [0, 2pi): same image, different parametrization.
  BoundaryImmersion raw;
  raw.charts = {Box::interval(0.0, 2.0 * pi).with_periodic(0).with_panels(0, 2)};
  raw.seams = {Seam{0, 0, true, 0, 0, false}};
  raw.map = [=](double t, const ParamPoint& z) { return g(t, z.z[0]); };
  raw.time_derivative = [=](double t, const ParamPoint& z) { return g_t(t, z.z[0]); };
  raw.space_jacobian = [=](double t, const ParamPoint& z) -> Mat { return g_th(t, z.z[0]); };
  raw.exceptional = [=](double t) {
    const double a = std::asin(t);
    const Box box = Box::interval(0.0, 2.0 * pi).with_periodic(0);
    ExceptionalSet ex;
    ex.image_points = 1;
    ex.preimages.push_back({0, box.normalize(Vec::Constant(1, pi + a))});
    ex.preimages.push_back({0, box.normalize(Vec::Constant(1, -a))});
    return ex;
  };
  sc.paired = std::move(raw);
  return sc;
}

// O_t = (a(t), b(t)) in M = R; the boundary is two points (0-dim charts).
inline Scenario moving_interval(std::string name, std::string description,
                                Motion a, Motion b, TimeWindow window, Box line) {
  Scenario sc;
  sc.name = std::move(name);
  sc.description = std::move(description);
  EvolvingDomain& dom = sc.domain;
  dom.manifold = flat_chart(std::move(line));
  dom.window = window;
  dom.feature_size = 1.0;

  BoundaryImmersion& imm = dom.boundary;
  imm.charts = {Box::point(), Box::point()};
  imm.map = [=](double t, const ParamPoint& z) {
    return Vec::Constant(1, z.chart == 0 ? a.value(t) : b.value(t));
  };
  imm.time_derivative = [=](double t, const ParamPoint& z) {
    return Vec::Constant(1, z.chart == 0 ? a.rate(t) : b.rate(t));
  };

  BulkMap bulk;
  bulk.boxes = {Box::interval(0.0, 1.0)};
  bulk.map = [=](double t, const ParamPoint& u) {
    return Vec::Constant(1, a.value(t) + u.z[0] * (b.value(t) - a.value(t)));
  };
  bulk.jacobian = [=](double t, const ParamPoint&) -> Mat {
    return Mat::Constant(1, 1, b.value(t) - a.value(t));
  };
  bulk.time_derivative = [=](double t, const ParamPoint& u) {
    return Vec::Constant(1, a.rate(t) + u.z[0] * (b.rate(t) - a.rate(t)));
  };
  dom.bulk = std::move(bulk);
  dom.membership = [=](double t, const Vec& x) {
    return x[0] > a.value(t) && x[0] < b.value(t);
  };

  sc.fields = detail::standard_fields();
  sc.fields["x"] = fields::coordinate(0);
  sc.fields["x_sq"] = fields::coordinate_squared(0);
  sc.vector_fields = detail::flat_vector_fields();

  auto power = [=](int k) {
    return ReferenceValues{
        [=](double t) {
          return (std::pow(b.value(t), k) - std::pow(a.value(t), k)) / k;
        },
        [=](double t) {
          return std::pow(b.value(t), k - 1) * b.rate(t) -
                 std::pow(a.value(t), k - 1) * a.rate(t);
        }};
  };
  sc.reference["one"] = power(1);
  sc.reference["x"] = power(2);
  sc.reference["x_sq"] = power(3);
  sc.reference["one_plus_x2"] = {
      [=](double t) { return power(1).integral(t) + power(3).integral(t); },
      [=](double t) { return power(1).derivative(t) + power(3).derivative(t); }};
  return sc;
}

inline Scenario static_interval() {
  return moving_interval("static_interval", "unit interval at rest on the line",
                         constant(0.0), constant(1.0), {-1.0, 1.0},
                         Box::interval(-1.0, 2.0));
}

inline Scenario leibniz_interval() {
  return moving_interval(
      "leibniz_interval", "interval (t, 2 + t^2) on the line", linear(0.0, 1.0),
      {[](double t) { return 2.0 + t * t; }, [](double t) { return 2.0 * t; }},
      {-1.0, 3.0}, Box::interval(-2.0, 12.0));
}

inline std::vector<std::string> names() {
  return {"static_interval", "leibniz_interval", "static_disk",
          "shrinking_disk",  "translating_ellipse", "expanding_ball",
          "spherical_cap",   "torus_patch",      "figure_eight"};
}

inline Scenario make(const std::string& name) {
  if (name == "static_interval") return static_interval();
  if (name == "leibniz_interval") return leibniz_interval();
  if (name == "static_disk") return static_disk();
  if (name == "shrinking_disk") return shrinking_disk();
  if (name == "translating_ellipse") return translating_ellipse();
  if (name == "expanding_ball") return expanding_ball();
  if (name == "static_ball") return static_ball();
  if (name == "spherical_cap") return spherical_cap();
  if (name == "torus_patch") return torus_patch();
  if (name == "figure_eight") return figure_eight();
  throw ConfigError("unknown scenario '" + name + "'");
}

inline std::vector<Scenario> registry() {
  std::vector<Scenario> out;
  for (const auto& n : names()) out.push_back(make(n));
  return out;
}

namespace detail {

template <typename R, typename... Rest>
std::function<R(double, Rest...)> shift_time(std::function<R(double, Rest...)> fn,
                                             double c) {
  if (!fn) return {};
  return [fn = std::move(fn), c](double t, Rest... rest) { return fn(t - c, rest...); };
}

inline BoundaryImmersion shift_immersion(BoundaryImmersion imm, double c) {
  imm.map = shift_time(std::move(imm.map), c);
  imm.time_derivative = shift_time(std::move(imm.time_derivative), c);
  imm.space_jacobian = shift_time(std::move(imm.space_jacobian), c);
  imm.exceptional = shift_time(std::move(imm.exceptional), c);
  return imm;
}

inline ScalarField shift_field(ScalarField f, double c) {
  f.value = shift_time(std::move(f.value), c);
  f.time_partial = shift_time(std::move(f.time_partial), c);
  f.ambient_gradient = shift_time(std::move(f.ambient_gradient), c);
  return f;
}

}  // namespace detail

// The same scenario seen on the clock tau = t + c.
inline Scenario time_shifted(Scenario sc, double c) {
  EvolvingDomain& dom = sc.domain;
  dom.window = {dom.window.lower + c, dom.window.upper + c};
  dom.boundary = detail::shift_immersion(std::move(dom.boundary), c);
  if (dom.bulk) {
    dom.bulk->map = detail::shift_time(std::move(dom.bulk->map), c);
    dom.bulk->jacobian = detail::shift_time(std::move(dom.bulk->jacobian), c);
    dom.bulk->time_derivative = detail::shift_time(std::move(dom.bulk->time_derivative), c);
  }
  dom.membership = detail::shift_time(std::move(dom.membership), c);
  for (auto& [key, f] : sc.fields) f = detail::shift_field(std::move(f), c);
  for (auto& [key, a] : sc.vector_fields) {
    a.value = detail::shift_time(std::move(a.value), c);
    a.jacobian = detail::shift_time(std::move(a.jacobian), c);
  }
  for (auto& [key, ref] : sc.reference) {
    ref.integral = detail::shift_time(std::move(ref.integral), c);
    ref.derivative = detail::shift_time(std::move(ref.derivative), c);
  }
  if (sc.paired) sc.paired = detail::shift_immersion(std::move(*sc.paired), c);
  return sc;
}

}  // namespace scenarios
}  // namespace evolve
