#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "evolve/domain.hpp"

// Field library: scalar fields phi(t, x) and space-time vector fields on
// E = R x M, all with analytic partials.
namespace evolve::fields {

inline ScalarField one() {
  return {[](double, const Vec&) { return 1.0; },
          [](double, const Vec&) { return 0.0; },
          [](double, const Vec& x) -> Vec { return Vec::Zero(x.size()); }};
}

inline ScalarField coordinate(int i) {
  return {[i](double, const Vec& x) { return x[i]; },
          [](double, const Vec&) { return 0.0; },
          [i](double, const Vec& x) -> Vec {
            Vec g = Vec::Zero(x.size());
            g[i] = 1.0;
            return g;
          }};
}

inline ScalarField coordinate_squared(int i) {
  return {[i](double, const Vec& x) { return x[i] * x[i]; },
          [](double, const Vec&) { return 0.0; },
          [i](double, const Vec& x) -> Vec {
            Vec g = Vec::Zero(x.size());
            g[i] = 2.0 * x[i];
            return g;
          }};
}

// 1 + x_0^2
inline ScalarField one_plus_x2() { return combine(1.0, one(), 1.0, coordinate_squared(0)); }

// cos(t + x_0/2) + 0.3 sin(0.7 t) x_{d-1}
inline ScalarField wave() {
  ScalarField f;
  f.value = [](double t, const Vec& x) {
    return std::cos(t + 0.5 * x[0]) + 0.3 * std::sin(0.7 * t) * x[x.size() - 1];
  };
  f.time_partial = [](double t, const Vec& x) {
    return -std::sin(t + 0.5 * x[0]) + 0.21 * std::cos(0.7 * t) * x[x.size() - 1];
  };
  f.ambient_gradient = [](double t, const Vec& x) -> Vec {
    Vec g = Vec::Zero(x.size());
    g[0] = -0.5 * std::sin(t + 0.5 * x[0]);
    g[x.size() - 1] += 0.3 * std::sin(0.7 * t);
    return g;
  };
  return f;
}

// t g(x) for a time-independent g.
inline ScalarField time_times(ScalarField g) {
  ScalarField f;
  f.value = [g](double t, const Vec& x) { return t * g.value(t, x); };
  f.time_partial = [g](double t, const Vec& x) { return g.value(t, x); };
  if (g.ambient_gradient) {
    f.ambient_gradient = [g](double t, const Vec& x) -> Vec {
      return t * g.ambient_gradient(t, x);
    };
  }
  return f;
}

// ---------------------------------------------------------------------------
// Space-time fields. Values are (time, space); Jacobian column 0 is d/ds.

// (phi, 0): the time-like flux of a scalar field.
inline SpaceTimeField time_flux(ScalarField phi) {
  SpaceTimeField a;
  a.value = [phi](double s, const Vec& x) -> Vec {
    Vec v = Vec::Zero(1 + x.size());
    v[0] = phi.value(s, x);
    return v;
  };
  // Without both partials there is no analytic Jacobian to offer.
  if (!phi.time_partial || !phi.ambient_gradient) return a;
  a.jacobian = [phi](double s, const Vec& x) -> Mat {
    const auto d = x.size();
    Mat j = Mat::Zero(1 + d, 1 + d);
    j(0, 0) = phi.time_partial(s, x);
    j.block(0, 1, 1, d) = phi.ambient_gradient(s, x).transpose();
    return j;
  };
  return a;
}

// (0, (1 + s) x), flat M only.
inline SpaceTimeField dilation() {
  SpaceTimeField a;
  a.value = [](double s, const Vec& x) -> Vec {
    Vec v = Vec::Zero(1 + x.size());
    v.tail(x.size()) = (1.0 + s) * x;
    return v;
  };
  a.jacobian = [](double s, const Vec& x) -> Mat {
    const auto d = x.size();
    Mat j = Mat::Zero(1 + d, 1 + d);
    j.block(1, 0, d, 1) = x;
    j.block(1, 1, d, d) = (1.0 + s) * Mat::Identity(d, d);
    return j;
  };
  return a;
}

// (0, (1 + s)(-x_1, x_0, 0, ...)): rotation about the last axes, tangent to
// any surface of revolution about x_2.
inline SpaceTimeField swirl() {
  SpaceTimeField a;
  a.value = [](double s, const Vec& x) -> Vec {
    Vec v = Vec::Zero(1 + x.size());
    v[1] = -(1.0 + s) * x[1];
    v[2] = (1.0 + s) * x[0];
    return v;
  };
  a.jacobian = [](double s, const Vec& x) -> Mat {
    const auto d = x.size();
    Mat j = Mat::Zero(1 + d, 1 + d);
    j(1, 0) = -x[1];
    j(2, 0) = x[0];
    j(1, 2) = -(1.0 + s);
    j(2, 1) = 1.0 + s;
    return j;
  };
  return a;
}

// (s x_0^2, sin(s) R x) with R the planar rotation; for d = 1 the spatial
// part is sin(s) x_0^2.
inline SpaceTimeField mixed_flat() {
  SpaceTimeField a;
  a.value = [](double s, const Vec& x) -> Vec {
    Vec v = Vec::Zero(1 + x.size());
    v[0] = s * x[0] * x[0];
    if (x.size() == 1) {
      v[1] = std::sin(s) * x[0] * x[0];
    } else {
      v[1] = -std::sin(s) * x[1];
      v[2] = std::sin(s) * x[0];
    }
    return v;
  };
  a.jacobian = [](double s, const Vec& x) -> Mat {
    const auto d = x.size();
    Mat j = Mat::Zero(1 + d, 1 + d);
    j(0, 0) = x[0] * x[0];
    j(0, 1) = 2.0 * s * x[0];
    if (d == 1) {
      j(1, 0) = std::cos(s) * x[0] * x[0];
      j(1, 1) = 2.0 * std::sin(s) * x[0];
    } else {
      j(1, 0) = -std::cos(s) * x[1];
      j(2, 0) = std::cos(s) * x[0];
      j(1, 2) = -std::sin(s);
      j(2, 1) = std::sin(s);
    }
    return j;
  };
  return a;
}

// (s x_2, cos(s)(e_z - x_2 x)): tangent to the unit sphere.
inline SpaceTimeField sphere_gradient_z() {
  SpaceTimeField a;
  a.value = [](double s, const Vec& x) -> Vec {
    Vec v(4);
    v[0] = s * x[2];
    Vec ez = Vec::Zero(3);
    ez[2] = 1.0;
    v.tail(3) = std::cos(s) * (ez - x[2] * x);
    return v;
  };
  a.jacobian = [](double s, const Vec& x) -> Mat {
    Mat j = Mat::Zero(4, 4);
    j(0, 0) = x[2];
    j(0, 3) = s;
    for (int i = 0; i < 3; ++i) {
      const double e = (i == 2 ? 1.0 : 0.0) - x[2] * x[i];
      j(1 + i, 0) = -std::sin(s) * e;
      for (int k = 0; k < 3; ++k) {
        double dk = k == 2 ? -x[i] : 0.0;
        if (k == i) dk -= x[2];
        j(1 + i, 1 + k) = std::cos(s) * dk;
      }
    }
    return j;
  };
  return a;
}

// (s x_2, cos(s)(-x_2 x_0/rho, -x_2 x_1/rho, rho - R)), rho = |(x_0, x_1)|:
// tangent to every torus with center-circle radius R.
inline SpaceTimeField torus_poloidal(double major_radius) {
  const double big_r = major_radius;
  SpaceTimeField a;
  a.value = [big_r](double s, const Vec& x) -> Vec {
    const double rho = std::hypot(x[0], x[1]);
    Vec v(4);
    v[0] = s * x[2];
    v[1] = -std::cos(s) * x[2] * x[0] / rho;
    v[2] = -std::cos(s) * x[2] * x[1] / rho;
    v[3] = std::cos(s) * (rho - big_r);
    return v;
  };
  a.jacobian = [big_r](double s, const Vec& x) -> Mat {
    const double rho = std::hypot(x[0], x[1]);
    const double r3 = rho * rho * rho;
    const double c = std::cos(s), sn = std::sin(s);
    Mat j = Mat::Zero(4, 4);
    j(0, 0) = x[2];
    j(0, 3) = s;
    j(1, 0) = sn * x[2] * x[0] / rho;
    j(2, 0) = sn * x[2] * x[1] / rho;
    j(3, 0) = -sn * (rho - big_r);
    j(1, 1) = -c * x[2] * x[1] * x[1] / r3;
    j(1, 2) = c * x[2] * x[0] * x[1] / r3;
    j(1, 3) = -c * x[0] / rho;
    j(2, 1) = c * x[2] * x[0] * x[1] / r3;
    j(2, 2) = -c * x[2] * x[0] * x[0] / r3;
    j(2, 3) = -c * x[1] / rho;
    j(3, 1) = c * x[0] / rho;
    j(3, 2) = c * x[1] / rho;
    return j;
  };
  return a;
}

}  // namespace evolve::fields
