#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evolve/core.hpp"

namespace evolve {

namespace detail {

// Runs a user-supplied map. Library errors pass through; anything else is
// reported as an evaluation failure of the named map.
template <typename Fn, typename... Args>
auto invoke_user(const char* what, const Fn& fn, Args&&... args) {
  if (!fn) throw ConfigError(std::string("missing map: ") + what);
  try {
    return fn(std::forward<Args>(args)...);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationFailure(std::string(what) + " threw: " + e.what());
  }
}

// Central-difference d/dz of a map R^k -> R^d; returns a d x k matrix.
template <typename Fn>
Mat central_jacobian(const Fn& fn, const Vec& z, int out_dim, double step) {
  const auto k = z.size();
  Mat jac(out_dim, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    Vec zp = z, zm = z;
    zp[i] += step;
    zm[i] -= step;
    jac.col(i) = (fn(zp) - fn(zm)) / (2.0 * step);
  }
  return jac;
}

}  // namespace detail

// Coordinate patch of the fixed ambient manifold M (dimension m) in R^d.
struct ManifoldChart {
  Box domain;
  int ambient_dim = 0;
  std::function<Vec(const Vec&)> embed;
  std::function<Mat(const Vec&)> embed_jacobian;  // optional
  // Optional chart coordinates of (a point near) an ambient point; used to
  // seed the closest-point projection onto M.
  std::function<Vec(const Vec&)> locate;

  int param_dim() const { return domain.dim(); }

  // An m = d chart is an open subset of R^d.
  bool flat() const { return param_dim() == ambient_dim; }
};

// Identity chart of an open box in R^d.
inline ManifoldChart flat_chart(Box box) {
  ManifoldChart chart;
  const int d = box.dim();
  chart.domain = std::move(box);
  chart.ambient_dim = d;
  chart.embed = [](const Vec& u) { return u; };
  chart.embed_jacobian = [d](const Vec&) { return Mat::Identity(d, d); };
  chart.locate = [](const Vec& x) { return x; };
  return chart;
}

struct ExceptionalSet {
  std::size_t image_points = 0;         // self-intersection points of the image
  std::vector<ParamPoint> preimages;    // their parameter preimages
};

// Glues one chart edge to another. Only used for validation: the two edges
// must map to the same points.
struct Seam {
  std::size_t chart_a = 0;
  int axis_a = 0;
  bool upper_a = true;
  std::size_t chart_b = 0;
  int axis_b = 0;
  bool upper_b = false;
};

// Time-dependent immersion f(t, z) of the (m-1)-dimensional parameter
// manifold N onto the reduced boundary. N is a union of boxes.
struct BoundaryImmersion {
  std::vector<Box> charts;
  std::vector<Seam> seams;
  std::function<Vec(double, const ParamPoint&)> map;
  std::function<Vec(double, const ParamPoint&)> time_derivative;  // optional
  std::function<Mat(double, const ParamPoint&)> space_jacobian;   // optional
  std::function<ExceptionalSet(double)> exceptional;              // optional

  int param_dim() const { return charts.empty() ? 0 : charts.front().dim(); }

  ExceptionalSet exceptional_set(double t) const {
    return exceptional ? exceptional(t) : ExceptionalSet{};
  }
};

// Optional parametrization of O_t by boxes of dimension m.
struct BulkMap {
  std::vector<Box> boxes;
  std::function<Vec(double, const ParamPoint&)> map;
  std::function<Mat(double, const ParamPoint&)> jacobian;         // optional
  std::function<Vec(double, const ParamPoint&)> time_derivative;  // optional
};

struct EvolvingDomain {
  ManifoldChart manifold;
  BoundaryImmersion boundary;
  std::optional<BulkMap> bulk;
  std::function<bool(double, const Vec&)> membership;
  TimeWindow window;
  double feature_size = 0.0;  // 0 selects the manifold box diameter
  Tolerances tol;

  int param_dim() const { return manifold.param_dim(); }
  int ambient_dim() const { return manifold.ambient_dim; }

  double time_step() const {
    return tol.time_step > 0.0 ? tol.time_step : 1e-6 * window.length();
  }

  double probe_distance() const {
    if (tol.probe > 0.0) return tol.probe;
    const double size =
        feature_size > 0.0 ? feature_size : manifold.domain.diameter();
    return 1e-4 * size;
  }

  std::size_t exceptional_set_size(double t) const {
    return boundary.exceptional_set(t).image_points;
  }
};

// Scalar field phi(t, x) on M with optional analytic partials.
struct ScalarField {
  std::function<double(double, const Vec&)> value;
  std::function<double(double, const Vec&)> time_partial;   // optional
  std::function<Vec(double, const Vec&)> ambient_gradient;  // optional
};

// Vector field on E = R x M in (time, space) block order, with its ambient
// Jacobian: column 0 is d/ds, columns 1..d are d/dx.
struct SpaceTimeField {
  std::function<Vec(double, const Vec&)> value;
  std::function<Mat(double, const Vec&)> jacobian;
};

// ---------------------------------------------------------------------------
// Evaluation with finite-difference fallbacks.

inline double geom_step(const Tolerances& tol, const Box& box) {
  if (tol.geom_step > 0.0) return tol.geom_step;
  const double diam = box.diameter();
  return 1e-6 * (diam > 0.0 ? diam : 1.0);
}

inline Vec chart_point(const ManifoldChart& chart, const Vec& u) {
  return require_finite(detail::invoke_user("manifold embed", chart.embed, u),
                        "manifold embed");
}

inline Mat chart_jacobian(const ManifoldChart& chart, const Vec& u,
                          const Tolerances& tol = {}) {
  if (chart.embed_jacobian) {
    return require_finite(
        detail::invoke_user("manifold jacobian", chart.embed_jacobian, u),
        "manifold jacobian");
  }
  auto fn = [&](const Vec& v) { return chart_point(chart, v); };
  return detail::central_jacobian(fn, u, chart.ambient_dim,
                                  geom_step(tol, chart.domain));
}

struct ManifoldPoint {
  Vec u;          // chart coordinates
  Vec point;      // closest point of M found
  double distance = 0.0;
};

// Closest point of M to x by Gauss-Newton in chart coordinates. The seed is
// chart.locate(x) when available, otherwise the best node of a coarse grid.
inline ManifoldPoint project_to_manifold(const ManifoldChart& chart,
                                         const Vec& x,
                                         const Tolerances& tol = {}) {
  const int m = chart.param_dim();
  Vec u;
  if (chart.locate) {
    u = require_finite(detail::invoke_user("manifold locate", chart.locate, x),
                       "manifold locate");
  } else {
    constexpr int kGrid = 6;
    double best = std::numeric_limits<double>::infinity();
    int total = 1;
    for (int i = 0; i < m; ++i) total *= kGrid;
    for (int idx = 0; idx < total; ++idx) {
      Vec frac(m);
      int rest = idx;
      for (int i = 0; i < m; ++i) {
        frac[i] = (rest % kGrid + 0.5) / kGrid;
        rest /= kGrid;
      }
      const Vec cand = chart.domain.at(frac);
      const double dist = (chart_point(chart, cand) - x).norm();
      if (dist < best) {
        best = dist;
        u = cand;
      }
    }
  }

  for (int iter = 0; iter < 60; ++iter) {
    const Vec r = x - chart_point(chart, u);
    const Mat jac = chart_jacobian(chart, u, tol);
    const Vec step = (jac.transpose() * jac).ldlt().solve(jac.transpose() * r);
    if (!step.allFinite()) break;
    u += step;
    for (int i = 0; i < m; ++i) {
      if (chart.domain.periodic[static_cast<std::size_t>(i)]) {
        const double w = chart.domain.upper[i] - chart.domain.lower[i];
        const double off = u[i] - chart.domain.lower[i];
        u[i] = chart.domain.lower[i] + off - w * std::floor(off / w);
      }
    }
    if (step.norm() <= 1e-15 * (1.0 + u.norm())) break;
  }
  ManifoldPoint out;
  out.point = chart_point(chart, u);
  out.distance = (out.point - x).norm();
  out.u = std::move(u);
  return out;
}

inline Vec immersion_point(const BoundaryImmersion& imm, double t,
                           const ParamPoint& z) {
  return require_finite(detail::invoke_user("boundary map", imm.map, t, z),
                        "boundary map");
}

// df/dt at fixed z; central difference with the given step when no analytic
// derivative is supplied.
inline Vec immersion_velocity(const BoundaryImmersion& imm, double t,
                              const ParamPoint& z, double time_step) {
  if (imm.time_derivative) {
    return require_finite(
        detail::invoke_user("boundary time derivative", imm.time_derivative,
                            t, z),
        "boundary time derivative");
  }
  return (immersion_point(imm, t + time_step, z) -
          immersion_point(imm, t - time_step, z)) /
         (2.0 * time_step);
}

// Spatial differential df_t(z), a d x (m-1) matrix.
inline Mat immersion_differential(const BoundaryImmersion& imm, double t,
                                  const ParamPoint& z,
                                  const Tolerances& tol = {}) {
  if (imm.space_jacobian) {
    return require_finite(
        detail::invoke_user("boundary jacobian", imm.space_jacobian, t, z),
        "boundary jacobian");
  }
  const Vec p = immersion_point(imm, t, z);
  if (z.z.size() == 0) return Mat(p.size(), 0);
  auto fn = [&](const Vec& v) {
    return immersion_point(imm, t, ParamPoint{z.chart, v});
  };
  return detail::central_jacobian(fn, z.z, static_cast<int>(p.size()),
                                  geom_step(tol, imm.charts.at(z.chart)));
}

inline Vec bulk_point(const BulkMap& bulk, double t, const ParamPoint& u) {
  return require_finite(detail::invoke_user("bulk map", bulk.map, t, u),
                        "bulk map");
}

inline Mat bulk_differential(const BulkMap& bulk, double t, const ParamPoint& u,
                             const Tolerances& tol = {}) {
  if (bulk.jacobian) {
    return require_finite(
        detail::invoke_user("bulk jacobian", bulk.jacobian, t, u),
        "bulk jacobian");
  }
  const Vec p = bulk_point(bulk, t, u);
  auto fn = [&](const Vec& v) {
    return bulk_point(bulk, t, ParamPoint{u.chart, v});
  };
  return detail::central_jacobian(fn, u.z, static_cast<int>(p.size()),
                                  geom_step(tol, bulk.boxes.at(u.chart)));
}

inline Vec bulk_velocity(const BulkMap& bulk, double t, const ParamPoint& u,
                         double time_step) {
  if (bulk.time_derivative) {
    return require_finite(
        detail::invoke_user("bulk time derivative", bulk.time_derivative, t, u),
        "bulk time derivative");
  }
  return (bulk_point(bulk, t + time_step, u) -
          bulk_point(bulk, t - time_step, u)) /
         (2.0 * time_step);
}

inline bool is_inside(const EvolvingDomain& domain, double t, const Vec& x) {
  return detail::invoke_user("membership", domain.membership, t, x);
}

inline double field_value(const ScalarField& field, double t, const Vec& x) {
  return require_finite(detail::invoke_user("field value", field.value, t, x),
                        "field value");
}

inline double field_time_partial(const ScalarField& field, double t,
                                 const Vec& x, double time_step) {
  if (field.time_partial) {
    return require_finite(
        detail::invoke_user("field time partial", field.time_partial, t, x),
        "field time partial");
  }
  return (field_value(field, t + time_step, x) -
          field_value(field, t - time_step, x)) /
         (2.0 * time_step);
}

// alpha * f + beta * g, with partials wherever both operands supply them.
inline ScalarField combine(double alpha, const ScalarField& f, double beta,
                           const ScalarField& g) {
  ScalarField out;
  out.value = [=](double t, const Vec& x) {
    return alpha * f.value(t, x) + beta * g.value(t, x);
  };
  if (f.time_partial && g.time_partial) {
    out.time_partial = [=](double t, const Vec& x) {
      return alpha * f.time_partial(t, x) + beta * g.time_partial(t, x);
    };
  }
  if (f.ambient_gradient && g.ambient_gradient) {
    out.ambient_gradient = [=](double t, const Vec& x) -> Vec {
      return alpha * f.ambient_gradient(t, x) + beta * g.ambient_gradient(t, x);
    };
  }
  return out;
}

}  // namespace evolve
