#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "evolve/quadrature.hpp"

namespace evolve {

// Space-time vectors are stored (time, space): index 0 is the time slot.

// The purely time-like unit vector (1, 0, ..., 0) in R^{1+d}.
inline Vec time_vector(int d) {
  Vec t = Vec::Zero(1 + d);
  t[0] = 1.0;
  return t;
}

// (0, v): a spatial vector lifted into R^{1+d}.
inline Vec lift_spatial(const Vec& v) {
  Vec out(1 + v.size());
  out[0] = 0.0;
  out.tail(v.size()) = v;
  return out;
}

struct SpaceTimeFrame {
  enum class Part { bottom, lateral, top };

  Part part;
  Vec point;   // (s, x)
  Vec normal;  // exterior unit normal to W

  SpaceTimeFrame(Part p, Vec pt, Vec n, double unit_tol = 1e-10)
      : part(p), point(std::move(pt)), normal(std::move(n)) {
    if (normal.size() != point.size()) {
      throw ConfigError("space-time point and normal differ in dimension");
    }
    if (std::abs(normal.norm() - 1.0) >= unit_tol) {
      throw ConfigError("space-time normal is not unit length");
    }
    const int d = static_cast<int>(point.size()) - 1;
    if (part != Part::lateral) {
      const Vec expect = (part == Part::top ? 1.0 : -1.0) * time_vector(d);
      if ((normal - expect).norm() >= unit_tol) {
        throw ConfigError("bottom/top normal must be -t/+t");
      }
    }
  }
};

// F(s, z) = (s, f(s, z)).
inline Vec spacetime_immersion(const EvolvingDomain& domain, double s,
                               const ParamPoint& z) {
  const Vec p = immersion_point(domain.boundary, s, z);
  Vec out(1 + p.size());
  out[0] = s;
  out.tail(p.size()) = p;
  return out;
}

// w = (n - V t) / sqrt(1 + V^2), i.e. (-V, n) / sqrt(1 + V^2).
inline Vec lateral_normal_from(double normal_velocity, const Vec& normal) {
  Vec w = lift_spatial(normal);
  w[0] = -normal_velocity;
  return w / std::sqrt(1.0 + normal_velocity * normal_velocity);
}

inline Vec lateral_normal(const EvolvingDomain& domain, double s,
                          const ParamPoint& z) {
  const BoundaryGeometry geo = boundary_geometry(domain, s, z);
  return lateral_normal_from(geo.normal_velocity, geo.normal);
}

inline SpaceTimeFrame bottom_frame(double t0, const Vec& x) {
  Vec pt(1 + x.size());
  pt[0] = t0;
  pt.tail(x.size()) = x;
  return {SpaceTimeFrame::Part::bottom, pt,
          -time_vector(static_cast<int>(x.size()))};
}

inline SpaceTimeFrame top_frame(double t, const Vec& x) {
  Vec pt(1 + x.size());
  pt[0] = t;
  pt.tail(x.size()) = x;
  return {SpaceTimeFrame::Part::top, pt, time_vector(static_cast<int>(x.size()))};
}

inline SpaceTimeFrame lateral_frame(const EvolvingDomain& domain, double s,
                                    const ParamPoint& z) {
  const BoundaryGeometry geo = boundary_geometry(domain, s, z);
  return {SpaceTimeFrame::Part::lateral, spacetime_immersion(domain, s, z),
          lateral_normal_from(geo.normal_velocity, geo.normal),
          domain.tol.unit_tol};
}

// The characterization that pins down w on the lateral side.
struct LateralNormalDiagnostics {
  double unit_error = 0.0;        // ||w| - 1|
  double tangency = 0.0;          // w . (V n + t)
  double exterior = 0.0;          // w . n, must be > 0
  double boundary_orthogonality = 0.0;  // max |(w - (w.t)t) . tau|
};

inline LateralNormalDiagnostics lateral_normal_diagnostics(
    const EvolvingDomain& domain, double s, const ParamPoint& z) {
  const BoundaryGeometry geo = boundary_geometry(domain, s, z);
  const Vec w = lateral_normal_from(geo.normal_velocity, geo.normal);
  const int d = static_cast<int>(geo.point.size());
  const Vec that = time_vector(d);
  const Vec n = lift_spatial(geo.normal);

  LateralNormalDiagnostics out;
  out.unit_error = std::abs(w.norm() - 1.0);
  out.tangency = w.dot(geo.normal_velocity * n + that);
  out.exterior = w.dot(n);
  const Vec spatial = w - w.dot(that) * that;
  for (Eigen::Index j = 0; j < geo.differential.cols(); ++j) {
    const Vec tau = lift_spatial(geo.differential.col(j));
    out.boundary_orthogonality =
        std::max(out.boundary_orthogonality, std::abs(spatial.dot(tau)));
  }
  return out;
}

// dF = [[1, 0], [f', df]], a (1+d) x m matrix (columns s, z_1..z_{m-1}).
inline Mat spacetime_differential(const EvolvingDomain& domain, double s,
                                  const ParamPoint& z) {
  const Mat df = immersion_differential(domain.boundary, s, z, domain.tol);
  const Vec fdot = boundary_velocity(domain, s, z);
  const auto d = df.rows();
  const auto k = df.cols();
  Mat out = Mat::Zero(1 + d, 1 + k);
  out(0, 0) = 1.0;
  out.block(1, 0, d, 1) = fdot;
  out.block(1, 1, d, k) = df;
  return out;
}

struct SpaceTimeJacobian {
  double direct = 0.0;    // sqrt(det(dF^T dF))
  double factored = 0.0;  // sqrt(1 + V^2) J_{f_s}
};

inline SpaceTimeJacobian spacetime_jacobian(const EvolvingDomain& domain,
                                            double s, const ParamPoint& z) {
  SpaceTimeJacobian out;
  out.direct = immersion_jacobian(spacetime_differential(domain, s, z),
                                  domain.tol.rank_tol);
  const BoundaryGeometry geo = boundary_geometry(domain, s, z);
  out.factored =
      std::sqrt(1.0 + geo.normal_velocity * geo.normal_velocity) * geo.jacobian;
  return out;
}

namespace detail {

inline void require_subwindow(const EvolvingDomain& domain, double t0,
                              double t) {
  if (!(t0 < t)) throw ConfigError("space-time window needs t0 < t");
  if (!domain.window.contains(t0) || !domain.window.contains(t)) {
    throw WindowExceeded("space-time window leaves the scenario window");
  }
}

// Parameter boxes with a time axis (t0, t) prepended.
inline std::vector<Box> with_time_axis(const std::vector<Box>& boxes,
                                       double t0, double t) {
  std::vector<Box> out;
  out.reserve(boxes.size());
  for (const Box& b : boxes) {
    Vec lo(1 + b.dim()), hi(1 + b.dim());
    lo[0] = t0;
    hi[0] = t;
    lo.tail(b.dim()) = b.lower;
    hi.tail(b.dim()) = b.upper;
    Box tb(lo, hi);
    for (int i = 0; i < b.dim(); ++i) {
      tb.periodic[static_cast<std::size_t>(i + 1)] =
          b.periodic[static_cast<std::size_t>(i)];
      tb.panels[static_cast<std::size_t>(i + 1)] =
          b.panels[static_cast<std::size_t>(i)];
    }
    out.push_back(std::move(tb));
  }
  return out;
}

inline void split_time(const ParamPoint& q, double& s, ParamPoint& z) {
  s = q.z[0];
  z.chart = q.chart;
  z.z = q.z.tail(q.z.size() - 1);
}

}  // namespace detail

// Integral over the lateral side S by the area formula through F, using the
// Jacobian of the full space-time differential.
inline IntegralEstimate lateral_integral_direct(const EvolvingDomain& domain,
                                                double t0, double t,
                                                const ScalarField& field,
                                                const QuadratureRule& rule) {
  detail::require_gauss(rule, "lateral_integral_direct");
  detail::require_subwindow(domain, t0, t);
  const auto boxes = detail::with_time_axis(domain.boundary.charts, t0, t);
  return detail::gauss_estimate(boxes, rule, [&](const ParamPoint& q) {
    double s;
    ParamPoint z;
    detail::split_time(q, s, z);
    const double jac = immersion_jacobian(spacetime_differential(domain, s, z),
                                          domain.tol.rank_tol);
    return field_value(field, s, immersion_point(domain.boundary, s, z)) * jac;
  });
}

// The same integral as a time integral of boundary integrals weighted by
// sqrt(1 + V^2).
inline IntegralEstimate lateral_integral_iterated(const EvolvingDomain& domain,
                                                  double t0, double t,
                                                  const ScalarField& field,
                                                  const QuadratureRule& rule) {
  detail::require_gauss(rule, "lateral_integral_iterated");
  detail::require_subwindow(domain, t0, t);
  auto at_order = [&](int order) {
    const GaussRule1D times = composite_gauss(gauss_legendre(order), t0, t, 1);
    const QuadratureRule inner = QuadratureRule::gauss(order, false);
    double total = 0.0;
    for (std::size_t i = 0; i < times.nodes.size(); ++i) {
      const double s = times.nodes[i];
      const auto slice = integrate_boundary(
          domain, s,
          [&](const BoundarySample& b) {
            const double v = b.normal_velocity();
            return field_value(field, s, b.point()) * std::sqrt(1.0 + v * v);
          },
          inner);
      total += times.weights[i] * slice.value;
    }
    return total;
  };
  IntegralEstimate est;
  est.value = at_order(rule.order());
  if (rule.estimate_error && rule.order() > 1) {
    est.error_indicator = std::abs(est.value - at_order(rule.order() - 1));
  }
  return est;
}

struct DivergenceReport {
  double volume = 0.0;   // integral of div_E a over W
  double bottom = 0.0;   // flux through B (normal -t)
  double lateral = 0.0;  // flux through S (normal w)
  double top = 0.0;      // flux through T (normal +t)

  double surface() const { return bottom + lateral + top; }
  double residual() const { return std::abs(volume - surface()); }
};

// Intrinsic divergence of a tangent field at G(s, u) = (s, B(s, u)):
// tr(g^{-1} E^T Da E) with E = dG and g = E^T E.
inline double spacetime_divergence(const Mat& frame, const Mat& ambient_jacobian) {
  const Mat gram = frame.transpose() * frame;
  const Mat inner = frame.transpose() * ambient_jacobian * frame;
  return gram.ldlt().solve(inner).trace();
}

inline DivergenceReport divergence_theorem_residual(
    const EvolvingDomain& domain, double t0, double t,
    const SpaceTimeField& afield, const QuadratureRule& rule) {
  detail::require_gauss(rule, "divergence_theorem_residual");
  detail::require_subwindow(domain, t0, t);
  if (!domain.bulk) {
    throw NoIntegrationPath("divergence check needs a bulk parametrization");
  }
  if (!afield.value || !afield.jacobian) {
    throw ConfigError("divergence check needs an analytic field Jacobian");
  }
  const BulkMap& bulk = *domain.bulk;
  const QuadratureRule r = rule.without_estimate();
  DivergenceReport rep;

  const auto volume_boxes = detail::with_time_axis(bulk.boxes, t0, t);
  rep.volume = detail::gauss_over_boxes(volume_boxes, r.order(), [&](const ParamPoint& q) {
    double s;
    ParamPoint u;
    detail::split_time(q, s, u);
    const Vec x = bulk_point(bulk, s, u);
    const Mat db = bulk_differential(bulk, s, u, domain.tol);
    const auto d = db.rows();
    const auto m = db.cols();
    Mat frame = Mat::Zero(1 + d, 1 + m);
    frame(0, 0) = 1.0;
    frame.block(1, 0, d, 1) = bulk_velocity(bulk, s, u, domain.time_step());
    frame.block(1, 1, d, m) = db;
    const Mat da = require_finite(
        detail::invoke_user("field jacobian", afield.jacobian, s, x),
        "field jacobian");
    return spacetime_divergence(frame, da) * gram_jacobian(frame);
  });

  auto time_component = [&](double s) {
    return [&, s](const Vec& x) {
      return require_finite(detail::invoke_user("field", afield.value, s, x),
                            "field")[0];
    };
  };
  rep.bottom = -integrate_domain_fn(domain, t0, time_component(t0), r).value;
  rep.top = integrate_domain_fn(domain, t, time_component(t), r).value;

  const auto side_boxes = detail::with_time_axis(domain.boundary.charts, t0, t);
  rep.lateral = detail::gauss_over_boxes(side_boxes, r.order(), [&](const ParamPoint& q) {
    double s;
    ParamPoint z;
    detail::split_time(q, s, z);
    const BoundaryGeometry geo = boundary_geometry(domain, s, z);
    const Vec w = lateral_normal_from(geo.normal_velocity, geo.normal);
    const Vec a = require_finite(
        detail::invoke_user("field", afield.value, s, geo.point), "field");
    const double jac = immersion_jacobian(spacetime_differential(domain, s, z),
                                          domain.tol.rank_tol);
    return a.dot(w) * jac;
  });
  return rep;
}

}  // namespace evolve
