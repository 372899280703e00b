#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "evolve/quadrature.hpp"
#include "evolve/scenarios.hpp"

namespace evolve {

struct TransportReport {
  std::string scenario;
  std::string field;
  double t = 0.0;
  double h = 0.0;
  std::string rule = "gauss";
  long order = 0;  // points per axis, or samples for Monte Carlo
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs_bulk = std::numeric_limits<double>::quiet_NaN();
  double rhs_boundary = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double abs_residual = std::numeric_limits<double>::quiet_NaN();
  double rel_residual = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool passed = false;
  double lhs_error_indicator = 0.0;
  double bulk_error_indicator = 0.0;
  double boundary_error_indicator = 0.0;
  std::optional<double> reference_lhs;
  std::optional<double> convergence_slope;
  std::string failure;  // empty unless a component raised
};

namespace detail {

inline void require_step(const TimeWindow& window, double t, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  if (!window.contains(t - h) || !window.contains(t + h)) {
    throw WindowExceeded("[t - h, t + h] leaves the scenario window");
  }
}

// Rule used for boundary integrals: Monte Carlo applies only to the bulk.
inline QuadratureRule boundary_rule(const QuadratureRule& rule) {
  return rule.is_gauss() ? rule : QuadratureRule::gauss(16);
}

}  // namespace detail

// Central difference [I(t+h) - I(t-h)] / (2h) of I(s) = integral of phi(s, .)
// over O_s. The error indicator is propagated from the two integrals.
inline IntegralEstimate lhs_estimate(const Scenario& sc, const ScalarField& field,
                                     double t, double h, const QuadratureRule& rule) {
  detail::require_step(sc.time_window(), t, h);
  const IntegralEstimate up = integrate_domain(sc.domain, t + h, field, rule);
  const IntegralEstimate down = integrate_domain(sc.domain, t - h, field, rule);
  return {(up.value - down.value) / (2.0 * h),
          (up.error_indicator + down.error_indicator) / (2.0 * h)};
}

inline double lhs_time_derivative(const Scenario& sc, const std::string& field,
                                  double t, double h, const QuadratureRule& rule) {
  return lhs_estimate(sc, sc.field(field), t, h, rule).value;
}

struct TransportRhs {
  IntegralEstimate bulk;      // integral of phi' over O_t
  IntegralEstimate boundary;  // integral of phi V over the boundary

  double total() const { return bulk.value + boundary.value; }
};

inline TransportRhs rhs_transport(const Scenario& sc, const ScalarField& field,
                                  double t, const QuadratureRule& rule) {
  if (!sc.time_window().contains(t)) {
    throw WindowExceeded("evaluation time outside the scenario window");
  }
  const EvolvingDomain& dom = sc.domain;
  const double step = dom.time_step();
  TransportRhs out;
  out.bulk = integrate_domain_fn(
      dom, t, [&](const Vec& x) { return field_time_partial(field, t, x, step); }, rule);
  out.boundary = integrate_boundary(
      dom, t,
      [&](const BoundarySample& b) {
        return field_value(field, t, b.point()) * b.normal_velocity();
      },
      detail::boundary_rule(rule));
  return out;
}

inline TransportRhs rhs_transport(const Scenario& sc, const std::string& field,
                                  double t, const QuadratureRule& rule) {
  return rhs_transport(sc, sc.field(field), t, rule);
}

// Both sides of the transport identity for an explicit field. Library errors
// end up in report.failure.
inline TransportReport verify_transport(const Scenario& sc, const std::string& label,
                                        const ScalarField& field, double t, double h,
                                        const QuadratureRule& rule,
                                        std::optional<double> tolerance = {}) {
  TransportReport rep;
  rep.scenario = sc.name;
  rep.field = label;
  rep.t = t;
  rep.h = h;
  rep.rule = rule.is_gauss() ? "gauss" : "monte_carlo";
  rep.order = rule.order_or_count;
  rep.tolerance = tolerance.value_or(sc.tolerance);
  try {
    const IntegralEstimate lhs = lhs_estimate(sc, field, t, h, rule);
    const TransportRhs rhs = rhs_transport(sc, field, t, rule);
    rep.lhs = lhs.value;
    rep.lhs_error_indicator = lhs.error_indicator;
    rep.rhs_bulk = rhs.bulk.value;
    rep.rhs_boundary = rhs.boundary.value;
    rep.bulk_error_indicator = rhs.bulk.error_indicator;
    rep.boundary_error_indicator = rhs.boundary.error_indicator;
    rep.rhs = rhs.total();
    rep.abs_residual = std::abs(rep.lhs - rep.rhs);
    rep.rel_residual = rep.abs_residual / std::max(1.0, std::abs(rep.lhs));
    rep.passed = rep.rel_residual < rep.tolerance;
    if (const ReferenceValues* ref = sc.reference_for(label); ref && ref->derivative) {
      rep.reference_lhs = ref->derivative(t);
    }
  } catch (const Error& e) {
    rep.failure = e.what();
    rep.passed = false;
  }
  return rep;
}

inline TransportReport verify_transport(const Scenario& sc, const std::string& field,
                                        double t, double h, const QuadratureRule& rule,
                                        std::optional<double> tolerance = {}) {
  const auto it = sc.fields.find(field);
  if (it == sc.fields.end()) {
    TransportReport rep;
    rep.scenario = sc.name;
    rep.field = field;
    rep.t = t;
    rep.h = h;
    rep.tolerance = tolerance.value_or(sc.tolerance);
    rep.failure = "scenario " + sc.name + " has no field '" + field + "'";
    return rep;
  }
  return verify_transport(sc, field, it->second, t, h, rule, tolerance);
}

// ---------------------------------------------------------------------------
// One-dimensional special case: O_t = (a(t), b(t)) on the line.

struct IntervalMotion {
  scenarios::Motion a;
  scenarios::Motion b;
};

struct LeibnizReport {
  double t = 0.0;
  double h = 0.0;
  double lhs = 0.0;
  double machinery_bulk = 0.0;
  double machinery_boundary = 0.0;  // general boundary integral of phi V
  double endpoint_formula = 0.0;    // phi(b) b' - phi(a) a'
  double endpoint_gap = 0.0;        // |machinery_boundary - endpoint_formula|
  double rel_residual = 0.0;        // lhs against bulk + boundary
  bool passed = false;
};

inline Scenario interval_scenario(const IntervalMotion& motion, double t, double h) {
  const double span = 2.0 * h;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double s : {t - span, t, t + span}) {
    lo = std::min({lo, motion.a.value(s), motion.b.value(s)});
    hi = std::max({hi, motion.a.value(s), motion.b.value(s)});
  }
  const double pad = 1.0 + (hi - lo);
  Scenario sc = scenarios::moving_interval("leibniz_instance", "interval (a(t), b(t))",
                                           motion.a, motion.b, {t - span, t + span},
                                           Box::interval(lo - pad, hi + pad));
  sc.domain.feature_size = motion.b.value(t) - motion.a.value(t);
  return sc;
}

inline LeibnizReport leibniz_check(const IntervalMotion& motion, const ScalarField& field,
                                   double t, double h,
                                   const QuadratureRule& rule = QuadratureRule::gauss(16)) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const double a = motion.a.value(t), b = motion.b.value(t);
  if (!(b - a >= 10.0 * h)) {
    throw DegenerateInterval("b - a = " + std::to_string(b - a) + " is below 10 h");
  }
  const Scenario sc = interval_scenario(motion, t, h);
  LeibnizReport rep;
  rep.t = t;
  rep.h = h;
  rep.lhs = lhs_estimate(sc, field, t, h, rule).value;
  const TransportRhs rhs = rhs_transport(sc, field, t, rule);
  rep.machinery_bulk = rhs.bulk.value;
  rep.machinery_boundary = rhs.boundary.value;
  rep.endpoint_formula = field_value(field, t, Vec::Constant(1, b)) * motion.b.rate(t) -
                         field_value(field, t, Vec::Constant(1, a)) * motion.a.rate(t);
  rep.endpoint_gap = std::abs(rep.machinery_boundary - rep.endpoint_formula);
  rep.rel_residual = std::abs(rep.lhs - rhs.total()) / std::max(1.0, std::abs(rep.lhs));
  rep.passed = rep.endpoint_gap < 1e-8 && rep.rel_residual < 1e-6;
  return rep;
}

// The flat three-dimensional case, where V is the normal component of the
// boundary velocity.
inline TransportReport reynolds_check(const Scenario& sc, const std::string& field,
                                      double t, double h, const QuadratureRule& rule) {
  const ManifoldChart& m = sc.domain.manifold;
  if (!(m.flat() && m.ambient_dim == 3)) {
    throw ConfigError("reynolds_check needs an open subset of R^3");
  }
  return verify_transport(sc, field, t, h, rule);
}

// ---------------------------------------------------------------------------
// Convergence sweeps.

enum class SweepParameter { fd_step, quad_order, monte_carlo };

inline const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::fd_step: return "h";
    case SweepParameter::quad_order: return "order";
    case SweepParameter::monte_carlo: return "mc";
  }
  return "?";
}

inline SweepParameter parse_sweep_parameter(const std::string& s) {
  if (s == "h" || s == "fd_step") return SweepParameter::fd_step;
  if (s == "order" || s == "quad_order") return SweepParameter::quad_order;
  if (s == "mc" || s == "monte_carlo") return SweepParameter::monte_carlo;
  throw ConfigError("unknown sweep parameter '" + s + "'");
}

struct SweepPoint {
  double value = 0.0;  // grid value (h, order or sample count)
  double error = 0.0;
  std::optional<TransportReport> report;
};

struct SweepResult {
  std::string scenario;
  std::string field;
  double t = 0.0;
  SweepParameter parameter = SweepParameter::fd_step;
  std::string error_metric;
  std::vector<SweepPoint> points;
  double slope = std::numeric_limits<double>::quiet_NaN();
  bool monotone = true;  // errors never increase along the grid (with slack)
};

struct SweepOptions {
  int order = 16;
  int replicates = 16;
  std::uint64_t seed = 1;
  double h = 0.0;  // 0 selects the scenario default
};

// Least-squares slope of log10(error) against log10(value); non-positive
// errors are dropped.
inline double log_log_slope(const std::vector<SweepPoint>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : pts) {
    if (!(p.error > 0.0) || !(p.value > 0.0)) continue;
    const double x = std::log10(p.value), y = std::log10(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline SweepResult run_sweep(const Scenario& sc, const std::string& field, double t,
                             SweepParameter parameter, const std::vector<double>& grid,
                             const SweepOptions& opt = {}) {
  if (grid.size() < 4) throw ConfigError("a sweep needs at least 4 grid values");
  const ScalarField& phi = sc.field(field);
  const ReferenceValues* ref = sc.reference_for(field);
  const double h = opt.h > 0.0 ? opt.h : sc.default_h();

  SweepResult res;
  res.scenario = sc.name;
  res.field = field;
  res.t = t;
  res.parameter = parameter;

  auto reference_integral = [&](int fallback_order) {
    if (ref && ref->integral) return ref->integral(t);
    return integrate_domain(sc.domain, t, phi, QuadratureRule::gauss(fallback_order, false)).value;
  };

  switch (parameter) {
    case SweepParameter::fd_step: {
      const bool closed = ref && ref->derivative;
      res.error_metric = closed ? "|lhs - closed-form derivative|" : "|lhs - rhs|";
      for (double step : grid) {
        SweepPoint p;
        p.value = step;
        p.report = verify_transport(sc, field, t, step, QuadratureRule::gauss(opt.order));
        if (!p.report->failure.empty()) throw Error(p.report->failure);
        p.error = closed ? std::abs(p.report->lhs - ref->derivative(t))
                         : p.report->abs_residual;
        res.points.push_back(std::move(p));
      }
      break;
    }
    case SweepParameter::quad_order: {
      int top = 0;
      for (double n : grid) top = std::max(top, static_cast<int>(n));
      const double exact = reference_integral(2 * top);
      res.error_metric = "|I_n(t) - I(t)|";
      for (double n : grid) {
        SweepPoint p;
        p.value = n;
        const auto rule = QuadratureRule::gauss(static_cast<int>(n), false);
        p.error = std::abs(integrate_domain(sc.domain, t, phi, rule).value - exact);
        p.report = verify_transport(sc, field, t, h, rule);
        res.points.push_back(std::move(p));
      }
      break;
    }
    case SweepParameter::monte_carlo: {
      const double exact = reference_integral(32);
      res.error_metric = "rms over replicates of |I_mc(t) - I(t)|";
      for (double n : grid) {
        SweepPoint p;
        p.value = n;
        double sq = 0.0;
        for (int r = 0; r < opt.replicates; ++r) {
          const auto rule = QuadratureRule::monte_carlo(
              static_cast<long>(n), opt.seed + static_cast<std::uint64_t>(r));
          const double e = integrate_domain(sc.domain, t, phi, rule).value - exact;
          sq += e * e;
        }
        p.error = std::sqrt(sq / opt.replicates);
        res.points.push_back(std::move(p));
      }
      break;
    }
  }

  res.slope = log_log_slope(res.points);
  // rounding across a few thousand nodes, well above 4 eps
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(reference_integral(32)));
  for (std::size_t i = 1; i < res.points.size(); ++i) {
    if (res.points[i].error > res.points[i - 1].error + slack) res.monotone = false;
  }
  for (auto& p : res.points) {
    if (p.report) p.report->convergence_slope = res.slope;
  }
  return res;
}

}  // namespace evolve
