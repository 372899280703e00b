#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evolve/spacetime.hpp"
#include "evolve/transport.hpp"
#include "evolve/validate.hpp"

namespace evolve {

// A named scalar check: value against reference, error against tolerance.
struct CheckRecord {
  std::string check;
  std::string scenario;
  std::string detail;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteOptions {
  int order = 16;
  double h = 0.0;  // 0 selects each scenario's default
  int times = 5;
  int validation_samples = 200;
  int lateral_samples = 1000;
  int reparam_samples = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> scenarios;  // empty runs the whole registry
  std::string field;                   // empty runs every field
  std::map<std::string, double> tolerance_overrides;  // per scenario
  double tolerance = 0.0;              // > 0 overrides every scenario
};

struct SuiteResult {
  std::vector<TransportReport> transport;
  std::vector<std::pair<std::string, ValidationReport>> validation;
  std::vector<CheckRecord> checks;

  bool passed() const {
    return std::all_of(transport.begin(), transport.end(),
                       [](const TransportReport& r) { return r.passed; }) &&
           std::all_of(validation.begin(), validation.end(),
                       [](const auto& v) { return v.second.passed(); }) &&
           std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.passed; });
  }
};

namespace detail {

// Uniform random lateral nodes (s, z) with s inside the window and z away from
// declared exceptional preimages.
inline std::vector<std::pair<double, ParamPoint>> lateral_nodes(
    const EvolvingDomain& dom, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, ParamPoint>> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    const double s = dom.window.lower + dom.window.length() * (0.01 + 0.98 * unit(rng));
    const ParamPoint z = sample_param(dom.boundary.charts, rng);
    if (near_exceptional(dom.boundary, s, z, 1e-3)) continue;
    out.emplace_back(s, z);
  }
  return out;
}

inline CheckRecord make_check(std::string check, std::string scenario, std::string detail,
                              double value, double reference, double error,
                              double tolerance) {
  CheckRecord c{std::move(check), std::move(scenario), std::move(detail),
                value, reference, error, tolerance, false};
  c.passed = error < tolerance;
  return c;
}

}  // namespace detail

// Pointwise space-time properties at random lateral nodes: the characterization
// of the lateral normal and the two Jacobian routes.
inline std::vector<CheckRecord> lateral_checks(const Scenario& sc, int samples,
                                               std::uint64_t seed) {
  const auto nodes = detail::lateral_nodes(sc.domain, samples, seed);
  double unit = 0, tangency = 0, ortho = 0, jac = 0;
  double exterior = std::numeric_limits<double>::infinity();
  for (const auto& [s, z] : nodes) {
    const LateralNormalDiagnostics d = lateral_normal_diagnostics(sc.domain, s, z);
    unit = std::max(unit, d.unit_error);
    tangency = std::max(tangency, std::abs(d.tangency));
    ortho = std::max(ortho, d.boundary_orthogonality);
    exterior = std::min(exterior, d.exterior);
    const SpaceTimeJacobian j = spacetime_jacobian(sc.domain, s, z);
    jac = std::max(jac, std::abs(j.direct - j.factored) / j.direct);
  }
  const std::string n = std::to_string(nodes.size()) + " nodes";
  std::vector<CheckRecord> out;
  out.push_back(detail::make_check("lateral_normal_unit", sc.name, n, unit, 0.0, unit, 1e-10));
  out.push_back(detail::make_check("lateral_normal_tangency", sc.name, n, tangency, 0.0, tangency, 1e-8));
  CheckRecord ext = detail::make_check("lateral_normal_exterior", sc.name, n + ", min w.n",
                                       exterior, 0.0, 0.0, 1.0);
  ext.passed = exterior > 0.0;
  out.push_back(ext);
  out.push_back(detail::make_check("lateral_normal_orthogonality", sc.name, n, ortho, 0.0, ortho, 1e-8));
  out.push_back(detail::make_check("jacobian_factorization", sc.name, n, jac, 0.0, jac, 1e-8));
  return out;
}

// The two routes to the lateral integral over the middle half of the window.
inline CheckRecord lateral_integral_check(const Scenario& sc, const std::string& field,
                                          int order) {
  const TimeWindow& w = sc.time_window();
  const double t0 = w.lower + 0.25 * w.length(), t1 = w.lower + 0.75 * w.length();
  const auto rule = QuadratureRule::gauss(order, false);
  const double direct = lateral_integral_direct(sc.domain, t0, t1, sc.field(field), rule).value;
  const double iterated = lateral_integral_iterated(sc.domain, t0, t1, sc.field(field), rule).value;
  const double err = std::abs(direct - iterated) / (1.0 + std::abs(direct));
  return detail::make_check("lateral_integral", sc.name, field, iterated, direct, err, 1e-8);
}

inline CheckRecord divergence_check(const Scenario& sc, const std::string& vfield,
                                    int order) {
  const TimeWindow& w = sc.time_window();
  const double t0 = w.lower + 0.25 * w.length(), t1 = w.lower + 0.75 * w.length();
  const DivergenceReport rep = divergence_theorem_residual(
      sc.domain, t0, t1, sc.vector_fields.at(vfield), QuadratureRule::gauss(order));
  return detail::make_check("divergence_theorem", sc.name, vfield, rep.volume, rep.surface(),
                            rep.residual(), 1e-6);
}

inline CheckRecord reparametrization_check(const Scenario& sc, double t, int samples,
                                           std::uint64_t seed) {
  const double gap = reparametrization_gap(sc.domain, *sc.paired, t, samples, seed);
  return detail::make_check("reparametrization_gap", sc.name, "t=" + std::to_string(t),
                            gap, 0.0, gap, 1e-6);
}

inline CheckRecord leibniz_record() {
  const IntervalMotion motion{scenarios::linear(0.0, 1.0),
                              {[](double t) { return 2.0 + t * t; },
                               [](double t) { return 2.0 * t; }}};
  const LeibnizReport rep = leibniz_check(motion, fields::coordinate(0), 1.0, 1e-4);
  CheckRecord c = detail::make_check("leibniz_endpoint_formula", "leibniz_instance",
                                     "a=t, b=2+t^2, phi=x, t=1", rep.machinery_boundary,
                                     5.0, std::abs(rep.machinery_boundary - 5.0), 1e-8);
  c.passed = c.passed && rep.passed;
  return c;
}

inline CheckRecord reynolds_record(int order) {
  const Scenario ball = scenarios::expanding_ball();
  const TransportReport rep =
      reynolds_check(ball, "one", 0.0, ball.default_h(), QuadratureRule::gauss(order));
  const double target = 4.0 * std::numbers::pi;
  CheckRecord c = detail::make_check("reynolds_expanding_ball", ball.name, "phi=1, t=0",
                                     rep.rhs, target, std::abs(rep.rhs - target), 1e-6);
  c.passed = c.passed && rep.passed && std::abs(rep.lhs - target) < 1e-6;
  return c;
}

// Everything: transport reports at interior times for every scenario and
// field, scene validation, and the space-time and special-case checks.
inline SuiteResult run_all(const SuiteOptions& opt = {}) {
  SuiteResult out;
  const auto names = opt.scenarios.empty() ? scenarios::names() : opt.scenarios;
  for (const auto& name : names) {
    const Scenario sc = scenarios::make(name);
    const double h = opt.h > 0.0 ? opt.h : sc.default_h();
    double tol = sc.tolerance;
    if (auto it = opt.tolerance_overrides.find(name); it != opt.tolerance_overrides.end()) {
      tol = it->second;
    }
    if (opt.tolerance > 0.0) tol = opt.tolerance;
    const auto rule = QuadratureRule::gauss(opt.order);
    const auto times = sc.time_window().interior_times(opt.times);

    for (const auto& [key, field] : sc.fields) {
      if (!opt.field.empty() && key != opt.field) continue;
      for (double t : times) {
        out.transport.push_back(verify_transport(sc, key, field, t, h, rule, tol));
      }
    }

    ValidationOptions vopt;
    vopt.seed = opt.seed;
    vopt.fields = &sc.fields;
    for (double t : times) {
      out.validation.emplace_back(name, validate_scene(sc.domain, t, opt.validation_samples, vopt));
    }

    for (auto& c : lateral_checks(sc, opt.lateral_samples, opt.seed)) {
      out.checks.push_back(std::move(c));
    }
    for (const auto& [key, field] : sc.fields) {
      out.checks.push_back(lateral_integral_check(sc, key, opt.order));
    }
    if (sc.smooth) {
      for (const auto& [key, a] : sc.vector_fields) {
        out.checks.push_back(divergence_check(sc, key, opt.order));
      }
    }
    if (sc.paired) {
      for (double t : times) {
        out.checks.push_back(reparametrization_check(sc, t, opt.reparam_samples, opt.seed));
      }
    }
  }
  out.checks.push_back(leibniz_record());
  out.checks.push_back(reynolds_record(opt.order));
  return out;
}

}  // namespace evolve
