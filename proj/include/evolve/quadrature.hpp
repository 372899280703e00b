#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "evolve/geometry.hpp"

namespace evolve {

struct GaussRule1D {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule1D gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss order must be >= 1");
  GaussRule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // P_n'(x) from the three-term relation
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

// Composite Gauss nodes and weights on [lo, hi] split into equal panels.
inline GaussRule1D composite_gauss(const GaussRule1D& base, double lo,
                                   double hi, int panels) {
  GaussRule1D out;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      out.nodes.push_back(a + 0.5 * width * (base.nodes[i] + 1.0));
      out.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return out;
}

// Visits every tensor node of the box in lexicographic order (first axis
// slowest). fn(z, weight).
template <typename Fn>
void for_each_tensor_node(const Box& box, const GaussRule1D& base, Fn&& fn) {
  const int k = box.dim();
  if (k == 0) {
    fn(Vec(0), 1.0);
    return;
  }
  std::vector<GaussRule1D> axes;
  axes.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    axes.push_back(composite_gauss(base, box.lower[i], box.upper[i],
                                   box.panels[static_cast<std::size_t>(i)]));
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  Vec z(k);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < k; ++i) {
      const auto& ax = axes[static_cast<std::size_t>(i)];
      z[i] = ax.nodes[idx[static_cast<std::size_t>(i)]];
      w *= ax.weights[idx[static_cast<std::size_t>(i)]];
    }
    fn(z, w);
    int axis = k - 1;
    while (axis >= 0) {
      auto& ix = idx[static_cast<std::size_t>(axis)];
      if (++ix < axes[static_cast<std::size_t>(axis)].nodes.size()) break;
      ix = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

struct QuadratureRule {
  enum class Kind { gauss_tensor, monte_carlo };

  Kind kind = Kind::gauss_tensor;
  long order_or_count = 16;
  std::uint64_t seed = 1;
  // Whether to spend a second pass on the error indicator (gauss only).
  bool estimate_error = true;

  static QuadratureRule gauss(int order, bool estimate = true) {
    return {Kind::gauss_tensor, order, 1, estimate};
  }
  static QuadratureRule monte_carlo(long count, std::uint64_t seed) {
    return {Kind::monte_carlo, count, seed, true};
  }

  bool is_gauss() const { return kind == Kind::gauss_tensor; }
  int order() const { return static_cast<int>(order_or_count); }

  QuadratureRule without_estimate() const {
    QuadratureRule r = *this;
    r.estimate_error = false;
    return r;
  }
};

struct IntegralEstimate {
  double value = 0.0;
  // |Q_n - Q_{n-1}| for gauss rules, standard error for Monte Carlo. A
  // heuristic, not a bound.
  double error_indicator = 0.0;
};

namespace detail {

inline void require_gauss(const QuadratureRule& rule, const char* what) {
  if (!rule.is_gauss()) {
    throw ConfigError(std::string(what) + " requires a gauss_tensor rule");
  }
}

// Evaluates fn at z; if the point is rank deficient, retries once with the
// node nudged 1e-7 of the box width toward the box center.
template <typename Fn>
double eval_with_retry(const Box& box, const Vec& z, Fn&& fn) {
  try {
    return fn(z);
  } catch (const RankDeficient&) {
    Vec shifted = z;
    const Vec mid = box.center();
    for (int i = 0; i < box.dim(); ++i) {
      const double nudge = 1e-7 * (box.upper[i] - box.lower[i]);
      shifted[i] += z[i] < mid[i] ? nudge : -nudge;
    }
    return fn(shifted);
  }
}

// Sum of a node integrand over every box of a multi-box parameter manifold.
template <typename Fn>
double gauss_over_boxes(const std::vector<Box>& boxes, int order, Fn&& fn) {
  const GaussRule1D base = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t c = 0; c < boxes.size(); ++c) {
    const Box& box = boxes[c];
    for_each_tensor_node(box, base, [&](const Vec& z, double w) {
      total += w * eval_with_retry(box, z, [&](const Vec& zz) {
        return fn(ParamPoint{c, zz});
      });
    });
  }
  return total;
}

// Runs a gauss sum at the rule's order and, when requested, at order - 1.
template <typename Fn>
IntegralEstimate gauss_estimate(const std::vector<Box>& boxes,
                                const QuadratureRule& rule, Fn&& fn) {
  IntegralEstimate est;
  est.value = gauss_over_boxes(boxes, rule.order(), fn);
  if (rule.estimate_error && rule.order() > 1) {
    est.error_indicator =
        std::abs(est.value - gauss_over_boxes(boxes, rule.order() - 1, fn));
  }
  return est;
}

}  // namespace detail

// Area formula over an immersed boundary at fixed t:
//   sum_i w_i phi(t, f(t, z_i)) J_f(z_i).
inline IntegralEstimate integrate_immersed(const BoundaryImmersion& imm,
                                           double t, const ScalarField& field,
                                           const QuadratureRule& rule,
                                           const Tolerances& tol = {}) {
  detail::require_gauss(rule, "integrate_immersed");
  return detail::gauss_estimate(imm.charts, rule, [&](const ParamPoint& z) {
    const double jac =
        immersion_jacobian(immersion_differential(imm, t, z, tol), tol.rank_tol);
    return field_value(field, t, immersion_point(imm, t, z)) * jac;
  });
}

// Integral of g(x) over O_t. Gauss rules go through the bulk parametrization;
// Monte Carlo samples the manifold chart with the membership indicator.
inline IntegralEstimate integrate_domain_fn(
    const EvolvingDomain& domain, double t,
    const std::function<double(const Vec&)>& g, const QuadratureRule& rule) {
  if (rule.is_gauss()) {
    if (!domain.bulk) {
      throw NoIntegrationPath("gauss rule needs a bulk parametrization");
    }
    // Bulk maps may degenerate on box edges (polar centers, pinches); those
    // are coordinate singularities, so no rank check here.
    const BulkMap& bulk = *domain.bulk;
    return detail::gauss_estimate(bulk.boxes, rule, [&](const ParamPoint& u) {
      const double jac = gram_jacobian(bulk_differential(bulk, t, u, domain.tol));
      return g(bulk_point(bulk, t, u)) * jac;
    });
  }

  if (!domain.membership) {
    throw NoIntegrationPath("Monte Carlo needs a membership predicate");
  }
  if (rule.order_or_count < 2) throw ConfigError("Monte Carlo needs >= 2 samples");
  const Box& box = domain.manifold.domain;
  std::mt19937_64 rng(rule.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double mean = 0.0, m2 = 0.0;
  Vec frac(box.dim());
  for (long i = 0; i < rule.order_or_count; ++i) {
    for (int a = 0; a < box.dim(); ++a) frac[a] = unit(rng);
    const Vec u = box.at(frac);
    const Vec x = chart_point(domain.manifold, u);
    double sample = 0.0;
    if (is_inside(domain, t, x)) {
      sample = g(x) * gram_jacobian(chart_jacobian(domain.manifold, u, domain.tol));
    }
    const double delta = sample - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (sample - mean);
  }
  const double n = static_cast<double>(rule.order_or_count);
  IntegralEstimate est;
  est.value = box.volume() * mean;
  est.error_indicator = box.volume() * std::sqrt(m2 / (n - 1.0) / n);
  return est;
}

inline IntegralEstimate integrate_domain(const EvolvingDomain& domain, double t,
                                         const ScalarField& field,
                                         const QuadratureRule& rule) {
  return integrate_domain_fn(
      domain, t, [&](const Vec& x) { return field_value(field, t, x); }, rule);
}

// What a boundary integrand sees at each node.
struct BoundarySample {
  double t = 0.0;
  ParamPoint z;
  const BoundaryGeometry* geometry = nullptr;

  const Vec& point() const { return geometry->point; }
  const Vec& normal() const { return geometry->normal; }
  const Vec& velocity() const { return geometry->velocity; }
  double normal_velocity() const { return geometry->normal_velocity; }
};

using BoundaryIntegrand = std::function<double(const BoundarySample&)>;

// Area-formula quadrature of integrand(t, z, p, n, V) over the boundary. For
// m = 1 the boundary charts are points and this is a finite sum whose
// orientation signs come from the exterior normal.
inline IntegralEstimate integrate_boundary(const EvolvingDomain& domain,
                                           double t,
                                           const BoundaryIntegrand& integrand,
                                           const QuadratureRule& rule) {
  detail::require_gauss(rule, "integrate_boundary");
  return detail::gauss_estimate(
      domain.boundary.charts, rule, [&](const ParamPoint& z) {
        const BoundaryGeometry geo = boundary_geometry(domain, t, z);
        return integrand(BoundarySample{t, z, &geo}) * geo.jacobian;
      });
}

}  // namespace evolve
