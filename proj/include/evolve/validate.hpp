#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "evolve/geometry.hpp"

namespace evolve {

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double max_violation = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  int skipped = 0;  // samples dropped near declared exceptional preimages
};

struct ValidationReport {
  double t = 0.0;
  std::vector<ValidationCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.passed; });
  }

  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

struct ValidationOptions {
  std::uint64_t seed = 7;
  // Fields whose analytic time partials are checked against differences.
  const std::map<std::string, ScalarField>* fields = nullptr;
  double exceptional_radius = 1e-3;  // fraction of the chart diameter
};

namespace detail {

class CheckBuilder {
 public:
  CheckBuilder(std::string name, double tolerance) {
    check_.name = std::move(name);
    check_.tolerance = tolerance;
  }

  // A sample with the given violation; it fails when violation > tolerance.
  void observe(double violation) {
    ++check_.samples;
    if (!(violation <= check_.tolerance)) check_.passed = false;
    if (std::isnan(violation)) {
      check_.max_violation = violation;
    } else if (!std::isnan(check_.max_violation)) {
      check_.max_violation = std::max(check_.max_violation, violation);
    }
  }

  void skip() { ++check_.skipped; }

  ValidationCheck done() const { return check_; }

 private:
  ValidationCheck check_;
};

inline double smallest_singular_value(const Mat& m) {
  if (m.cols() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().minCoeff();
}

inline Vec sample_box(const Box& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec frac(box.dim());
  for (int i = 0; i < box.dim(); ++i) frac[i] = unit(rng);
  return box.at(frac);
}

inline double relative_gap(const Mat& a, const Mat& b) {
  return (a - b).norm() / (1.0 + b.norm());
}

}  // namespace detail

// Sampled checks of the scene contracts at time t. Deterministic given the
// seed; user maps that throw or return non-finite values raise
// EvaluationFailure.
inline ValidationReport validate_scene(const EvolvingDomain& domain, double t,
                                       int samples,
                                       const ValidationOptions& options = {}) {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (!domain.window.contains(t)) {
    throw WindowExceeded("validation time outside the scenario window");
  }
  using detail::CheckBuilder;
  std::mt19937_64 rng(options.seed);
  const Tolerances& tol = domain.tol;
  const ManifoldChart& chart = domain.manifold;
  const BoundaryImmersion& imm = domain.boundary;
  ValidationReport report;
  report.t = t;

  // Manifold chart: full rank and injective on the interior.
  {
    CheckBuilder rank("chart_rank", 0.0);
    CheckBuilder inj("chart_injectivity", 0.0);
    CheckBuilder jac("chart_jacobian_consistency", 1e-6);
    const double scale = std::max(chart.domain.diameter(), 1.0);
    for (int s = 0; s < samples; ++s) {
      const Vec u = detail::sample_box(chart.domain, rng);
      const Mat d = chart_jacobian(chart, u, tol);
      rank.observe(detail::smallest_singular_value(d) > tol.rank_tol ? 0.0 : 1.0);
      if (chart.embed_jacobian) {
        auto fn = [&](const Vec& v) { return chart_point(chart, v); };
        jac.observe(detail::relative_gap(
            d, detail::central_jacobian(fn, u, chart.ambient_dim,
                                        geom_step(tol, chart.domain))));
      }
      const Vec v = detail::sample_box(chart.domain, rng);
      if (chart.domain.distance(u, v) > 1e-3 * scale) {
        const double gap = (chart_point(chart, u) - chart_point(chart, v)).norm();
        inj.observe(gap > 1e-12 * scale ? 0.0 : 1.0);
      }
    }
    report.checks.push_back(rank.done());
    report.checks.push_back(inj.done());
    if (chart.embed_jacobian) report.checks.push_back(jac.done());
  }

  // Boundary immersion.
  {
    CheckBuilder on_m("boundary_on_manifold", tol.surface_tol);
    CheckBuilder rank("boundary_rank", 0.0);
    CheckBuilder c1("boundary_time_c1", 1e-3 * domain.window.length());
    CheckBuilder vel("boundary_velocity_consistency", 1e-6);
    CheckBuilder jac("boundary_jacobian_consistency", 1e-6);
    CheckBuilder orient("orientation_probe", 0.0);
    CheckBuilder unit("normal_unit", tol.unit_tol);
    CheckBuilder ortho("normal_orthogonality", tol.proj_tol);
    const double h = 1e-3 * domain.window.length();
    for (int s = 0; s < samples; ++s) {
      const ParamPoint z = detail::sample_param(imm.charts, rng);
      const Vec p = immersion_point(imm, t, z);
      on_m.observe(project_to_manifold(chart, p, tol).distance);

      auto diff_at = [&](double step) -> Vec {
        return (immersion_point(imm, t + step, z) - immersion_point(imm, t - step, z)) /
               (2.0 * step);
      };
      const Vec coarse = diff_at(h), fine = diff_at(0.5 * h);
      c1.observe((coarse - fine).norm() / (1.0 + fine.norm()));
      if (imm.time_derivative) {
        vel.observe(detail::relative_gap(immersion_velocity(imm, t, z, 0.0),
                                         diff_at(domain.time_step())));
      }

      if (detail::near_exceptional(imm, t, z, options.exceptional_radius)) {
        rank.skip();
        orient.skip();
        unit.skip();
        ortho.skip();
        continue;
      }
      const Mat df = immersion_differential(imm, t, z, tol);
      if (imm.space_jacobian && z.z.size() > 0) {
        auto fn = [&](const Vec& v) { return immersion_point(imm, t, ParamPoint{z.chart, v}); };
        jac.observe(detail::relative_gap(
            df, detail::central_jacobian(fn, z.z, static_cast<int>(p.size()),
                                         geom_step(tol, imm.charts.at(z.chart)))));
      }
      const double det = df.cols() == 0 ? 1.0 : (df.transpose() * df).determinant();
      rank.observe(det > tol.rank_tol ? 0.0 : 1.0);
      try {
        const Vec n = exterior_unit_normal(domain, t, z);
        orient.observe(0.0);
        unit.observe(std::abs(n.norm() - 1.0));
        double worst = 0.0;
        for (Eigen::Index j = 0; j < df.cols(); ++j) {
          worst = std::max(worst, std::abs(n.dot(df.col(j))) / df.col(j).norm());
        }
        ortho.observe(worst);
      } catch (const OrientationAmbiguous&) {
        orient.observe(1.0);
      }
    }
    for (const auto& b : {on_m, rank, c1}) report.checks.push_back(b.done());
    if (imm.time_derivative) report.checks.push_back(vel.done());
    if (imm.space_jacobian && imm.param_dim() > 0) report.checks.push_back(jac.done());
    for (const auto& b : {orient, unit, ortho}) report.checks.push_back(b.done());
  }

  // Seams glue chart edges to chart edges.
  if (!imm.seams.empty()) {
    CheckBuilder seam("seam_continuity", tol.surface_tol);
    for (const Seam& sm : imm.seams) {
      const Box& box_a = imm.charts.at(sm.chart_a);
      const Box& box_b = imm.charts.at(sm.chart_b);
      for (int s = 0; s < std::max(1, samples / 10); ++s) {
        Vec za = detail::sample_box(box_a, rng);
        za[sm.axis_a] = sm.upper_a ? box_a.upper[sm.axis_a] : box_a.lower[sm.axis_a];
        Vec zb = za;
        zb[sm.axis_b] = sm.upper_b ? box_b.upper[sm.axis_b] : box_b.lower[sm.axis_b];
        seam.observe((immersion_point(imm, t, {sm.chart_a, za}) -
                      immersion_point(imm, t, {sm.chart_b, zb}))
                         .norm());
      }
    }
    report.checks.push_back(seam.done());
  }

  // Bulk points lie on M and inside O_t.
  if (domain.bulk) {
    const BulkMap& bulk = *domain.bulk;
    CheckBuilder on_m("bulk_on_manifold", tol.surface_tol);
    CheckBuilder inside("bulk_membership", 0.0);
    CheckBuilder jac("bulk_jacobian_consistency", 1e-6);
    for (int s = 0; s < std::max(samples, 1000); ++s) {
      const ParamPoint u = detail::sample_param(bulk.boxes, rng);
      const Vec x = bulk_point(bulk, t, u);
      on_m.observe(project_to_manifold(chart, x, tol).distance);
      inside.observe(domain.membership && !is_inside(domain, t, x) ? 1.0 : 0.0);
      if (bulk.jacobian && s < samples) {
        auto fn = [&](const Vec& v) { return bulk_point(bulk, t, ParamPoint{u.chart, v}); };
        jac.observe(detail::relative_gap(
            bulk_differential(bulk, t, u, tol),
            detail::central_jacobian(fn, u.z, static_cast<int>(x.size()),
                                     geom_step(tol, bulk.boxes.at(u.chart)))));
      }
    }
    report.checks.push_back(on_m.done());
    report.checks.push_back(inside.done());
    if (bulk.jacobian) report.checks.push_back(jac.done());
  }

  // Analytic field partials against central differences.
  if (options.fields) {
    const double h = 1e-4 * domain.window.length();
    for (const auto& [key, field] : *options.fields) {
      if (!field.time_partial) continue;
      CheckBuilder fp("field_time_partial:" + key, 1e-6);
      for (int s = 0; s < samples; ++s) {
        const ParamPoint z = detail::sample_param(imm.charts, rng);
        const Vec x = immersion_point(imm, t, z);
        const double exact = field_time_partial(field, t, x, h);
        const double fd = (field_value(field, t + h, x) - field_value(field, t - h, x)) / (2.0 * h);
        fp.observe(std::abs(exact - fd) / (1.0 + std::abs(exact)));
      }
      report.checks.push_back(fp.done());
    }
  }
  return report;
}

// Diagnostic only: crossings of a planar curve found by pairwise tests of
// polyline segments (resolution segments per chart). Returns one point per
// cluster of hits.
inline std::vector<Vec> find_self_intersections(const BoundaryImmersion& imm,
                                                double t, int resolution = 400) {
  if (imm.param_dim() != 1) {
    throw ConfigError("self-intersection detector handles planar curves only");
  }
  struct Segment {
    Vec a, b;
    std::size_t chart;
    int index;
  };
  std::vector<Segment> segs;
  for (std::size_t c = 0; c < imm.charts.size(); ++c) {
    const Box& box = imm.charts[c];
    Vec prev = immersion_point(imm, t, {c, box.lower});
    for (int i = 1; i <= resolution; ++i) {
      const Vec z = Vec::Constant(1, box.lower[0] + box.width()[0] * i / resolution);
      const Vec next = immersion_point(imm, t, {c, z});
      if (next.size() != 2) throw ConfigError("self-intersection detector needs d = 2");
      segs.push_back({prev, next, c, i - 1});
      prev = next;
    }
  }
  auto glued = [&](const Segment& s, const Segment& r) {
    for (const Seam& sm : imm.seams) {
      const bool s_at_a = s.chart == sm.chart_a && s.index == (sm.upper_a ? resolution - 1 : 0);
      const bool r_at_b = r.chart == sm.chart_b && r.index == (sm.upper_b ? resolution - 1 : 0);
      const bool r_at_a = r.chart == sm.chart_a && r.index == (sm.upper_a ? resolution - 1 : 0);
      const bool s_at_b = s.chart == sm.chart_b && s.index == (sm.upper_b ? resolution - 1 : 0);
      if ((s_at_a && r_at_b) || (r_at_a && s_at_b)) return true;
    }
    return false;
  };
  auto cross = [](const Vec& u, const Vec& v) { return u[0] * v[1] - u[1] * v[0]; };

  std::vector<Vec> hits;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const Segment& s = segs[i];
      const Segment& r = segs[j];
      if (s.chart == r.chart && std::abs(s.index - r.index) <= 1) continue;
      if (glued(s, r)) continue;
      const Vec ds = s.b - s.a, dr = r.b - r.a;
      const double den = cross(ds, dr);
      if (std::abs(den) < 1e-300) continue;
      const double u = cross(r.a - s.a, dr) / den;
      const double v = cross(r.a - s.a, ds) / den;
      const double slack = 1e-12;
      if (u < -slack || u > 1 + slack || v < -slack || v > 1 + slack) continue;
      hits.push_back(s.a + u * ds);
    }
  }
  std::vector<Vec> clusters;
  double scale = 0.0;
  for (const auto& s : segs) scale = std::max(scale, (s.b - s.a).norm());
  for (const Vec& h : hits) {
    bool merged = false;
    for (const Vec& c : clusters) {
      if ((c - h).norm() < 4.0 * scale) {
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back(h);
  }
  return clusters;
}

}  // namespace evolve
