#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "evolve/domain.hpp"

namespace evolve {

// sqrt(det(D^T D)) without a rank check; used where near-singular samples
// are legitimate (Monte Carlo over a chart with coordinate singularities).
inline double gram_jacobian(const Mat& differential) {
  if (differential.cols() == 0) return 1.0;
  const double det = (differential.transpose() * differential).determinant();
  return std::sqrt(std::max(det, 0.0));
}

// Area-formula Jacobian J = sqrt(det(D^T D)) of a d x k differential. The
// empty differential (k = 0) has Jacobian 1 (counting measure).
inline double immersion_jacobian(const Mat& differential,
                                 double rank_tol = 1e-10) {
  if (differential.cols() == 0) return 1.0;
  const Mat gram = differential.transpose() * differential;
  const double det = gram.determinant();
  if (!(det > rank_tol)) {
    throw RankDeficient("Gram determinant " + std::to_string(det) +
                        " at or below rank tolerance");
  }
  return std::sqrt(det);
}

struct TangentFrame {
  Vec base_point;
  Mat basis;  // d x k, columns span the tangent space

  int dim() const { return static_cast<int>(basis.cols()); }
};

// Orthonormal basis (d x k) of the column space of a full-rank matrix.
inline Mat orthonormal_basis(const Mat& basis, double rank_tol = 1e-10) {
  if (basis.cols() == 0) return Mat(basis.rows(), 0);
  immersion_jacobian(basis, rank_tol);
  Eigen::HouseholderQR<Mat> qr(basis);
  return qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
}

inline Mat tangent_projector(const TangentFrame& frame,
                             double rank_tol = 1e-10) {
  const Mat q = orthonormal_basis(frame.basis, rank_tol);
  return q * q.transpose();
}

// Orthogonal projection of w onto span(frame.basis).
inline Vec tangent_projection(const TangentFrame& frame, const Vec& w,
                              double rank_tol = 1e-10) {
  const Mat q = orthonormal_basis(frame.basis, rank_tol);
  return q * (q.transpose() * w);
}

inline Vec boundary_velocity(const EvolvingDomain& domain, double t,
                             const ParamPoint& z) {
  return immersion_velocity(domain.boundary, t, z, domain.time_step());
}

// Tangent frame of M at the manifold point nearest to x.
inline TangentFrame manifold_frame(const EvolvingDomain& domain, const Vec& x) {
  const ManifoldPoint mp = project_to_manifold(domain.manifold, x, domain.tol);
  return TangentFrame{mp.point, chart_jacobian(domain.manifold, mp.u, domain.tol)};
}

// Unit vector of T_pM orthogonal to the boundary frame; sign unresolved.
inline Vec unoriented_normal(const TangentFrame& manifold_tangent,
                             const Mat& boundary_frame, double rank_tol) {
  const int m = manifold_tangent.dim();
  if (boundary_frame.cols() != m - 1) {
    throw ConfigError("boundary frame must have m-1 columns");
  }
  const Mat q = orthonormal_basis(manifold_tangent.basis, rank_tol);
  if (m == 1) return q.col(0);
  immersion_jacobian(boundary_frame, rank_tol);
  const Mat coords = q.transpose() * boundary_frame;  // m x (m-1)
  Eigen::HouseholderQR<Mat> qr(coords);
  const Mat full = qr.householderQ();
  Vec n = q * full.col(m - 1);
  return n / n.norm();
}

// Flips n so that the straight-line probe p + eps n (projected back to M)
// lies outside O_t and p - eps n lies inside.
inline Vec orient_by_membership(const EvolvingDomain& domain, double t,
                                const Vec& p, const Vec& n) {
  const double eps = domain.probe_distance();
  const Vec out_probe =
      project_to_manifold(domain.manifold, p + eps * n, domain.tol).point;
  const Vec in_probe =
      project_to_manifold(domain.manifold, p - eps * n, domain.tol).point;
  const bool plus_inside = is_inside(domain, t, out_probe);
  const bool minus_inside = is_inside(domain, t, in_probe);
  if (!plus_inside && minus_inside) return n;
  if (plus_inside && !minus_inside) return -n;
  throw OrientationAmbiguous(
      std::string("membership probes agree (both ") +
      (plus_inside ? "inside" : "outside") + ") at t=" + std::to_string(t));
}

// Everything the kernel knows about one boundary point.
struct BoundaryGeometry {
  Vec point;
  Vec velocity;          // df/dt at fixed z
  Mat differential;      // df_t(z), d x (m-1)
  Vec normal;            // exterior unit normal relative to M
  double normal_velocity = 0.0;
  double jacobian = 1.0; // J_{f_t}(z)
};

inline BoundaryGeometry boundary_geometry(const EvolvingDomain& domain,
                                          double t, const ParamPoint& z) {
  BoundaryGeometry g;
  g.point = immersion_point(domain.boundary, t, z);
  g.differential = immersion_differential(domain.boundary, t, z, domain.tol);
  g.jacobian = immersion_jacobian(g.differential, domain.tol.rank_tol);
  const TangentFrame frame = manifold_frame(domain, g.point);
  const Vec raw = unoriented_normal(frame, g.differential, domain.tol.rank_tol);
  g.normal = orient_by_membership(domain, t, g.point, raw);
  g.velocity = boundary_velocity(domain, t, z);
  g.normal_velocity = g.velocity.dot(g.normal);
  return g;
}

inline Vec exterior_unit_normal(const EvolvingDomain& domain, double t,
                                const ParamPoint& z) {
  const Vec p = immersion_point(domain.boundary, t, z);
  const Mat df = immersion_differential(domain.boundary, t, z, domain.tol);
  const TangentFrame frame = manifold_frame(domain, p);
  return orient_by_membership(
      domain, t, p, unoriented_normal(frame, df, domain.tol.rank_tol));
}

inline double normal_velocity(const EvolvingDomain& domain, double t,
                              const ParamPoint& z) {
  return boundary_velocity(domain, t, z).dot(exterior_unit_normal(domain, t, z));
}

namespace detail {

// Uniform sample of a multi-box parameter manifold; charts are chosen in
// proportion to their volume.
inline ParamPoint sample_param(const std::vector<Box>& charts,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double total = 0.0;
  for (const auto& c : charts) total += c.volume();
  double pick = unit(rng) * total;
  std::size_t chart = 0;
  for (; chart + 1 < charts.size(); ++chart) {
    pick -= charts[chart].volume();
    if (pick < 0.0) break;
  }
  const Box& box = charts[chart];
  Vec frac(box.dim());
  for (int i = 0; i < box.dim(); ++i) frac[i] = unit(rng);
  return ParamPoint{chart, box.at(frac)};
}

inline bool near_exceptional(const BoundaryImmersion& imm, double t,
                             const ParamPoint& z, double radius_fraction) {
  const ExceptionalSet ex = imm.exceptional_set(t);
  for (const auto& pre : ex.preimages) {
    if (pre.chart != z.chart) continue;
    const Box& box = imm.charts.at(z.chart);
    if (box.distance(pre.z, z.z) <= radius_fraction * std::max(box.diameter(), 1e-300)) {
      return true;
    }
  }
  return false;
}

}  // namespace detail

struct BoundaryMatch {
  ParamPoint z;
  double distance = std::numeric_limits<double>::infinity();
};

// Nearest parameter of imm at time t to the ambient point p: coarse grid
// seed per chart followed by Gauss-Newton on |f(z) - p|^2.
inline BoundaryMatch nearest_boundary_param(const BoundaryImmersion& imm,
                                            double t, const Vec& p,
                                            const Tolerances& tol = {}) {
  BoundaryMatch best;
  for (std::size_t c = 0; c < imm.charts.size(); ++c) {
    const Box& box = imm.charts[c];
    const int k = box.dim();
    ParamPoint z{c, box.center()};
    if (k > 0) {
      const int grid = k == 1 ? 256 : (k == 2 ? 48 : 16);
      int total = 1;
      for (int i = 0; i < k; ++i) total *= grid;
      double seed_dist = std::numeric_limits<double>::infinity();
      for (int idx = 0; idx < total; ++idx) {
        Vec frac(k);
        int rest = idx;
        for (int i = 0; i < k; ++i) {
          frac[i] = (rest % grid + 0.5) / grid;
          rest /= grid;
        }
        const ParamPoint cand{c, box.at(frac)};
        const double dist = (immersion_point(imm, t, cand) - p).norm();
        if (dist < seed_dist) {
          seed_dist = dist;
          z = cand;
        }
      }
      for (int iter = 0; iter < 60; ++iter) {
        const Vec r = p - immersion_point(imm, t, z);
        const Mat df = immersion_differential(imm, t, z, tol);
        const Vec step = (df.transpose() * df).ldlt().solve(df.transpose() * r);
        if (!step.allFinite()) break;
        z.z = box.normalize(z.z + step);
        if (step.norm() <= 1e-15 * (1.0 + z.z.norm())) break;
      }
    }
    const double dist = (immersion_point(imm, t, z) - p).norm();
    if (dist < best.distance) {
      best.distance = dist;
      best.z = z;
    }
  }
  return best;
}

// Largest |V_primary - V_alt| over sampled points of alt, each matched to the
// nearest point of the primary immersion. Full velocities may differ; only
// their normal components are compared.
inline double reparametrization_gap(const EvolvingDomain& domain,
                                    const BoundaryImmersion& alt, double t,
                                    int samples, std::uint64_t seed = 17) {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  EvolvingDomain alt_domain = domain;
  alt_domain.boundary = alt;
  std::mt19937_64 rng(seed);
  double gap = 0.0;
  for (int s = 0; s < samples; ++s) {
    ParamPoint z = detail::sample_param(alt.charts, rng);
    while (detail::near_exceptional(alt, t, z, 1e-3)) {
      z = detail::sample_param(alt.charts, rng);
    }
    const Vec p = immersion_point(alt, t, z);
    const BoundaryMatch match =
        nearest_boundary_param(domain.boundary, t, p, domain.tol);
    if (!(match.distance < domain.tol.match_tol)) {
      throw MatchFailure("nearest-point search stalled at distance " +
                         std::to_string(match.distance));
    }
    const double v_alt = normal_velocity(alt_domain, t, z);
    const double v_primary = normal_velocity(domain, t, match.z);
    gap = std::max(gap, std::abs(v_alt - v_primary));
  }
  return gap;
}

}  // namespace evolve
