#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace evolve {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error hierarchy. Every failure the library reports derives from Error so
// callers can turn a failed evaluation into a report entry instead of a crash.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user-supplied map threw or produced a non-finite value.
class EvaluationFailure : public Error {
 public:
  using Error::Error;
};

// Gram determinant at or below rank_tol (usually an exceptional point).
class RankDeficient : public Error {
 public:
  using Error::Error;
};

// Both membership probes around a boundary point agree.
class OrientationAmbiguous : public Error {
 public:
  using Error::Error;
};

class MatchFailure : public Error {
 public:
  using Error::Error;
};

class NoIntegrationPath : public Error {
 public:
  using Error::Error;
};

class WindowExceeded : public Error {
 public:
  using Error::Error;
};

class DegenerateInterval : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }
inline bool all_finite(double x) { return std::isfinite(x); }

template <typename T>
const T& require_finite(const T& value, const char* what) {
  if (!all_finite(value)) {
    throw EvaluationFailure(std::string("non-finite value from ") + what);
  }
  return value;
}

struct TimeWindow {
  double lower = 0.0;
  double upper = 1.0;

  double length() const { return upper - lower; }
  bool contains(double t) const { return t >= lower && t <= upper; }

  // n uniformly spaced interior times, excluding both ends.
  std::vector<double> interior_times(int n) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
      out.push_back(lower + length() * k / (n + 1));
    }
    return out;
  }
};

// Axis-aligned parameter box. A zero-dimensional box is a single point and
// carries counting measure (volume 1).
struct Box {
  Vec lower;
  Vec upper;
  std::vector<bool> periodic;  // axis glued to itself (seam)
  std::vector<int> panels;     // composite quadrature panels per axis

  Box() = default;
  Box(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) {
      throw ConfigError("box corners differ in dimension");
    }
    periodic.assign(static_cast<std::size_t>(lower.size()), false);
    panels.assign(static_cast<std::size_t>(lower.size()), 1);
  }

  static Box point() { return Box(Vec(0), Vec(0)); }

  static Box interval(double lo, double hi) {
    return Box(Vec::Constant(1, lo), Vec::Constant(1, hi));
  }

  static Box rect(double x0, double x1, double y0, double y1) {
    Vec lo(2), hi(2);
    lo << x0, y0;
    hi << x1, y1;
    return Box(lo, hi);
  }

  static Box cuboid(const Vec& lo, const Vec& hi) { return Box(lo, hi); }

  Box& with_periodic(int axis, bool value = true) {
    periodic.at(static_cast<std::size_t>(axis)) = value;
    return *this;
  }

  Box& with_panels(int axis, int count) {
    panels.at(static_cast<std::size_t>(axis)) = count;
    return *this;
  }

  int dim() const { return static_cast<int>(lower.size()); }

  Vec width() const { return upper - lower; }

  Vec center() const { return 0.5 * (lower + upper); }

  double volume() const { return dim() == 0 ? 1.0 : width().prod(); }

  double diameter() const { return dim() == 0 ? 0.0 : width().norm(); }

  // Point at unit-cube coordinates u in [0,1]^dim.
  Vec at(const Vec& u) const {
    return lower + width().cwiseProduct(u);
  }

  bool contains(const Vec& z) const {
    for (int i = 0; i < dim(); ++i) {
      if (z[i] < lower[i] || z[i] > upper[i]) return false;
    }
    return true;
  }

  // Wraps periodic coordinates into [lower, upper); others are clamped.
  Vec normalize(Vec z) const {
    for (int i = 0; i < dim(); ++i) {
      const double w = upper[i] - lower[i];
      if (periodic[static_cast<std::size_t>(i)]) {
        z[i] = lower[i] + std::fmod(std::fmod(z[i] - lower[i], w) + w, w);
      } else {
        z[i] = std::clamp(z[i], lower[i], upper[i]);
      }
    }
    return z;
  }

  // Parameter distance respecting periodic seams.
  double distance(const Vec& a, const Vec& b) const {
    double sum = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double d = std::abs(a[i] - b[i]);
      if (periodic[static_cast<std::size_t>(i)]) {
        d = std::min(d, (upper[i] - lower[i]) - d);
      }
      sum += d * d;
    }
    return std::sqrt(sum);
  }
};

// A point of a multi-chart parameter manifold.
struct ParamPoint {
  std::size_t chart = 0;
  Vec z;
};

// Numerical tolerances and step sizes. A zero step or probe distance means
// "derive from the scene" (see EvolvingDomain accessors).
struct Tolerances {
  double rank_tol = 1e-10;
  double proj_tol = 1e-8;
  double unit_tol = 1e-10;
  double match_tol = 1e-8;
  double surface_tol = 1e-8;
  double geom_step = 0.0;    // default 1e-6 * box diameter
  double time_step = 0.0;    // default 1e-6 * window length
  double probe = 0.0;        // default 1e-4 * feature size
};

}  // namespace evolve
