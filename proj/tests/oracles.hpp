#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's quadrature or geometry code.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Product of singular values = sqrt(det(D^T D)).
inline double svd_jacobian(const Eigen::MatrixXd& d) {
  if (d.cols() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  return svd.singularValues().prod();
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Winding number of a closed polyline around q (crossing rule with signed
// upward/downward edges).
inline int winding_number(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& q) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % n];
    const double side = (b.x() - a.x()) * (q.y() - a.y()) - (q.x() - a.x()) * (b.y() - a.y());
    if (a.y() <= q.y()) {
      if (b.y() > q.y() && side > 0) ++wn;
    } else {
      if (b.y() <= q.y() && side < 0) --wn;
    }
  }
  return wn;
}

// Shoelace signed area of a closed polyline.
inline double signed_area(const std::vector<Eigen::Vector2d>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

// Least-squares slope of log10(y) against log10(x).
inline double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
