#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkflow {

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Axis-aligned box; the ambient domain for measures and grids.
struct Box {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Vec& x, double slack = 1e-12) const {
    if (x.size() != lo.size()) return false;
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (x[k] < lo[k] - slack || x[k] > hi[k] + slack) return false;
    return true;
  }

  double volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= hi[k] - lo[k];
    return v;
  }
};

/// sin(t)/t with a series branch below 1e-4 to avoid cancellation.
inline double sinc(double t) {
  const double a = std::abs(t);
  if (a < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

/// s log s - s + 1 with the boundary convention f(0) = 1.
inline double entropy_f(double s) {
  if (s == 0.0) return 1.0;
  return s * std::log(s) - s + 1.0;
}

/// Log-sum-exp over a strided slice, skipping -inf terms. Returns -inf when
/// every term is -inf or the range is empty.
inline double logsumexp(const double* x, std::size_t n, std::size_t stride = 1) {
  double m = -kInf;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, x[k * stride]);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = x[k * stride];
    if (v != -kInf) s += std::exp(v - m);
  }
  return m + std::log(s);
}

}  // namespace hkflow
