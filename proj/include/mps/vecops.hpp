#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mps {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec scaled(std::span<const double> a, double c) {
  Vec r(a.begin(), a.end());
  for (double& v : r) v *= c;
  return r;
}

// y += c * x
inline void axpy(double c, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vec vsum(std::span<const double> a, std::span<const double> b) {
  Vec r(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec vdiff(std::span<const double> a, std::span<const double> b) {
  Vec r(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace mps
