#pragma once

// Test-only oracles, independent of the library's solution paths: RK4
// shooting for scalar two-point boundary value problems and plain
// quadrature helpers for frozen expected values.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// One RK4 step for u'' = rhs(t, u).
inline void rk4_step(const std::function<double(double, double)>& rhs, double& t, double& u,
                     double& v, double h) {
  auto f = [&](double tt, double uu, double vv, double& du, double& dv) {
    du = vv;
    dv = rhs(tt, uu);
  };
  double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
  f(t, u, v, k1u, k1v);
  f(t + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
  f(t + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
  f(t + h, u + h * k3u, v + h * k3v, k4u, k4v);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  t += h;
}

// Integrates u'' = rhs(t,u), u(a)=0, u'(a)=slope, and returns u at the n+1
// grid nodes (substeps RK4 steps per cell).
inline std::vector<double> ivp_on_grid(const std::function<double(double, double)>& rhs, double a,
                                       double b, int n, double slope, int substeps = 512) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  double t = a, u = 0.0, v = slope;
  out.push_back(u);
  const double h = (b - a) / (static_cast<double>(n) * substeps);
  for (int k = 0; k < n; ++k) {
    for (int s = 0; s < substeps; ++s) rk4_step(rhs, t, u, v, h);
    out.push_back(u);
  }
  return out;
}

// Shooting for the nontrivial positive-bump solution of u'' = rhs(t,u),
// u(a)=u(b)=0: scans upward for a sign change of u(b; slope) and bisects.
inline double shoot_positive_bump(const std::function<double(double, double)>& rhs, double a,
                                  double b) {
  auto end_value = [&](double slope) {
    double t = a, u = 0.0, v = slope;
    const int steps = 20000;
    const double h = (b - a) / steps;
    for (int s = 0; s < steps; ++s) rk4_step(rhs, t, u, v, h);
    return u;
  };
  double hi = 1.0;
  int guard = 0;
  while (end_value(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 60) throw std::runtime_error("shooting: no sign change found");
  }
  double lo = hi * 0.5;
  if (end_value(lo) <= 0.0) {
    // the scan jumped past the root; walk down
    while (end_value(lo) <= 0.0 && lo > 1e-8) lo *= 0.5;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (end_value(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Composite trapezoid of a callable, for frozen reference values.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int cells) {
  const double h = (b - a) / cells;
  double s = 0.5 * (f(a) + f(b));
  for (int k = 1; k < cells; ++k) s += f(a + h * k);
  return s * h;
}

}  // namespace oracle
