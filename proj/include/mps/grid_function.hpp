#pragma once

#include <functional>
#include <span>
#include <string>

#include "mps/vecops.hpp"

namespace mps {

// A vector-valued function u: [a,b] -> R^N sampled on a uniform grid of n
// subintervals and interpreted as piecewise linear. The derivative is
// piecewise constant: (values[k+1] - values[k]) / h on cell k.
struct GridFunction {
  double a = 0.0;
  double b = 1.0;
  int n = 2;    // subintervals, >= 2
  int dim = 1;  // N
  std::vector<double> values;  // (n+1) * dim, node-major
  bool zero_boundary = false;

  static GridFunction zeros(double a, double b, int n, int dim, bool zero_boundary = true);
  static GridFunction from_callable(double a, double b, int n, int dim,
                                    const std::function<Vec(double)>& fn);

  double h() const { return (b - a) / n; }
  double t(int k) const { return a + (b - a) * k / n; }
  std::span<const double> node(int k) const {
    return {values.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
  std::span<double> node(int k) {
    return {values.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
  // derivative on cell k, k in [0, n)
  Vec cell_derivative(int k) const;
  // value of the piecewise-linear interpolant at arbitrary t in [a, b]
  Vec at(double t) const;

  double sup_norm() const;  // max over nodes of |u(t_k)|; exact for PL functions
  void set_zero_boundary();  // zero both end nodes and set the flag
  void validate() const;     // throws std::invalid_argument on broken invariants

  GridFunction& operator*=(double c);
  GridFunction& add_scaled(double c, const GridFunction& other);
};

GridFunction blend(const GridFunction& x, const GridFunction& y, double theta);  // (1-theta)x + theta y

// CSV exchange format: header "t,u1,...,uN", one row per node, full-precision
// decimal values.
void write_csv(const GridFunction& u, const std::string& path);
GridFunction read_csv(const std::string& path);

}  // namespace mps
