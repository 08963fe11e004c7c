#pragma once

#include "mps/grid_function.hpp"
#include "mps/problem.hpp"

namespace mps {

// Discretization of the action J(u) = int F(t,u,u') + V(t,u) + <f,u> dt on
// zero-boundary grid functions. F and V are integrated per cell at the
// midpoint in t with u averaged across the cell and u' the cell constant;
// the forcing term uses the trapezoid rule on nodes. The gradient below is
// the exact derivative of this discrete functional, so finite-difference
// checks close to machine precision.
struct ActionContext {
  ProblemSpec problem;
  double a = 0.0, b = 1.0;
  int n = 2;
  int dim = 1;
  std::vector<double> f_nodes;  // cached forcing samples at grid nodes

  static ActionContext make(const ProblemSpec& p, int n);

  double h() const { return (b - a) / n; }
  double t_node(int k) const { return a + (b - a) * k / n; }
  double t_mid(int k) const { return a + (b - a) * (k + 0.5) / n; }
  std::span<const double> f_node(int k) const {
    return {f_nodes.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
  GridFunction zero_state() const { return GridFunction::zeros(a, b, n, dim, true); }
  void check_grid(const GridFunction& u) const;  // throws on mismatch
};

double action_value(const ActionContext& ctx, const GridFunction& u);
LagrangianParts action_parts(const ActionContext& ctx, const GridFunction& u);

// Exact gradient of the discrete action with respect to interior nodal
// values; boundary entries are zero.
GridFunction action_gradient(const ActionContext& ctx, const GridFunction& u);

// <grad J(u), w> for a zero-boundary direction w.
double action_directional(const ActionContext& ctx, const GridFunction& grad,
                          const GridFunction& w);

// Discrete L2-type norm of a gradient field: sqrt(sum |g_j|^2 / h).
double gradient_norm(const ActionContext& ctx, const GridFunction& grad);

// Max over interior degrees of freedom of
//   |analytic - central difference| / (1 + |analytic|).
double gradient_fd_check(const ActionContext& ctx, const GridFunction& u, double step = 1e-6);

struct Residual {
  double weak = 0.0;    // max_k |grad_k| / h over interior nodes
  double strong = 0.0;  // max_k |d/dt F_v - F_x - grad V - f| at interior nodes
  bool strong_available = false;  // needs n >= 4
};

Residual euler_lagrange_residual(const ActionContext& ctx, const GridFunction& u);

}  // namespace mps
