#include "mps/action.hpp"

#include <cmath>
#include <stdexcept>

namespace mps {

ActionContext ActionContext::make(const ProblemSpec& p, int n) {
  p.validate();
  if (n < 2) throw std::invalid_argument("ActionContext: n >= 2 required");
  ActionContext ctx;
  ctx.problem = p;
  ctx.a = p.a;
  ctx.b = p.b;
  ctx.n = n;
  ctx.dim = p.dim;
  ctx.f_nodes.resize(static_cast<std::size_t>(n + 1) * p.dim);
  for (int k = 0; k <= n; ++k) {
    const Vec fv = p.f(ctx.t_node(k));
    for (int c = 0; c < p.dim; ++c)
      ctx.f_nodes[static_cast<std::size_t>(k) * p.dim + c] = fv[static_cast<std::size_t>(c)];
  }
  return ctx;
}

void ActionContext::check_grid(const GridFunction& u) const {
  if (u.n != n || u.dim != dim || u.a != a || u.b != b)
    throw std::invalid_argument("grid mismatch between ActionContext and GridFunction");
  if (!u.zero_boundary)
    throw std::invalid_argument("action requires zero-boundary grid functions");
}

namespace {

// cell quantities shared by value and gradient assembly
struct Cell {
  double tm;
  Vec mid;
  Vec du;
};

Cell cell_of(const ActionContext& ctx, const GridFunction& u, int k) {
  Cell c;
  c.tm = ctx.t_mid(k);
  const auto lo = u.node(k);
  const auto hi = u.node(k + 1);
  c.mid.resize(static_cast<std::size_t>(ctx.dim));
  c.du.resize(static_cast<std::size_t>(ctx.dim));
  const double ih = 1.0 / ctx.h();
  for (int i = 0; i < ctx.dim; ++i) {
    c.mid[static_cast<std::size_t>(i)] = 0.5 * (lo[i] + hi[i]);
    c.du[static_cast<std::size_t>(i)] = (hi[i] - lo[i]) * ih;
  }
  return c;
}

}  // namespace

LagrangianParts action_parts(const ActionContext& ctx, const GridFunction& u) {
  ctx.check_grid(u);
  const double h = ctx.h();
  LagrangianParts out;
  for (int k = 0; k < ctx.n; ++k) {
    const Cell c = cell_of(ctx, u, k);
    out.F_part += ctx.problem.F(c.tm, c.mid, c.du);
    out.V_part += ctx.problem.V(c.tm, c.mid);
  }
  out.F_part *= h;
  out.V_part *= h;
  if (!ctx.problem.f_is_zero) {
    double s = 0.5 * (dot(ctx.f_node(0), u.node(0)) + dot(ctx.f_node(ctx.n), u.node(ctx.n)));
    for (int k = 1; k < ctx.n; ++k) s += dot(ctx.f_node(k), u.node(k));
    out.f_part = s * h;
  }
  out.L = out.F_part + out.V_part + out.f_part;
  return out;
}

double action_value(const ActionContext& ctx, const GridFunction& u) {
  return action_parts(ctx, u).L;
}

GridFunction action_gradient(const ActionContext& ctx, const GridFunction& u) {
  ctx.check_grid(u);
  const double h = ctx.h();
  GridFunction g = ctx.zero_state();
  for (int k = 0; k < ctx.n; ++k) {
    const Cell c = cell_of(ctx, u, k);
    const Vec fx = ctx.problem.F_x(c.tm, c.mid, c.du);
    const Vec fv = ctx.problem.F_v(c.tm, c.mid, c.du);
    const Vec vx = ctx.problem.V_x(c.tm, c.mid);
    auto lo = g.node(k);
    auto hi = g.node(k + 1);
    for (int i = 0; i < ctx.dim; ++i) {
      const double smooth = 0.5 * h * (fx[static_cast<std::size_t>(i)] + vx[static_cast<std::size_t>(i)]);
      lo[i] += smooth - fv[static_cast<std::size_t>(i)];
      hi[i] += smooth + fv[static_cast<std::size_t>(i)];
    }
  }
  if (!ctx.problem.f_is_zero) {
    for (int k = 1; k < ctx.n; ++k) {
      auto gk = g.node(k);
      const auto fk = ctx.f_node(k);
      for (int i = 0; i < ctx.dim; ++i) gk[i] += h * fk[i];
    }
  }
  // the boundary nodes are not degrees of freedom
  g.set_zero_boundary();
  return g;
}

double action_directional(const ActionContext& ctx, const GridFunction& grad,
                          const GridFunction& w) {
  double s = 0.0;
  for (int k = 1; k < ctx.n; ++k) s += dot(grad.node(k), w.node(k));
  return s;
}

double gradient_norm(const ActionContext& ctx, const GridFunction& grad) {
  double s = 0.0;
  for (int k = 1; k < ctx.n; ++k) s += dot(grad.node(k), grad.node(k));
  return std::sqrt(s / ctx.h());
}

double gradient_fd_check(const ActionContext& ctx, const GridFunction& u, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("gradient_fd_check: step must be positive");
  const GridFunction g = action_gradient(ctx, u);
  GridFunction pert = u;
  double worst = 0.0;
  for (int k = 1; k < ctx.n; ++k) {
    for (int i = 0; i < ctx.dim; ++i) {
      const double save = pert.node(k)[i];
      const double s = step * (1.0 + std::fabs(save));
      pert.node(k)[i] = save + s;
      const double jp = action_value(ctx, pert);
      pert.node(k)[i] = save - s;
      const double jm = action_value(ctx, pert);
      pert.node(k)[i] = save;
      const double fd = (jp - jm) / (2.0 * s);
      const double an = g.node(k)[i];
      worst = std::max(worst, std::fabs(an - fd) / (1.0 + std::fabs(an)));
    }
  }
  return worst;
}

Residual euler_lagrange_residual(const ActionContext& ctx, const GridFunction& u) {
  ctx.check_grid(u);
  Residual res;
  const double h = ctx.h();
  const GridFunction g = action_gradient(ctx, u);
  for (int k = 1; k < ctx.n; ++k) res.weak = std::max(res.weak, norm2(g.node(k)) / h);

  if (ctx.n < 4) return res;
  res.strong_available = true;
  const int n = ctx.n;
  const int dim = ctx.dim;

  // centered nodal slopes on interior nodes
  std::vector<Vec> slope(static_cast<std::size_t>(n + 1));
  for (int k = 1; k < n; ++k) {
    Vec s(static_cast<std::size_t>(dim));
    const auto lo = u.node(k - 1);
    const auto hi = u.node(k + 1);
    for (int i = 0; i < dim; ++i) s[static_cast<std::size_t>(i)] = (hi[i] - lo[i]) / (2.0 * h);
    slope[static_cast<std::size_t>(k)] = std::move(s);
  }
  std::vector<Vec> P(static_cast<std::size_t>(n + 1));
  for (int k = 1; k < n; ++k)
    P[static_cast<std::size_t>(k)] =
        ctx.problem.F_v(ctx.t_node(k), u.node(k), slope[static_cast<std::size_t>(k)]);

  auto dPdt = [&](int k) {
    Vec d(static_cast<std::size_t>(dim));
    if (k == 1) {
      // second-order one-sided stencil at the first interior node
      for (int i = 0; i < dim; ++i)
        d[static_cast<std::size_t>(i)] =
            (-3.0 * P[1][static_cast<std::size_t>(i)] + 4.0 * P[2][static_cast<std::size_t>(i)] -
             P[3][static_cast<std::size_t>(i)]) /
            (2.0 * h);
    } else if (k == n - 1) {
      for (int i = 0; i < dim; ++i)
        d[static_cast<std::size_t>(i)] =
            (3.0 * P[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)] -
             4.0 * P[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(i)] +
             P[static_cast<std::size_t>(n - 3)][static_cast<std::size_t>(i)]) /
            (2.0 * h);
    } else {
      for (int i = 0; i < dim; ++i)
        d[static_cast<std::size_t>(i)] =
            (P[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(i)] -
             P[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)]) /
            (2.0 * h);
    }
    return d;
  };

  for (int k = 1; k < n; ++k) {
    const double t = ctx.t_node(k);
    const Vec d = dPdt(k);
    const Vec fx = ctx.problem.F_x(t, u.node(k), slope[static_cast<std::size_t>(k)]);
    const Vec vx = ctx.problem.V_x(t, u.node(k));
    const auto f = ctx.f_node(k);
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double r = d[static_cast<std::size_t>(i)] - fx[static_cast<std::size_t>(i)] -
                       vx[static_cast<std::size_t>(i)] - f[i];
      r2 += r * r;
    }
    res.strong = std::max(res.strong, std::sqrt(r2));
  }
  return res;
}

}  // namespace mps
