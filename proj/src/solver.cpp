#include "mps/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mps/rng.hpp"

namespace mps {

GridFunction default_valley_seed(const ActionContext& ctx, double amplitude) {
  const double pi = 3.1415926535897932384626433832795;
  const double len = ctx.b - ctx.a;
  const double comp = amplitude / std::sqrt(static_cast<double>(ctx.dim));
  GridFunction u = GridFunction::from_callable(ctx.a, ctx.b, ctx.n, ctx.dim, [&](double t) {
    const double s = comp * std::sin(pi * (t - ctx.a) / len);
    return Vec(static_cast<std::size_t>(ctx.dim), s);
  });
  u.set_zero_boundary();
  return u;
}

ValleyResult find_valley_point(const ActionContext& ctx, const GridFunction& u0,
                               const MountainPassConfig& cfg, double rho) {
  ValleyResult out;
  ctx.check_grid(u0);
  if (rho < 0.0) {
    const EmbeddingData emb = embedding_constant(ctx.problem.g, ctx.problem.interval_length());
    rho = ctx.problem.w.rho0 / emb.C_inf_G;
  }
  int exceed = 0;
  for (int k = 0; k <= ctx.n; ++k)
    if (norm2(u0.node(k)) >= ctx.problem.w.r0) ++exceed;
  if (exceed == 0) {
    out.message = "seed never reaches r0: |u0(t_k)| < r0 at every node";
    return out;
  }

  double lambda = 2.0;
  GridFunction e = u0;
  while (lambda <= cfg.lambda_max) {
    e = u0;
    e *= lambda;
    out.parts = action_parts(ctx, e);
    out.w0_norm = luxemburg_norm(ctx.problem.g, e, true);
    if (out.parts.L < 0.0 && out.w0_norm > rho) {
      out.ok = true;
      out.e = e;
      out.lambda0 = lambda;
      return out;
    }
    lambda *= 2.0;
  }
  // name the term that keeps J nonnegative along the ray
  const LagrangianParts& pr = out.parts;
  std::string dominant = "F";
  double dv = pr.F_part;
  if (pr.V_part > dv) {
    dominant = "V";
    dv = pr.V_part;
  }
  if (pr.f_part > dv) dominant = "f";
  out.message = "lambda exceeded lambda_max without J < 0; dominant nonnegative term: " + dominant;
  if (out.w0_norm <= rho) out.message += " (and the scaled norm never cleared rho)";
  return out;
}

double estimate_rim(const ActionContext& ctx, double rho, int samples, std::uint64_t seed) {
  if (!(rho > 0.0)) throw std::invalid_argument("estimate_rim: rho must be positive");
  const double pi = 3.1415926535897932384626433832795;
  const double len = ctx.b - ctx.a;
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    GridFunction u = ctx.zero_state();
    if (rng.uniform() < 0.75) {
      // random low-order sine combination, smooth and zero at the ends
      const int modes = 8;
      std::vector<double> coef(static_cast<std::size_t>(modes * ctx.dim));
      for (double& c : coef) c = rng.normal();
      for (int k = 1; k < ctx.n; ++k) {
        const double t = ctx.t_node(k);
        for (int c = 0; c < ctx.dim; ++c) {
          double val = 0.0;
          for (int m = 1; m <= modes; ++m)
            val += coef[static_cast<std::size_t>((m - 1) * ctx.dim + c)] / m *
                   std::sin(m * pi * (t - ctx.a) / len);
          u.node(k)[c] = val;
        }
      }
    } else {
      for (int k = 1; k < ctx.n; ++k)
        for (int c = 0; c < ctx.dim; ++c) u.node(k)[c] = rng.normal();
    }
    const double nrm = luxemburg_norm(ctx.problem.g, u, true);
    if (!(nrm > 0.0)) continue;
    u *= rho / nrm;  // Luxemburg norms are positively homogeneous
    best = std::min(best, action_value(ctx, u));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Newton polishing of the gradient system.

namespace {

// Finite-difference Hessian of the discrete action, assembled cell by cell.
// Perturbing one node only touches its two cells, so each column costs a
// handful of local derivative evaluations.
Eigen::SparseMatrix<double> fd_hessian(const ActionContext& ctx, const GridFunction& u) {
  const int n = ctx.n;
  const int dim = ctx.dim;
  const int dof = (n - 1) * dim;
  const double h = ctx.h();

  // gradient contribution of cell k to its two nodes, as a function of the
  // nodal values (a, b)
  auto cell_grad = [&](int k, std::span<const double> a, std::span<const double> b, Vec& ga,
                       Vec& gb) {
    const double tm = ctx.t_mid(k);
    Vec mid(static_cast<std::size_t>(dim)), du(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      mid[static_cast<std::size_t>(i)] = 0.5 * (a[i] + b[i]);
      du[static_cast<std::size_t>(i)] = (b[i] - a[i]) / h;
    }
    const Vec fx = ctx.problem.F_x(tm, mid, du);
    const Vec fv = ctx.problem.F_v(tm, mid, du);
    const Vec vx = ctx.problem.V_x(tm, mid);
    ga.assign(static_cast<std::size_t>(dim), 0.0);
    gb.assign(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
      const double smooth = 0.5 * h * (fx[static_cast<std::size_t>(i)] + vx[static_cast<std::size_t>(i)]);
      ga[static_cast<std::size_t>(i)] = smooth - fv[static_cast<std::size_t>(i)];
      gb[static_cast<std::size_t>(i)] = smooth + fv[static_cast<std::size_t>(i)];
    }
  };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(4 * dim * dim * n));
  auto dof_index = [dim](int node, int comp) { return (node - 1) * dim + comp; };

  Vec a_buf(static_cast<std::size_t>(dim)), b_buf(static_cast<std::size_t>(dim));
  Vec gap(static_cast<std::size_t>(dim)), gbp(static_cast<std::size_t>(dim));
  Vec gam(static_cast<std::size_t>(dim)), gbm(static_cast<std::size_t>(dim));
  for (int k = 0; k < n; ++k) {
    const auto ua = u.node(k);
    const auto ub = u.node(k + 1);
    for (int side = 0; side < 2; ++side) {
      const int node = k + side;
      if (node == 0 || node == n) continue;  // boundary nodes are fixed
      for (int comp = 0; comp < dim; ++comp) {
        const double base = side == 0 ? ua[comp] : ub[comp];
        const double step = 1e-6 * (1.0 + std::fabs(base));
        a_buf.assign(ua.begin(), ua.end());
        b_buf.assign(ub.begin(), ub.end());
        (side == 0 ? a_buf : b_buf)[static_cast<std::size_t>(comp)] = base + step;
        cell_grad(k, a_buf, b_buf, gap, gbp);
        (side == 0 ? a_buf : b_buf)[static_cast<std::size_t>(comp)] = base - step;
        cell_grad(k, a_buf, b_buf, gam, gbm);
        const int col = dof_index(node, comp);
        for (int i = 0; i < dim; ++i) {
          if (k >= 1) {
            const double d = (gap[static_cast<std::size_t>(i)] - gam[static_cast<std::size_t>(i)]) /
                             (2.0 * step);
            if (d != 0.0) trip.emplace_back(dof_index(k, i), col, d);
          }
          if (k + 1 <= n - 1) {
            const double d = (gbp[static_cast<std::size_t>(i)] - gbm[static_cast<std::size_t>(i)]) /
                             (2.0 * step);
            if (d != 0.0) trip.emplace_back(dof_index(k + 1, i), col, d);
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> H(dof, dof);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

double squared_grad(const ActionContext& ctx, const GridFunction& u, GridFunction* g_out) {
  GridFunction g = action_gradient(ctx, u);
  double s = 0.0;
  for (int k = 1; k < ctx.n; ++k) s += dot(g.node(k), g.node(k));
  if (g_out) *g_out = std::move(g);
  return s / ctx.h();  // = gradient_norm^2
}

}  // namespace

RefineResult refine_critical_point(const ActionContext& ctx, const GridFunction& u,
                                   const MountainPassConfig& cfg) {
  ctx.check_grid(u);
  RefineResult out;
  out.u = u;
  const int dof = (ctx.n - 1) * ctx.dim;

  GridFunction grad = ctx.zero_state();
  double phi = squared_grad(ctx, out.u, &grad);
  out.grad_norm = std::sqrt(phi);
  if (!std::isfinite(phi)) return out;  // nothing to polish from a broken state

  for (int it = 0; it < cfg.max_refine_iters; ++it) {
    if (out.grad_norm <= cfg.grad_tol) {
      out.converged = true;
      return out;
    }
    out.iterations = it + 1;

    // Newton direction for grad J(u) = 0
    Eigen::VectorXd rhs(dof);
    for (int k = 1; k < ctx.n; ++k)
      for (int c = 0; c < ctx.dim; ++c) rhs((k - 1) * ctx.dim + c) = -grad.node(k)[c];
    GridFunction delta = ctx.zero_state();
    bool have_direction = false;
    {
      Eigen::SparseMatrix<double> H = fd_hessian(ctx, out.u);
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(H);
      if (lu.info() == Eigen::Success) {
        Eigen::VectorXd d = lu.solve(rhs);
        if (d.allFinite()) {
          for (int k = 1; k < ctx.n; ++k)
            for (int c = 0; c < ctx.dim; ++c) delta.node(k)[c] = d((k - 1) * ctx.dim + c);
          have_direction = true;
        }
      }
    }
    if (!have_direction) {
      // steepest descent on ||grad||^2: direction -H W g by a directional
      // difference of the gradient map along W g
      GridFunction wg = grad;
      wg *= 1.0 / ctx.h();
      double wn = 0.0;
      for (int k = 1; k < ctx.n; ++k) wn += dot(wg.node(k), wg.node(k));
      wn = std::sqrt(wn);
      if (wn < 1e-300) break;
      const double eps = 1e-6 * (1.0 + out.u.sup_norm()) / wn;
      GridFunction up = out.u, um = out.u;
      up.add_scaled(eps, wg);
      um.add_scaled(-eps, wg);
      const GridFunction gp = action_gradient(ctx, up);
      const GridFunction gm = action_gradient(ctx, um);
      for (int k = 1; k < ctx.n; ++k)
        for (int c = 0; c < ctx.dim; ++c)
          delta.node(k)[c] = -(gp.node(k)[c] - gm.node(k)[c]) / (2.0 * eps);
      // scale the raw direction to a step of plausible size
      double dn = 0.0;
      for (int k = 1; k < ctx.n; ++k) dn += dot(delta.node(k), delta.node(k));
      dn = std::sqrt(dn);
      if (dn < 1e-300) break;
      for (int k = 1; k < ctx.n; ++k)
        for (int c = 0; c < ctx.dim; ++c) delta.node(k)[c] *= out.grad_norm / dn;
    }

    // line search on the squared gradient norm
    double s = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 45; ++ls) {
      GridFunction trial = out.u;
      trial.add_scaled(s, delta);
      GridFunction tg = ctx.zero_state();
      const double tphi = squared_grad(ctx, trial, &tg);
      if (std::isfinite(tphi) && tphi < phi * (1.0 - 1e-4 * s)) {
        out.u = std::move(trial);
        grad = std::move(tg);
        phi = tphi;
        out.grad_norm = std::sqrt(phi);
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;  // stagnation: return the best iterate
  }
  out.converged = out.grad_norm <= cfg.grad_tol;
  return out;
}

// ---------------------------------------------------------------------------
// Path deformation.

namespace {

struct Path {
  std::vector<GridFunction> nodes;

  int argmax_interior(const ActionContext& ctx, double* value) const {
    int best = 1;
    double bv = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
      const double v = action_value(ctx, nodes[i]);
      if (v > bv) {
        bv = v;
        best = static_cast<int>(i);
      }
    }
    if (value) *value = bv;
    return best;
  }

  double max_over_nodes(const ActionContext& ctx) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& g : nodes) m = std::max(m, action_value(ctx, g));
    return m;
  }
};

// cumulative arc length of the path polygon in the W0 metric
std::vector<double> cumulative_length(const ActionContext& ctx, const Path& path) {
  const std::size_t m = path.nodes.size();
  std::vector<double> cum(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    GridFunction diff = path.nodes[i + 1];
    diff.add_scaled(-1.0, path.nodes[i]);
    cum[i + 1] = cum[i] + luxemburg_norm(ctx.problem.g, diff, true);
  }
  return cum;
}

// re-space path nodes to equal arc length in the W0 metric
Path equidistribute(const ActionContext& ctx, const Path& path) {
  const std::size_t m = path.nodes.size();
  const std::vector<double> cum = cumulative_length(ctx, path);
  const double total = cum.back();
  if (!(total > 0.0)) return path;
  Path out;
  out.nodes.reserve(m);
  out.nodes.push_back(path.nodes.front());
  std::size_t seg = 0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(m - 1);
    while (seg + 2 < m && cum[seg + 1] < target) ++seg;
    const double lo = cum[seg], hi = cum[seg + 1];
    const double theta = hi > lo ? (target - lo) / (hi - lo) : 0.0;
    out.nodes.push_back(blend(path.nodes[seg], path.nodes[seg + 1], theta));
  }
  out.nodes.push_back(path.nodes.back());
  return out;
}

}  // namespace

SolveReport mountain_pass_solve(const ActionContext& ctx, const MountainPassConfig& cfg) {
  SolveReport rep;
  const ProblemSpec& p = ctx.problem;

  const EmbeddingData emb = embedding_constant(p.g, p.interval_length());
  const SimonenkoIndices idx = simonenko_indices(p.g);
  rep.gate = check_theorem_conditions(p, emb, idx);
  {
    HypothesisSampler hs;
    hs.samples = cfg.hypothesis_samples;
    hs.seed = cfg.seed;
    rep.hypothesis = check_hypotheses(p, hs);
  }
  rep.rho = p.w.rho0 / emb.C_inf_G;

  GridFunction u0 =
      cfg.valley_seed ? *cfg.valley_seed : default_valley_seed(ctx, 2.0 * p.w.r0);
  ValleyResult valley = find_valley_point(ctx, u0, cfg, rep.rho);

  if (!valley.ok) {
    rep.geometry_ok = false;
    rep.message = "geometry gates failed, minimizer returned";
    if (!valley.message.empty()) rep.message += ": " + valley.message;
    rep.alpha_est = estimate_rim(ctx, rep.rho, cfg.rim_samples, cfg.seed);
    const RefineResult rr = refine_critical_point(ctx, ctx.zero_state(), cfg);
    rep.u_star = rr.u;
    rep.grad_norm = rr.grad_norm;
    rep.refine_iterations = rr.iterations;
    rep.converged = rr.converged;
    rep.j_at_ustar = action_value(ctx, rep.u_star);
    rep.c_est = rep.j_at_ustar;
    rep.residual = euler_lagrange_residual(ctx, rep.u_star);
    rep.u_star_w0_norm = luxemburg_norm(p.g, rep.u_star, true);
    return rep;
  }

  rep.geometry_ok = true;
  rep.e = valley.e;
  rep.lambda0 = valley.lambda0;
  rep.j_at_estar = valley.parts.L;
  rep.alpha_est = estimate_rim(ctx, rep.rho, cfg.rim_samples, cfg.seed);

  // straight initial path from 0 to e
  const int m = std::max(cfg.path_points, 3);
  Path path;
  path.nodes.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    GridFunction gi = valley.e;
    gi *= static_cast<double>(i) / (m - 1);
    gi.set_zero_boundary();
    path.nodes.push_back(std::move(gi));
  }

  double c_now = path.max_over_nodes(ctx);
  double step = cfg.deform_step;
  int stagnant = 0;
  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    rep.outer_iterations = outer + 1;
    double peak = 0.0;
    const int imax = path.argmax_interior(ctx, &peak);
    GridFunction& top = path.nodes[static_cast<std::size_t>(imax)];
    GridFunction grad = action_gradient(ctx, top);
    const double gn = gradient_norm(ctx, grad);
    if (!std::isfinite(peak) || !std::isfinite(gn)) {
      rep.message = "path deformation hit a non-finite state; stopping early";
      break;
    }
    if (gn <= cfg.grad_tol) break;

    // preconditioned descent with backtracking on the path maximum
    GridFunction dir = grad;
    dir *= -1.0 / ctx.h();
    // cap the move at half the node spacing, so a node cannot leapfrog the
    // ridge and tear the sampled maximum off the polygon
    const double total_len = cumulative_length(ctx, path).back();
    const double dir_len = luxemburg_norm(ctx.problem.g, dir, true);
    const double cap = 0.5 * total_len / (m - 1);
    double s = std::min(step, dir_len > 0.0 ? cap / dir_len : step);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      GridFunction trial = top;
      trial.add_scaled(s, dir);
      const double jt = action_value(ctx, trial);
      if (std::isfinite(jt) && jt < peak - 1e-14 * (1.0 + std::fabs(peak))) {
        top = std::move(trial);
        accepted = true;
        step = std::min(s * 1.6, 1e3);
        break;
      }
      s *= 0.5;
    }
    if (!accepted) {
      ++stagnant;
      step = std::max(step * 0.25, 1e-14);
      if (stagnant >= cfg.stagnation_limit) break;
      continue;
    }

    // re-space nodes; keep only if it does not raise the node maximum
    Path redistributed = equidistribute(ctx, path);
    const double c_red = redistributed.max_over_nodes(ctx);
    const double c_raw = path.max_over_nodes(ctx);
    if (c_red <= c_raw) {
      path = std::move(redistributed);
      c_now = c_red;
    } else {
      c_now = c_raw;
    }
    stagnant = 0;
    double dummy = 0.0;
    rep.iterate_history.push_back(path.nodes[static_cast<std::size_t>(path.argmax_interior(ctx, &dummy))]);
    rep.path_max_history.push_back(c_now);
  }

  double cfin = 0.0;
  const int ifin = path.argmax_interior(ctx, &cfin);
  rep.final_path = path.nodes;
  const RefineResult rr = refine_critical_point(ctx, path.nodes[static_cast<std::size_t>(ifin)], cfg);
  rep.u_star = rr.u;
  rep.grad_norm = rr.grad_norm;
  rep.refine_iterations = rr.iterations;
  rep.converged = rr.converged;
  rep.c_est = c_now;
  rep.j_at_ustar = action_value(ctx, rep.u_star);
  rep.residual = euler_lagrange_residual(ctx, rep.u_star);
  rep.u_star_w0_norm = luxemburg_norm(p.g, rep.u_star, true);
  if (!rep.converged && rep.message.empty())
    rep.message = "refinement stalled before reaching grad_tol; best iterate returned";
  return rep;
}

PsDiagnostic ps_diagnostic(const ActionContext& ctx, const std::vector<GridFunction>& iterates) {
  if (iterates.empty()) throw std::invalid_argument("ps_diagnostic: iterates must be nonempty");
  PsDiagnostic out;
  const ProblemSpec& p = ctx.problem;
  const double len = p.interval_length();
  {
    HypothesisSampler hs;
    const StructureEstimates est = estimate_structure(p, hs);
    out.M_estimate = est.M_ps;
  }
  out.f_dual_norm = forcing_dual_norm(p);
  const double c1 = p.w.Lambda * (p.w.theta_V - p.w.theta_F);
  const double c2 = 2.0 * len * (p.w.theta_V - 1.0) * out.f_dual_norm;

  out.min_margin = std::numeric_limits<double>::infinity();
  double prev_ratio = -std::numeric_limits<double>::infinity();
  for (const GridFunction& u : iterates) {
    ctx.check_grid(u);
    PsEntry e;
    const GridFunction grad = action_gradient(ctx, u);
    const double ju = action_value(ctx, u);
    const double jprime_u = action_directional(ctx, grad, u);
    e.value_term = p.w.theta_V * ju - jprime_u;
    const double rg = modular(p.g, u, true);
    const double ndu = luxemburg_norm(p.g, u, true);
    e.lower_bound = c1 * rg - len * out.M_estimate - c2 * ndu;
    e.margin = e.value_term - e.lower_bound;
    e.coercivity_ratio = ndu > 0.0 ? rg / ndu : 0.0;
    out.min_margin = std::min(out.min_margin, e.margin);
    if (e.coercivity_ratio < prev_ratio * (1.0 - 1e-9)) out.ratio_nondecreasing = false;
    prev_ratio = e.coercivity_ratio;
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace mps
