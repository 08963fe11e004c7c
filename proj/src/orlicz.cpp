#include "mps/orlicz.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace mps {

namespace {

// trapezoid weights: h/2 at the ends, h inside
double trapezoid_of_nodes(const GridFunction& u, const std::function<double(std::span<const double>)>& f) {
  const double h = u.h();
  double s = 0.5 * (f(u.node(0)) + f(u.node(u.n)));
  for (int k = 1; k < u.n; ++k) s += f(u.node(k));
  return s * h;
}

double midpoint_of_cells(const GridFunction& u, const std::function<double(std::span<const double>)>& f) {
  const double h = u.h();
  double s = 0.0;
  for (int k = 0; k < u.n; ++k) {
    const Vec d = u.cell_derivative(k);
    s += f(d);
  }
  return s * h;
}

bool is_identically_zero(const GridFunction& u) {
  for (double v : u.values)
    if (v != 0.0) return false;
  return true;
}

// Shared bisection for any modular functor. R must be continuous and
// strictly decreasing in lambda wherever it matters.
double luxemburg_bisect(const std::function<double(double)>& modular_at, double r1) {
  // convexity gives R(u / (1 + R(u))) <= R(u) / (1 + R(u)) < 1
  double hi = 1.0 + r1;
  double lo = 1e-12;
  int guard = 0;
  while (modular_at(hi) > 1.0 && guard++ < 200) hi *= 2.0;
  guard = 0;
  while (modular_at(lo) <= 1.0 && guard++ < 200) {
    hi = lo;
    lo *= 0.25;
    if (lo < 1e-300) return hi;  // vanishingly small but nonzero function
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular_at(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-10 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double modular(const GFunctionSpec& spec, const GridFunction& u, bool of_derivative) {
  u.validate();
  if (of_derivative)
    return midpoint_of_cells(u, [&](std::span<const double> d) { return eval_g(spec, d); });
  return trapezoid_of_nodes(u, [&](std::span<const double> x) { return eval_g(spec, x); });
}

double luxemburg_norm(const GFunctionSpec& spec, const GridFunction& u, bool of_derivative) {
  if (is_identically_zero(u)) return 0.0;
  const double r1 = modular(spec, u, of_derivative);
  if (r1 == 0.0) return 0.0;  // derivative of a constant
  GridFunction scratch = u;
  auto modular_at = [&](double lambda) {
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < u.values.size(); ++i) scratch.values[i] = u.values[i] * inv;
    return modular(spec, scratch, of_derivative);
  };
  return luxemburg_bisect(modular_at, r1);
}

double dual_luxemburg_norm(const GFunctionSpec& spec, const GridFunction& v,
                           const SearchConfig& search, bool* ok) {
  if (ok) *ok = true;
  if (is_identically_zero(v)) return 0.0;
  bool failed = false;
  auto conj = [&](std::span<const double> y) {
    const ConjugateResult c = conjugate_eval(spec, y, search);
    if (!c.converged) failed = true;
    return c.value;
  };
  GridFunction scratch = v;
  auto modular_at = [&](double lambda) {
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < v.values.size(); ++i) scratch.values[i] = v.values[i] * inv;
    return trapezoid_of_nodes(scratch, conj);
  };
  const double r1 = modular_at(1.0);
  const double norm = (r1 == 0.0) ? 0.0 : luxemburg_bisect(modular_at, r1);
  if (failed && ok) *ok = false;
  return norm;
}

NormBundle norm_bundle(const GFunctionSpec& spec, const GridFunction& u) {
  NormBundle nb;
  nb.lux_u = luxemburg_norm(spec, u, false);
  nb.lux_du = luxemburg_norm(spec, u, true);
  nb.w_norm = nb.lux_u + nb.lux_du;
  nb.w0_norm = nb.lux_du;
  nb.sup_norm = u.sup_norm();
  return nb;
}

namespace {

void push(InequalityReport& rep, InequalityCheck c) {
  c.margin = c.rhs - c.lhs;
  if (!c.skipped) {
    c.passed = c.margin >= -1e-12 * (1.0 + std::fabs(c.lhs) + std::fabs(c.rhs));
    if (!c.passed) ++rep.violations;
  } else {
    c.passed = false;
    ++rep.skipped;
  }
  rep.checks.push_back(std::move(c));
}

}  // namespace

InequalityReport check_inequalities(const GFunctionSpec& spec,
                                    const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
                                    const EmbeddingData& emb) {
  InequalityReport rep;
  const SimonenkoIndices idx = simonenko_indices(spec);

  int i = 0;
  for (const auto& [u, v] : pairs) {
    const double h = u.h();
    // Holder: |int <u,v>| <= 2 ||u||_G ||v||_G*
    {
      double s = 0.5 * (dot(u.node(0), v.node(0)) + dot(u.node(u.n), v.node(v.n)));
      for (int k = 1; k < u.n; ++k) s += dot(u.node(k), v.node(k));
      s *= h;
      bool ok = true;
      const double un = luxemburg_norm(spec, u);
      const double vn = dual_luxemburg_norm(spec, v, {}, &ok);
      InequalityCheck c{"holder", i, std::fabs(s), 2.0 * un * vn};
      if (!ok) {
        c.skipped = true;
        c.note = "conjugate norm did not converge";
      }
      push(rep, c);
    }
    // Poincare (zero-boundary only)
    if (u.zero_boundary) {
      const double lhs = luxemburg_norm(spec, u, false);
      const double rhs = (u.b - u.a) * luxemburg_norm(spec, u, true);
      push(rep, {"poincare", i, lhs, rhs});
    }
    // modular vs norm
    {
      const double nu = luxemburg_norm(spec, u, false);
      const double ru = modular(spec, u, false);
      if (nu > 0.0) {
        if (spec.regime == Regime::global) {
          if (nu <= 1.0)
            push(rep, {"modular_power_qG", i, std::pow(nu, idx.q_G), ru});
          else
            push(rep, {"modular_power_pG", i, std::pow(nu, idx.p_G), ru});
        }
        if (nu > 1.0)
          push(rep, {"modular_above_norm", i, nu, ru});
        else
          push(rep, {"modular_below_norm", i, ru, nu});
      }
    }
    // sup-norm embedding
    {
      const double lhs = u.sup_norm();
      const double rhs =
          emb.C_inf_G * (luxemburg_norm(spec, u, false) + luxemburg_norm(spec, u, true));
      push(rep, {"embedding", i, lhs, rhs});
    }
    ++i;
  }
  return rep;
}

}  // namespace mps
