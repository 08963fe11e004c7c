#include "mps/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "mps/orlicz.hpp"
#include "mps/parallel.hpp"
#include "mps/rng.hpp"

namespace mps {

ScalarField ScalarField::constant(double c) {
  ScalarField s;
  s.kind = "constant";
  s.params = {c};
  s.fn = [c](double) { return c; };
  return s;
}

ScalarField ScalarField::poly(double c0, double c1, double k) {
  ScalarField s;
  s.kind = "poly";
  s.params = {c0, c1, k};
  s.fn = [c0, c1, k](double t) { return c0 + c1 * std::pow(std::fabs(t), k); };
  return s;
}

void ProblemSpec::validate() const {
  if (!(a < b)) throw std::invalid_argument("interval.a < interval.b required");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (g.dimension != dim)
    throw std::invalid_argument("gfun.dimension must match the problem dimension");
  if (!(w.theta_F > 0.0)) throw std::invalid_argument("witness.theta_F must be positive");
  if (!(w.theta_V > 1.0)) throw std::invalid_argument("witness.theta_V > 1 required");
  if (!(w.theta_V > w.theta_F)) throw std::invalid_argument("witness.theta_V > witness.theta_F required");
  if (!(w.Lambda > 0.0)) throw std::invalid_argument("witness.Lambda must be positive");
  if (!(w.r0 > 0.0)) throw std::invalid_argument("witness.r0 must be positive");
  if (!(w.rho0 > 0.0)) throw std::invalid_argument("witness.rho0 must be positive");
  if (!F || !F_x || !F_v) throw std::invalid_argument("F and its derivatives must be set");
  if (!V || !V_x) throw std::invalid_argument("V and its gradient must be set");
  if (!f) throw std::invalid_argument("forcing f must be set");
}

// ---------------------------------------------------------------------------
// Catalog.

void set_F_g_of_v(ProblemSpec& p) {
  const GFunctionSpec g = p.g;
  p.F = [g](double, std::span<const double>, std::span<const double> v) { return eval_g(g, v); };
  p.F_x = [](double, std::span<const double> x, std::span<const double>) {
    return Vec(x.size(), 0.0);
  };
  p.F_v = [g](double, std::span<const double>, std::span<const double> v) { return grad_g(g, v); };
  p.F_kind = "g_of_v";
}

void set_F_scaled_g(ProblemSpec& p, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("F.scale must be positive");
  const GFunctionSpec g = p.g;
  p.F = [g, scale](double, std::span<const double>, std::span<const double> v) {
    return scale * eval_g(g, v);
  };
  p.F_x = [](double, std::span<const double> x, std::span<const double>) {
    return Vec(x.size(), 0.0);
  };
  p.F_v = [g, scale](double, std::span<const double>, std::span<const double> v) {
    Vec gr = grad_g(g, v);
    for (double& c : gr) c *= scale;
    return gr;
  };
  p.F_kind = "scaled_g";
}

void set_F_x_modulated(ProblemSpec& p, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("F.eps must be nonnegative");
  const GFunctionSpec g = p.g;
  // s(x) = 1/(1+|x|^2): smooth, bounded, with <grad s, x> <= 0
  auto s_of = [](std::span<const double> x) { return 1.0 / (1.0 + dot(x, x)); };
  p.F = [g, eps, s_of](double, std::span<const double> x, std::span<const double> v) {
    return (1.0 + eps * s_of(x)) * eval_g(g, v);
  };
  p.F_x = [g, eps, s_of](double, std::span<const double> x, std::span<const double> v) {
    const double s = s_of(x);
    const double gv = eval_g(g, v);
    Vec r(x.begin(), x.end());
    const double c = -2.0 * eps * s * s * gv;
    for (double& xi : r) xi *= c;
    return r;
  };
  p.F_v = [g, eps, s_of](double, std::span<const double> x, std::span<const double> v) {
    Vec gr = grad_g(g, v);
    const double c = 1.0 + eps * s_of(x);
    for (double& gi : gr) gi *= c;
    return gr;
  };
  p.F_kind = "x_modulated";
}

void set_V_neg_power(ProblemSpec& p, double kappa, double theta) {
  if (!(theta > 1.0)) throw std::invalid_argument("V.theta must exceed 1");
  if (kappa < 0.0) throw std::invalid_argument("V.kappa must be nonnegative");
  p.V = [kappa, theta](double, std::span<const double> x) {
    return -kappa * std::pow(norm2(x), theta);
  };
  p.V_x = [kappa, theta](double, std::span<const double> x) {
    const double r = norm2(x);
    Vec g(x.size(), 0.0);
    if (r == 0.0) return g;
    const double c = -kappa * theta * std::pow(r, theta - 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * x[i];
    return g;
  };
  p.V_kind = "neg_power";
}

void set_V_well(ProblemSpec& p, double kappa1, double kappa2, double theta) {
  if (!(theta > 2.0)) throw std::invalid_argument("V.theta must exceed 2 for the well potential");
  p.V = [kappa1, kappa2, theta](double, std::span<const double> x) {
    const double r = norm2(x);
    return kappa1 * r * r - kappa2 * std::pow(r, theta);
  };
  p.V_x = [kappa1, kappa2, theta](double, std::span<const double> x) {
    const double r = norm2(x);
    Vec g(x.size(), 0.0);
    const double c = 2.0 * kappa1 - (r > 0.0 ? kappa2 * theta * std::pow(r, theta - 2.0) : 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * x[i];
    return g;
  };
  p.V_kind = "well";
}

void set_f_zero(ProblemSpec& p) {
  const int dim = p.dim;
  p.f = [dim](double) { return Vec(static_cast<std::size_t>(dim), 0.0); };
  p.f_is_zero = true;
  p.f_kind = "zero";
}

void set_f_constant(ProblemSpec& p, Vec value) {
  if (static_cast<int>(value.size()) != p.dim)
    throw std::invalid_argument("f.value has wrong dimension");
  bool zero = true;
  for (double c : value)
    if (c != 0.0) zero = false;
  p.f = [value](double) { return value; };
  p.f_is_zero = zero;
  p.f_kind = "constant";
}

void set_f_samples(ProblemSpec& p, GridFunction samples) {
  if (samples.dim != p.dim) throw std::invalid_argument("f samples have wrong dimension");
  p.f = [samples](double t) { return samples.at(t); };
  p.f_is_zero = false;
  p.f_kind = "samples";
}

LagrangianParts eval_lagrangian(const ProblemSpec& p, double t, std::span<const double> x,
                                std::span<const double> v) {
  try {
    LagrangianParts out;
    out.F_part = p.F(t, x, v);
    out.V_part = p.V(t, x);
    out.f_part = dot(p.f(t), x);
    out.L = out.F_part + out.V_part + out.f_part;
    return out;
  } catch (const std::exception& e) {
    std::string where = "t=" + std::to_string(t) + " x=(";
    for (std::size_t i = 0; i < x.size(); ++i) where += (i ? "," : "") + std::to_string(x[i]);
    where += ") v=(";
    for (std::size_t i = 0; i < v.size(); ++i) where += (i ? "," : "") + std::to_string(v[i]);
    where += ")";
    throw std::runtime_error("Lagrangian evaluation failed at " + where + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Hypothesis battery.

namespace {

struct EvalOut {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;  // false: conjugate failure, sample skipped
};

struct CheckDef {
  std::string name;
  bool strict = false;  // violated iff margin >= 0; otherwise margin > tol
  std::function<SamplePoint(Rng&)> draw;
  std::function<EvalOut(const SamplePoint&)> eval;
};

double margin_tol(const EvalOut& e) { return 1e-12 * (1.0 + std::fabs(e.lhs) + std::fabs(e.rhs)); }

std::vector<CheckDef> make_checks(const ProblemSpec& p, const HypothesisSampler& cfg) {
  const double x_max = cfg.x_max > 0.0 ? cfg.x_max : std::max(10.0 * p.w.r0, 10.0 * p.w.rho0);
  const double v_max = cfg.v_max;
  const int dim = p.dim;
  const double ta = p.a, tb = p.b;
  const Witnesses w = p.w;
  const GFunctionSpec g = p.g;
  SearchConfig search;

  auto draw_txv = [=](Rng& r) {
    SamplePoint s;
    s.t = r.uniform(ta, tb);
    s.x = r.in_ball(dim, x_max);
    s.v = r.in_ball(dim, v_max);
    return s;
  };
  auto draw_outer_x = [=](Rng& r) {
    SamplePoint s;
    s.t = r.uniform(ta, tb);
    s.x = r.unit_vector(dim);
    const double rad = r.uniform(w.r0, std::max(x_max, w.r0 * 2.0));
    for (double& c : s.x) c *= rad;
    return s;
  };

  std::vector<CheckDef> defs;

  defs.push_back({"F1_convexity", false,
                  [=](Rng& r) {
                    SamplePoint s = draw_txv(r);
                    s.v2 = r.in_ball(dim, v_max);
                    return s;
                  },
                  [&p](const SamplePoint& s) {
                    Vec mid = vsum(s.v, s.v2);
                    for (double& c : mid) c *= 0.5;
                    EvalOut e;
                    e.lhs = p.F(s.t, s.x, mid);
                    e.rhs = 0.5 * (p.F(s.t, s.x, s.v) + p.F(s.t, s.x, s.v2));
                    return e;
                  }});

  defs.push_back({"F2_growth_F", false, draw_txv, [&p, g](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = std::fabs(p.F(s.t, s.x, s.v));
                    e.rhs = p.w.a_of_x(norm2(s.x)) * (p.w.b_of_t(s.t) + eval_g(g, s.v));
                    return e;
                  }});

  defs.push_back({"F2_growth_Fx", false, draw_txv, [&p, g](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = norm2(p.F_x(s.t, s.x, s.v));
                    e.rhs = p.w.a_of_x(norm2(s.x)) * (p.w.b_of_t(s.t) + eval_g(g, s.v));
                    return e;
                  }});

  defs.push_back({"F2_growth_Fv", false, draw_txv, [&p, g, search](const SamplePoint& s) {
                    EvalOut e;
                    const ConjugateResult c1 = conjugate_eval(g, p.F_v(s.t, s.x, s.v), search);
                    const ConjugateResult c2 = conjugate_eval(g, grad_g(g, s.v), search);
                    if (!c1.converged || !c2.converged) {
                      e.ok = false;
                      return e;
                    }
                    e.lhs = c1.value;
                    e.rhs = p.w.a_of_x(norm2(s.x)) * (p.w.b_of_t(s.t) + c2.value);
                    return e;
                  }});

  defs.push_back({"F3_ambrosetti_rabinowitz", false, draw_txv, [&p](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = dot(p.F_x(s.t, s.x, s.v), s.x) + dot(p.F_v(s.t, s.x, s.v), s.v);
                    e.rhs = p.w.theta_F * p.F(s.t, s.x, s.v);
                    return e;
                  }});

  defs.push_back({"F4_ellipticity", false, draw_txv, [&p, g](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = p.w.Lambda * eval_g(g, s.v);
                    e.rhs = p.F(s.t, s.x, s.v);
                    return e;
                  }});

  defs.push_back({"F5_zero_at_rest", false, draw_txv, [&p, dim](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = std::fabs(p.F(s.t, s.x, Vec(static_cast<std::size_t>(dim), 0.0)));
                    e.rhs = 0.0;
                    return e;
                  }});

  defs.push_back({"V1_ambrosetti_rabinowitz", false, draw_outer_x, [&p](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = dot(p.V_x(s.t, s.x), s.x);
                    e.rhs = p.w.theta_V * p.V(s.t, s.x);
                    return e;
                  }});

  defs.push_back({"V3_bounded_below_near_zero", false,
                  [=](Rng& r) {
                    SamplePoint s;
                    s.t = r.uniform(ta, tb);
                    s.x = r.in_ball(dim, w.rho0);
                    return s;
                  },
                  [&p](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = -p.w.g_of_t(s.t);
                    e.rhs = p.V(s.t, s.x);
                    return e;
                  }});

  defs.push_back({"V4_negative_outside", true, draw_outer_x, [&p](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = p.V(s.t, s.x);
                    e.rhs = 0.0;
                    return e;
                  }});

  defs.push_back({"subhomogeneity_F", false,
                  [=](Rng& r) {
                    SamplePoint s = draw_txv(r);
                    s.lambda = 1.0 + r.uniform() * (cfg.lambda_max - 1.0);
                    return s;
                  },
                  [&p](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = p.F(s.t, scaled(s.x, s.lambda), scaled(s.v, s.lambda));
                    e.rhs = std::pow(s.lambda, p.w.theta_F) * p.F(s.t, s.x, s.v);
                    return e;
                  }});

  defs.push_back({"subhomogeneity_V", false,
                  [=](Rng& r) {
                    SamplePoint s = draw_outer_x(r);
                    s.lambda = 1.0 + r.uniform() * (cfg.lambda_max - 1.0);
                    return s;
                  },
                  [&p](const SamplePoint& s) {
                    EvalOut e;
                    e.lhs = p.V(s.t, scaled(s.x, s.lambda));
                    e.rhs = std::pow(s.lambda, p.w.theta_V) * p.V(s.t, s.x);
                    return e;
                  }});

  return defs;
}

struct BlockResult {
  double worst_margin = -std::numeric_limits<double>::infinity();
  SamplePoint worst_point;
  double worst_lhs = 0.0, worst_rhs = 0.0;
  long violations = 0;
  long evaluated = 0;
  bool conj_failed = false;
};

}  // namespace

HypothesisReport check_hypotheses(const ProblemSpec& p, const HypothesisSampler& cfg) {
  p.validate();
  HypothesisReport rep;
  const auto defs = make_checks(p, cfg);
  const int nblocks = 64;

  for (std::size_t di = 0; di < defs.size(); ++di) {
    const CheckDef& def = defs[di];
    std::vector<BlockResult> blocks(nblocks);
    const long per_block = (cfg.samples + nblocks - 1) / nblocks;
    parallel_blocks(nblocks, [&](int b) {
      Rng rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (di * 131 + static_cast<std::size_t>(b) + 1)));
      BlockResult& out = blocks[static_cast<std::size_t>(b)];
      const long lo = static_cast<long>(b) * per_block;
      const long hi = std::min(cfg.samples, lo + per_block);
      for (long i = lo; i < hi; ++i) {
        const SamplePoint s = def.draw(rng);
        const EvalOut e = def.eval(s);
        if (!e.ok) {
          out.conj_failed = true;
          continue;
        }
        ++out.evaluated;
        const double m = e.lhs - e.rhs;
        const bool violated = def.strict ? (m >= 0.0) : (m > margin_tol(e));
        if (violated) ++out.violations;
        if (m > out.worst_margin) {
          out.worst_margin = m;
          out.worst_point = s;
          out.worst_lhs = e.lhs;
          out.worst_rhs = e.rhs;
        }
      }
    });

    HypothesisEntry entry;
    entry.name = def.name;
    bool conj_failed = false;
    // deterministic merge in block order
    double worst = -std::numeric_limits<double>::infinity();
    long violations = 0;
    for (const BlockResult& b : blocks) {
      entry.samples += b.evaluated;
      conj_failed = conj_failed || b.conj_failed;
      violations += b.violations;
      if (b.evaluated > 0 && b.worst_margin > worst) {
        worst = b.worst_margin;
        entry.witness = b.worst_point;
        entry.lhs = b.worst_lhs;
        entry.rhs = b.worst_rhs;
        entry.margin = b.worst_margin;
      }
    }
    if (conj_failed) {
      entry.verdict = Verdict::skipped;
      entry.note = "conjugate evaluation failed on at least one sample";
    } else {
      entry.verdict = violations > 0 ? Verdict::violated : Verdict::passed;
    }
    if (entry.verdict == Verdict::violated) ++rep.violations;
    rep.entries.push_back(std::move(entry));
  }

  // V2: a quadrature identity, not a sampling check
  {
    HypothesisEntry entry;
    entry.name = "V2_zero_mean_at_origin";
    const int cells = 2048;
    const double h = p.interval_length() / cells;
    const Vec origin(static_cast<std::size_t>(p.dim), 0.0);
    double integral = 0.0, absint = 0.0;
    for (int k = 0; k <= cells; ++k) {
      const double t = p.a + h * k;
      const double val = p.V(t, origin);
      const double wgt = (k == 0 || k == cells) ? 0.5 : 1.0;
      integral += wgt * val;
      absint += wgt * std::fabs(val);
    }
    integral *= h;
    absint *= h;
    entry.samples = cells + 1;
    entry.lhs = std::fabs(integral);
    entry.rhs = 0.0;
    entry.margin = entry.lhs;
    entry.verdict =
        entry.lhs <= 1e-10 * (1.0 + absint) ? Verdict::passed : Verdict::violated;
    if (entry.verdict == Verdict::violated) ++rep.violations;
    rep.entries.push_back(std::move(entry));
  }

  // (f): finiteness of the conjugate norm of the forcing
  {
    HypothesisEntry entry;
    entry.name = "f_dual_norm_finite";
    bool ok = true;
    const double nf = forcing_dual_norm(p, 512, &ok);
    entry.lhs = nf;
    entry.rhs = std::numeric_limits<double>::infinity();
    entry.samples = 513;
    if (!ok) {
      entry.verdict = Verdict::skipped;
      entry.note = "conjugate evaluation failed while computing the norm";
    } else {
      entry.verdict = std::isfinite(nf) ? Verdict::passed : Verdict::violated;
      entry.margin = std::isfinite(nf) ? 0.0 : 1.0;
    }
    if (entry.verdict == Verdict::violated) ++rep.violations;
    rep.entries.push_back(std::move(entry));
  }

  rep.all_passed = rep.violations == 0;
  return rep;
}

double replay_margin(const ProblemSpec& p, const std::string& hypothesis, const SamplePoint& s) {
  HypothesisSampler cfg;
  const auto defs = make_checks(p, cfg);
  for (const auto& def : defs) {
    if (def.name == hypothesis) {
      const EvalOut e = def.eval(s);
      if (!e.ok) return std::numeric_limits<double>::quiet_NaN();
      return e.lhs - e.rhs;
    }
  }
  throw std::invalid_argument("replay_margin: unknown hypothesis " + hypothesis);
}

const HypothesisEntry* HypothesisReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

StructureEstimates estimate_structure(const ProblemSpec& p, const HypothesisSampler& cfg) {
  StructureEstimates est;
  est.theta_F_suggested = -std::numeric_limits<double>::infinity();
  est.theta_V_suggested = std::numeric_limits<double>::infinity();
  est.Lambda_suggested = std::numeric_limits<double>::infinity();
  const double x_max = cfg.x_max > 0.0 ? cfg.x_max : std::max(10.0 * p.w.r0, 10.0 * p.w.rho0);
  Rng rng(cfg.seed ^ 0xE57A7EULL);
  for (long i = 0; i < cfg.samples; ++i) {
    const double t = rng.uniform(p.a, p.b);
    const Vec x = rng.in_ball(p.dim, x_max);
    const Vec v = rng.in_ball(p.dim, cfg.v_max);
    const double Fv = p.F(t, x, v);
    const double Gv = eval_g(p.g, v);
    if (Fv > 1e-12 * (1.0 + dot(v, v))) {
      const double num = dot(p.F_x(t, x, v), x) + dot(p.F_v(t, x, v), v);
      est.theta_F_suggested = std::max(est.theta_F_suggested, num / Fv);
    }
    if (Gv > 1e-300) est.Lambda_suggested = std::min(est.Lambda_suggested, Fv / Gv);

    // outer ball for theta_V
    Vec xo = rng.unit_vector(p.dim);
    const double rad = rng.uniform(p.w.r0, std::max(x_max, 2.0 * p.w.r0));
    for (double& c : xo) c *= rad;
    const double Vv = p.V(t, xo);
    if (Vv < -1e-300) est.theta_V_suggested = std::min(est.theta_V_suggested, dot(p.V_x(t, xo), xo) / Vv);

    // inner ball suprema
    const Vec xi = rng.in_ball(p.dim, p.w.r0);
    const double Vi = p.V(t, xi);
    est.M_ps = std::max(est.M_ps, std::fabs(p.w.theta_V * Vi - dot(p.V_x(t, xi), xi)));
    est.M_valley = std::max(est.M_valley, std::fabs(Vi));
    ++est.samples;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Existence gates.

double witness_g_integral(const ProblemSpec& p, int cells) {
  const double h = p.interval_length() / cells;
  double s = 0.5 * (p.w.g_of_t(p.a) + p.w.g_of_t(p.b));
  for (int k = 1; k < cells; ++k) s += p.w.g_of_t(p.a + h * k);
  return s * h;
}

double forcing_dual_norm(const ProblemSpec& p, int cells, bool* ok) {
  if (ok) *ok = true;
  if (p.f_is_zero) return 0.0;
  GridFunction fs = GridFunction::from_callable(p.a, p.b, cells, p.dim, p.f);
  return dual_luxemburg_norm(p.g, fs, {}, ok);
}

GateResult check_theorem_conditions(const ProblemSpec& p, const EmbeddingData& emb,
                                    const SimonenkoIndices& idx) {
  p.validate();
  GateResult out;
  out.C_inf_G = emb.C_inf_G;
  out.rho = p.w.rho0 / emb.C_inf_G;
  out.p_G = idx.p_G;
  out.q_G = idx.q_G;
  out.g_integral = witness_g_integral(p);
  bool ok = true;
  out.f_dual_norm = forcing_dual_norm(p, 512, &ok);
  const double len = p.interval_length();

  out.A.applicable = p.w.rho0 >= emb.C_inf_G;
  out.A.lhs = out.g_integral;
  out.A.rhs = (p.w.Lambda - 2.0 * len * out.f_dual_norm) * out.rho;
  if (!ok) {
    out.A.skipped = true;
    out.A.note = "conjugate norm of f did not converge";
  } else {
    out.A.holds = out.A.applicable && out.A.lhs < out.A.rhs;
  }

  out.B.applicable = p.g.regime == Regime::global;
  const bool low_branch = p.w.rho0 <= emb.C_inf_G;
  out.B.branch = low_branch ? "q_G" : "p_G";
  const double expo = low_branch ? idx.q_G : idx.p_G;
  out.B.lhs = out.g_integral + 2.0 * len * out.f_dual_norm * out.rho;
  out.B.rhs = p.w.Lambda * std::pow(out.rho, expo);
  if (!ok) {
    out.B.skipped = true;
    out.B.note = "conjugate norm of f did not converge";
  } else {
    out.B.holds = out.B.applicable && out.B.lhs < out.B.rhs;
  }
  return out;
}

}  // namespace mps
