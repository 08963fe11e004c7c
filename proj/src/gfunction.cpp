#include "mps/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mps/rng.hpp"

namespace mps {

namespace {

void validate_params(const GFunctionSpec& s) {
  if (s.dimension < 1) throw std::invalid_argument("gfun: dimension must be >= 1");
  if (s.kind == GKind::custom) {
    if (!s.custom_eval) throw std::invalid_argument("gfun: custom kind requires an evaluator");
    return;
  }
  const std::size_t want =
      (s.kind == GKind::sum_power) ? static_cast<std::size_t>(s.dimension) : 1u;
  if (s.exponents.size() != want)
    throw std::invalid_argument("gfun: exponent count does not match kind/dimension");
  if (s.coefficients.size() != want)
    throw std::invalid_argument("gfun: coefficient count does not match kind/dimension");
  for (double p : s.exponents)
    if (!(p > 1.0)) throw std::invalid_argument("gfun: exponents must satisfy p > 1");
  for (double c : s.coefficients)
    if (!(c > 0.0)) throw std::invalid_argument("gfun: coefficients must be positive");
}

}  // namespace

GFunctionSpec GFunctionSpec::power(double p, double coef, int dim, Regime regime) {
  GFunctionSpec s;
  s.kind = GKind::power;
  s.dimension = dim;
  s.exponents = {p};
  s.coefficients = {coef};
  s.regime = regime;
  validate_params(s);
  return s;
}

GFunctionSpec GFunctionSpec::sum_power(std::vector<double> p, std::vector<double> coef,
                                       Regime regime) {
  GFunctionSpec s;
  s.kind = GKind::sum_power;
  s.dimension = static_cast<int>(p.size());
  s.exponents = std::move(p);
  s.coefficients = std::move(coef);
  s.regime = regime;
  validate_params(s);
  return s;
}

GFunctionSpec GFunctionSpec::power_log(double p, double coef, int dim, Regime regime) {
  GFunctionSpec s;
  s.kind = GKind::power_log;
  s.dimension = dim;
  s.exponents = {p};
  s.coefficients = {coef};
  s.regime = regime;
  validate_params(s);
  return s;
}

GFunctionSpec GFunctionSpec::custom(int dim, std::function<double(std::span<const double>)> eval,
                                    std::function<Vec(std::span<const double>)> grad,
                                    Regime regime) {
  GFunctionSpec s;
  s.kind = GKind::custom;
  s.dimension = dim;
  s.custom_eval = std::move(eval);
  s.custom_grad = std::move(grad);
  s.regime = regime;
  validate_params(s);
  return s;
}

double eval_g(const GFunctionSpec& spec, std::span<const double> x) {
  switch (spec.kind) {
    case GKind::power: {
      const double r = norm2(x);
      return spec.coefficients[0] * std::pow(r, spec.exponents[0]);
    }
    case GKind::sum_power: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        s += spec.coefficients[i] * std::pow(std::fabs(x[i]), spec.exponents[i]);
      return s;
    }
    case GKind::power_log: {
      const double r = norm2(x);
      return spec.coefficients[0] * std::pow(r, spec.exponents[0]) * std::log1p(r);
    }
    case GKind::custom:
      return spec.custom_eval(x);
  }
  return 0.0;
}

Vec grad_g(const GFunctionSpec& spec, std::span<const double> x) {
  const int n = spec.dimension;
  Vec g(static_cast<std::size_t>(n), 0.0);
  switch (spec.kind) {
    case GKind::power: {
      const double r = norm2(x);
      if (r == 0.0) return g;  // even function, minimum at the origin
      const double s = spec.coefficients[0] * spec.exponents[0] * std::pow(r, spec.exponents[0] - 2.0);
      for (int i = 0; i < n; ++i) g[i] = s * x[i];
      return g;
    }
    case GKind::sum_power: {
      for (int i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a == 0.0) continue;
        g[i] = spec.coefficients[i] * spec.exponents[i] * std::pow(a, spec.exponents[i] - 1.0) *
               (x[i] > 0.0 ? 1.0 : -1.0);
      }
      return g;
    }
    case GKind::power_log: {
      const double r = norm2(x);
      if (r == 0.0) return g;
      const double p = spec.exponents[0];
      const double c = spec.coefficients[0];
      // d/dr of r^p log(1+r), divided by r
      const double s = c * (p * std::pow(r, p - 2.0) * std::log1p(r) + std::pow(r, p - 1.0) / (1.0 + r));
      for (int i = 0; i < n; ++i) g[i] = s * x[i];
      return g;
    }
    case GKind::custom: {
      if (spec.custom_grad) return spec.custom_grad(x);
      // central differences for user-supplied G without a gradient
      Vec xs(x.begin(), x.end());
      const double step = 1e-6 * (1.0 + norm2(x));
      for (int i = 0; i < n; ++i) {
        const double save = xs[i];
        xs[i] = save + step;
        const double fp = spec.custom_eval(xs);
        xs[i] = save - step;
        const double fm = spec.custom_eval(xs);
        xs[i] = save;
        g[i] = (fp - fm) / (2.0 * step);
      }
      return g;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// 1D concave maximization: expanding bracket, then golden section.

namespace {

struct Line1D {
  const std::function<double(double)>& f;
  long evals = 0;
  double operator()(double s) {
    ++evals;
    return f(s);
  }
};

constexpr double kGolden = 0.6180339887498948482;

// Golden-section maximization on [lo, hi]; assumes a concave (unimodal) f.
double golden_max(Line1D& f, double lo, double hi, int max_iters, double* arg_out) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iters; ++it) {
    if (hi - lo <= 1e-12 + 1e-10 * (std::fabs(lo) + std::fabs(hi))) break;
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    if (arg_out) *arg_out = x1;
    return f1;
  }
  if (arg_out) *arg_out = x2;
  return f2;
}

// Maximizes a concave f over s >= 0 with f(0) known. Returns false when the
// expansion budget is exhausted before the objective turns over.
bool ray_max(const std::function<double(double)>& fn, double f0, double step, int max_expansions,
             int max_iters, double* best_s, double* best_f, long* evals) {
  Line1D f{fn};
  double s = step;
  double fs = f(s);
  // shrink until we are at least as good as the origin or the step is tiny
  int guard = 0;
  while (fs < f0 && s > 1e-300 && guard < max_expansions) {
    s *= 0.5;
    fs = f(s);
    ++guard;
  }
  if (fs < f0) {
    // maximum is at (or numerically indistinguishable from) the origin
    *best_s = 0.0;
    *best_f = f0;
    *evals += f.evals;
    return true;
  }
  // expand until the objective decreases
  double s_prev = 0.0, f_prev = f0;
  int k = 0;
  for (; k < max_expansions; ++k) {
    const double s_next = s * 2.0;
    const double f_next = f(s_next);
    if (!(f_next >= fs)) {
      // maximum inside [s_prev, s_next]
      double arg = s;
      const double val = golden_max(f, s_prev, s_next, max_iters, &arg);
      *best_s = arg;
      *best_f = std::max(val, std::max(fs, f_prev));
      if (fs > val && fs >= f_prev) *best_s = s;
      if (f_prev > val && f_prev > fs) *best_s = s_prev;
      *evals += f.evals;
      return true;
    }
    s_prev = s;
    f_prev = fs;
    s = s_next;
    fs = f_next;
  }
  *best_s = s;
  *best_f = fs;
  *evals += f.evals;
  return false;
}

}  // namespace

ConjugateResult conjugate_eval(const GFunctionSpec& spec, std::span<const double> y,
                               const SearchConfig& search) {
  ConjugateResult res;
  const int n = spec.dimension;
  res.maximizer.assign(static_cast<std::size_t>(n), 0.0);
  const double ynorm = norm2(y);
  if (ynorm == 0.0) return res;  // sup of -G is attained at 0

  auto phi = [&](std::span<const double> x) { return dot(x, y) - eval_g(spec, x); };

  // Stage 1: maximize along the ray through y.
  Vec dir = scaled(y, 1.0 / ynorm);
  Vec x(static_cast<std::size_t>(n), 0.0);
  {
    auto along = [&](double s) {
      Vec p = scaled(dir, s);
      return phi(p);
    };
    double s_best = 0.0, f_best = 0.0;
    const bool ok = ray_max(along, 0.0, search.initial_step * (1.0 + ynorm), search.max_expansions,
                            search.max_iters, &s_best, &f_best, &res.evals);
    if (!ok) {
      res.converged = false;
      res.value = f_best;
      res.maximizer = scaled(dir, s_best);
      res.note = "bracket expansion budget exhausted along the ray";
      return res;
    }
    x = scaled(dir, s_best);
    res.value = f_best;
  }

  // Stage 2: cyclic coordinate refinement. Each restriction of the concave
  // objective to a coordinate line is concave, so 1D brackets apply.
  for (int sweep = 0; sweep < search.max_sweeps && n > 0; ++sweep) {
    const double before = res.value;
    for (int i = 0; i < n; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      auto along = [&](double t) {
        Vec p(x);
        p[static_cast<std::size_t>(i)] = xi + t;
        return phi(p);
      };
      const double f0 = res.value;
      double sp = 0.0, fp = f0, sm = 0.0, fm = f0;
      const double step = search.initial_step * (1.0 + std::fabs(xi));
      const bool okp = ray_max(along, f0, step, search.max_expansions, search.max_iters, &sp, &fp,
                               &res.evals);
      auto along_neg = [&](double t) { return along(-t); };
      const bool okm = ray_max(along_neg, f0, step, search.max_expansions, search.max_iters, &sm,
                               &fm, &res.evals);
      if (!okp || !okm) {
        res.converged = false;
        res.note = "bracket expansion budget exhausted in coordinate refinement";
      }
      if (fp >= fm && fp > res.value) {
        x[static_cast<std::size_t>(i)] = xi + sp;
        res.value = fp;
      } else if (fm > res.value) {
        x[static_cast<std::size_t>(i)] = xi - sm;
        res.value = fm;
      }
    }
    if (res.value - before <= search.tol * (1.0 + std::fabs(res.value))) break;
  }
  res.maximizer = x;
  if (res.value < 0.0) res.value = 0.0;  // G* >= -G(0) = 0
  return res;
}

// ---------------------------------------------------------------------------
// Direction sets and samplers.

int default_direction_count(int dim) {
  if (dim <= 1) return 2;
  if (dim == 2) return 64;
  return 256;
}

std::vector<Vec> sphere_directions(int dim, int count, std::uint64_t seed) {
  if (count <= 0) count = default_direction_count(dim);
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  // both signed axes first, so axis-attained extremes are always sampled
  for (int i = 0; i < dim; ++i) {
    Vec e(static_cast<std::size_t>(dim), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    dirs.push_back(e);
    e[static_cast<std::size_t>(i)] = -1.0;
    dirs.push_back(e);
  }
  if (dim == 2) {
    const int m = std::max(count, 8);
    for (int k = 0; k < m; ++k) {
      const double a = 6.283185307179586476925286766559 * k / m;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  if (dim == 3) {
    // Fibonacci sphere
    const int m = std::max(count, 32);
    const double ga = 2.399963229728653;  // golden angle
    for (int k = 0; k < m; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / m;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = ga * k;
      dirs.push_back({r * std::cos(a), r * std::sin(a), z});
    }
    return dirs;
  }
  Rng rng(seed);
  for (int k = 0; k < count; ++k) dirs.push_back(rng.unit_vector(dim));
  return dirs;
}

namespace {

std::vector<double> log_radii(double lo, double hi, int n) {
  std::vector<double> r(static_cast<std::size_t>(n));
  if (n == 1) {
    r[0] = lo;
    return r;
  }
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    r[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return r;
}

}  // namespace

SimonenkoIndices simonenko_indices(const GFunctionSpec& spec, const SamplerConfig& sampler) {
  SimonenkoIndices out;
  out.p_G = std::numeric_limits<double>::infinity();
  out.q_G = -std::numeric_limits<double>::infinity();
  const auto dirs = sphere_directions(spec.dimension, sampler.directions, sampler.seed);
  const auto radii = log_radii(sampler.radius_min, sampler.radius_max, sampler.radii);
  for (double r : radii) {
    for (const Vec& d : dirs) {
      Vec x = scaled(d, r);
      const double gx = eval_g(spec, x);
      if (!(gx > 0.0) || !std::isfinite(gx)) {
        ++out.skipped;  // degenerate direction at this radius
        continue;
      }
      const Vec gr = grad_g(spec, x);
      const double ratio = dot(x, gr) / gx;
      if (!std::isfinite(ratio)) {
        ++out.skipped;
        continue;
      }
      if (ratio < out.p_G) {
        out.p_G = ratio;
        out.attained_min = x;
      }
      if (ratio > out.q_G) {
        out.q_G = ratio;
        out.attained_max = x;
      }
    }
  }
  if (out.skipped > 0) out.note = "degenerate samples skipped (G = 0 off the origin)";
  if (!(out.p_G > 1.0))
    out.note += std::string(out.note.empty() ? "" : "; ") +
                "sampled p_G <= 1: spec violates the index bounds of a valid G-function";
  return out;
}

DoublingProbe delta2_nabla2_probe(const GFunctionSpec& spec, const SamplerConfig& sampler) {
  DoublingProbe out;
  const bool at_inf = spec.regime == Regime::at_infinity;
  const double rmin = at_inf ? std::max(1.0, sampler.radius_min) : sampler.radius_min;
  out.radius_min_used = rmin;
  const auto dirs = sphere_directions(spec.dimension, sampler.directions, sampler.seed);
  const auto radii = log_radii(rmin, sampler.radius_max, sampler.radii);

  std::vector<double> per_radius(radii.size(), 0.0);
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    for (const Vec& d : dirs) {
      Vec x = scaled(d, radii[ri]);
      const double gx = eval_g(spec, x);
      if (!(gx > 0.0)) continue;
      Vec x2 = scaled(d, 2.0 * radii[ri]);
      const double ratio = eval_g(spec, x2) / gx;
      per_radius[ri] = std::max(per_radius[ri], ratio);
      if (ratio > out.delta2_constant) {
        out.delta2_constant = ratio;
        out.delta2_at = x;
      }
    }
  }
  // growth heuristic: the sup sits at the largest radius and is still rising
  if (radii.size() >= 8) {
    const double tail = per_radius.back();
    const double earlier = per_radius[radii.size() - radii.size() / 4 - 1];
    if (tail >= out.delta2_constant * (1.0 - 1e-12) && tail > 1.05 * earlier)
      out.delta2_growth_suspected = true;
  }

  // conjugate side, on a reduced and clipped sample set
  SearchConfig search;
  const int n_r = std::min(sampler.radii, 40);
  const double yr_min = at_inf ? 1.0 : std::max(sampler.radius_min, 1e-3);
  const double yr_max = std::min(sampler.radius_max, 1e3);
  const auto yradii = log_radii(yr_min, yr_max, n_r);
  std::vector<Vec> ydirs = dirs;
  if (static_cast<int>(ydirs.size()) > 16) ydirs.resize(16);
  std::vector<double> per_yradius(yradii.size(), 0.0);
  for (std::size_t ri = 0; ri < yradii.size(); ++ri) {
    for (const Vec& d : ydirs) {
      Vec y = scaled(d, yradii[ri]);
      const ConjugateResult c1 = conjugate_eval(spec, y, search);
      Vec y2 = scaled(d, 2.0 * yradii[ri]);
      const ConjugateResult c2 = conjugate_eval(spec, y2, search);
      if (!c1.converged || !c2.converged) {
        out.nabla2_ok = false;
        out.note = "conjugate evaluation failed during the dual probe";
        continue;
      }
      if (!(c1.value > 0.0)) continue;
      const double ratio = c2.value / c1.value;
      per_yradius[ri] = std::max(per_yradius[ri], ratio);
      if (ratio > out.nabla2_constant) {
        out.nabla2_constant = ratio;
        out.nabla2_at = y;
      }
    }
  }
  if (yradii.size() >= 8) {
    const double tail = per_yradius.back();
    const double earlier = per_yradius[yradii.size() - yradii.size() / 4 - 1];
    if (tail >= out.nabla2_constant * (1.0 - 1e-12) && tail > 1.05 * earlier)
      out.nabla2_growth_suspected = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding constant via the convex minorant.

namespace {

struct RadialSample {
  double r;
  double v;
};

double radial_min(const GFunctionSpec& spec, const std::vector<Vec>& dirs, double r) {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec& d : dirs) {
    Vec x = scaled(d, r);
    m = std::min(m, eval_g(spec, x));
  }
  return m;
}

// Lower convex hull (monotone chain) of samples sorted by radius.
std::vector<RadialSample> lower_hull(std::vector<RadialSample> pts) {
  std::sort(pts.begin(), pts.end(), [](const RadialSample& a, const RadialSample& b) {
    return a.r < b.r;
  });
  // drop duplicate radii, keeping the smaller value
  std::vector<RadialSample> uniq;
  for (const auto& p : pts) {
    if (!uniq.empty() && std::fabs(uniq.back().r - p.r) <= 1e-15 * (1.0 + p.r)) {
      uniq.back().v = std::min(uniq.back().v, p.v);
      continue;
    }
    uniq.push_back(p);
  }
  std::vector<RadialSample> hull;
  for (const auto& p : uniq) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      const double cross = (b.r - a.r) * (p.v - a.v) - (b.v - a.v) * (p.r - a.r);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  // clamp to nondecreasing (a convex minorant through (0,0) already is)
  for (std::size_t i = 1; i < hull.size(); ++i)
    hull[i].v = std::max(hull[i].v, hull[i - 1].v);
  return hull;
}

// Inverts the piecewise-linear hull at level tau. Requires the hull maximum
// to exceed tau. Reports whether the crossing chord joins two radii that are
// adjacent in the sample set (a refinable segment, as opposed to a bridge
// over a nonconvex stretch where the chord itself is exact).
bool invert_hull(const std::vector<RadialSample>& hull, const std::vector<double>& sample_radii,
                 double tau, double* r_out, double* seg_lo, double* seg_hi, bool* adjacent) {
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (a.v <= tau && tau <= b.v && b.v > a.v) {
      const double t = (tau - a.v) / (b.v - a.v);
      *r_out = a.r + t * (b.r - a.r);
      *seg_lo = a.r;
      *seg_hi = b.r;
      int inside = 0;
      for (double r : sample_radii)
        if (r > a.r * (1.0 + 1e-14) && r < b.r * (1.0 - 1e-14)) ++inside;
      *adjacent = inside == 0;
      return true;
    }
  }
  return false;
}

}  // namespace

double EmbeddingData::minorant_at(double r) const {
  if (minorant_samples.empty()) return 0.0;
  if (r <= minorant_samples.front().first) {
    // first vertex is (0, 0); interpolate from the origin
    const auto& b = minorant_samples.front();
    return b.first > 0.0 ? b.second * (r / b.first) : b.second;
  }
  for (std::size_t i = 0; i + 1 < minorant_samples.size(); ++i) {
    const auto& a = minorant_samples[i];
    const auto& b = minorant_samples[i + 1];
    if (r <= b.first) {
      const double t = (r - a.first) / (b.first - a.first);
      return a.second + t * (b.second - a.second);
    }
  }
  return minorant_samples.back().second;
}

EmbeddingData embedding_constant(const GFunctionSpec& spec, double interval_length,
                                 const SamplerConfig& sampler) {
  if (!(interval_length > 0.0))
    throw std::invalid_argument("embedding_constant: interval length must be positive");
  const double tau = 1.0 / interval_length;
  const auto dirs = sphere_directions(spec.dimension, sampler.directions, sampler.seed);

  double rmax = sampler.radius_max;
  std::vector<double> radii;
  std::vector<RadialSample> samples;
  auto add_radius = [&](double r) {
    radii.push_back(r);
    samples.push_back({r, radial_min(spec, dirs, r)});
  };
  samples.push_back({0.0, 0.0});
  radii.push_back(0.0);
  for (double r : log_radii(sampler.radius_min, rmax, sampler.radii)) add_radius(r);

  // extend the radius range until the hull reaches the target level
  int extensions = 0;
  auto hull = lower_hull(samples);
  while (hull.back().v < tau) {
    if (++extensions > 8)
      throw std::runtime_error(
          "embedding_constant: radius extension budget exhausted before reaching 1/|I|");
    const double lo = rmax;
    rmax *= 16.0;
    for (double r : log_radii(lo * 1.5, rmax, 32)) add_radius(r);
    hull = lower_hull(samples);
  }

  // refine the crossing segment while it joins adjacent samples
  double r_star = 0.0, seg_lo = 0.0, seg_hi = 0.0;
  bool adjacent = false;
  for (int round = 0; round < 80; ++round) {
    if (!invert_hull(hull, radii, tau, &r_star, &seg_lo, &seg_hi, &adjacent))
      throw std::runtime_error("embedding_constant: hull inversion failed");
    if (!adjacent) break;  // bridging chord: the hull is exact there
    if (seg_hi - seg_lo <= 1e-13 * (1.0 + seg_hi)) break;
    for (int k = 1; k <= 6; ++k) add_radius(seg_lo + (seg_hi - seg_lo) * k / 7.0);
    hull = lower_hull(samples);
  }

  EmbeddingData out;
  out.interval_length = interval_length;
  out.minorant_inverse = r_star;
  out.C_inf_G = std::max(1.0, interval_length) * r_star;
  out.minorant_samples.reserve(hull.size());
  for (const auto& p : hull) out.minorant_samples.emplace_back(p.r, p.v);
  return out;
}

ShapeProbe shape_probe(const GFunctionSpec& spec, const SamplerConfig& sampler) {
  ShapeProbe out;
  const auto dirs = sphere_directions(spec.dimension, sampler.directions, sampler.seed);
  const auto radii = log_radii(sampler.radius_min, sampler.radius_max, std::min(sampler.radii, 48));
  Rng rng(sampler.seed);

  if (std::fabs(eval_g(spec, Vec(static_cast<std::size_t>(spec.dimension), 0.0))) > 1e-14) {
    out.convex_ok = false;
    out.note = "G(0) != 0";
  }
  for (const Vec& d : dirs) {
    double prev_slope = 0.0;
    bool first = true;
    for (double r : radii) {
      Vec x = scaled(d, r);
      const double gx = eval_g(spec, x);
      const double gmx = eval_g(spec, scaled(d, -r));
      if (std::fabs(gx - gmx) > 1e-9 * (1.0 + std::fabs(gx))) out.even_ok = false;
      const double slope = gx / r;
      if (!first && slope < prev_slope * (1.0 - 1e-9)) out.superlinear_ok = false;
      prev_slope = slope;
      first = false;
    }
    // superlinearity also needs the last slope to dominate the first by a
    // margin; equality throughout would mean linear growth
    const double s_lo = eval_g(spec, scaled(d, radii.front())) / radii.front();
    const double s_hi = eval_g(spec, scaled(d, radii.back())) / radii.back();
    if (!(s_hi > 10.0 * s_lo || s_lo == 0.0)) out.superlinear_ok = false;
  }
  for (int k = 0; k < 256; ++k) {
    Vec x = rng.in_ball(spec.dimension, 10.0);
    Vec y = rng.in_ball(spec.dimension, 10.0);
    Vec mid = vsum(x, y);
    for (double& v : mid) v *= 0.5;
    const double lhs = eval_g(spec, mid);
    const double rhs = 0.5 * (eval_g(spec, x) + eval_g(spec, y));
    if (lhs > rhs + 1e-9 * (1.0 + std::fabs(rhs))) {
      out.convex_ok = false;
      break;
    }
  }
  return out;
}

}  // namespace mps
