#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mps/vecops.hpp"

namespace mps {

// An anisotropic G-function G: R^N -> [0, inf): convex, even, G(0) = 0,
// superlinear. Built-in kinds have closed-form values and gradients;
// custom kinds take user evaluators.
enum class GKind { power, sum_power, power_log, custom };

// Scope of the doubling conditions on G and its conjugate: everywhere, or
// only for large arguments.
enum class Regime { global, at_infinity };

struct GFunctionSpec {
  GKind kind = GKind::power;
  int dimension = 1;
  std::vector<double> exponents;     // each > 1; one per coordinate for sum_power
  std::vector<double> coefficients;  // positive; same shape as exponents
  Regime regime = Regime::global;

  std::function<double(std::span<const double>)> custom_eval;
  std::function<Vec(std::span<const double>)> custom_grad;  // optional

  static GFunctionSpec power(double p, double coef = 1.0, int dim = 1,
                             Regime regime = Regime::global);
  static GFunctionSpec sum_power(std::vector<double> p, std::vector<double> coef,
                                 Regime regime = Regime::global);
  static GFunctionSpec power_log(double p, double coef = 1.0, int dim = 1,
                                 Regime regime = Regime::global);
  static GFunctionSpec custom(int dim, std::function<double(std::span<const double>)> eval,
                              std::function<Vec(std::span<const double>)> grad = nullptr,
                              Regime regime = Regime::at_infinity);
};

double eval_g(const GFunctionSpec& spec, std::span<const double> x);
Vec grad_g(const GFunctionSpec& spec, std::span<const double> x);

struct SearchConfig {
  double tol = 1e-10;          // objective improvement tolerance
  double initial_step = 1.0;   // first bracket radius
  int max_expansions = 200;    // doubling budget per 1D bracket
  int max_iters = 200;         // golden-section budget per 1D maximization
  int max_sweeps = 12;         // coordinate refinement sweeps
};

struct ConjugateResult {
  double value = 0.0;
  bool converged = true;
  long evals = 0;
  Vec maximizer;
  std::string note;
};

// G*(y) = sup_x { <x,y> - G(x) }, by concave maximization: expanding bracket
// plus golden section along the ray through y, then coordinate refinement.
// The reported value is a lower bound within the stated tolerance.
ConjugateResult conjugate_eval(const GFunctionSpec& spec, std::span<const double> y,
                               const SearchConfig& search = {});

struct SamplerConfig {
  double radius_min = 1e-4;
  double radius_max = 1e4;
  int radii = 200;        // log-spaced
  int directions = 0;     // 0 = pick by dimension (2 / 64 / 256)
  std::uint64_t seed = 0x5EED;
};

// Unit directions used by the samplers; always includes +/- coordinate axes.
std::vector<Vec> sphere_directions(int dim, int count, std::uint64_t seed);
int default_direction_count(int dim);

struct SimonenkoIndices {
  double p_G = 0.0;  // sampled min of <x, grad G(x)> / G(x)
  double q_G = 0.0;  // sampled max
  Vec attained_min;
  Vec attained_max;
  long skipped = 0;  // samples with G(x) = 0 off the origin
  std::string note;
};

SimonenkoIndices simonenko_indices(const GFunctionSpec& spec, const SamplerConfig& sampler = {});

struct DoublingProbe {
  double delta2_constant = 0.0;  // sup of G(2x)/G(x) over the sample set
  Vec delta2_at;
  bool delta2_growth_suspected = false;
  double nabla2_constant = 0.0;  // sup of G*(2y)/G*(y)
  Vec nabla2_at;
  bool nabla2_growth_suspected = false;
  bool nabla2_ok = true;  // false when a conjugate evaluation failed
  double radius_min_used = 0.0;
  std::string note;
};

// Sampled doubling constants for G and its conjugate. Diagnostics only:
// a bounded sample sup is evidence, never a proof. In the at_infinity
// regime samples are restricted to |x| >= 1.
DoublingProbe delta2_nabla2_probe(const GFunctionSpec& spec, const SamplerConfig& sampler = {});

struct EmbeddingData {
  // Vertices (r, A_G(r)) of the greatest convex nondecreasing minorant of
  // r -> min_{|x|=r} G(x), sorted by radius.
  std::vector<std::pair<double, double>> minorant_samples;
  double C_inf_G = 0.0;
  double interval_length = 0.0;
  double minorant_inverse = 0.0;  // A_G^{-1}(1 / |I|)

  double minorant_at(double r) const;  // piecewise-linear evaluation
};

// C_{inf,G} = max{1, |I|} * A_G^{-1}(1 / |I|). A_G is built as the lower
// convex hull of radial minima of G; the hull is refined around the
// inversion level until the bracket is resolved. Throws std::runtime_error
// if the radius extension budget is exhausted.
EmbeddingData embedding_constant(const GFunctionSpec& spec, double interval_length,
                                 const SamplerConfig& sampler = {});

struct ShapeProbe {
  bool even_ok = true;
  bool convex_ok = true;
  bool superlinear_ok = true;
  std::string note;
};

// Sampled checks of the G-function axioms: evenness, midpoint convexity on
// segments, growth of G(x)/|x| along rays.
ShapeProbe shape_probe(const GFunctionSpec& spec, const SamplerConfig& sampler = {});

}  // namespace mps
