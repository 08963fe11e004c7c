#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mps/gfunction.hpp"
#include "mps/grid_function.hpp"

namespace mps {

// Scalar witness functions a(.), b(.), g(.) supplied with the problem. The
// kind/params pair keeps them serializable.
struct ScalarField {
  std::function<double(double)> fn;
  std::string kind = "constant";
  std::vector<double> params = {0.0};

  static ScalarField constant(double c);
  // c0 + c1 * s^k (used for a(.): continuous and nonnegative on R+)
  static ScalarField poly(double c0, double c1, double k);
  double operator()(double s) const { return fn(s); }
};

struct Witnesses {
  ScalarField a_of_x = ScalarField::constant(1.0);  // a: R+ -> R+
  ScalarField b_of_t = ScalarField::constant(0.0);  // b: I -> R+
  ScalarField g_of_t = ScalarField::constant(0.0);  // g: I -> R
  double theta_F = 2.0;
  double theta_V = 4.0;
  double Lambda = 1.0;
  double r0 = 1.0;
  double rho0 = 0.5;
};

// The Lagrangian triple L(t,x,v) = F(t,x,v) + V(t,x) + <f(t), x> together
// with its derivatives and the declared structural witnesses.
struct ProblemSpec {
  double a = 0.0;
  double b = 1.0;
  int dim = 1;
  GFunctionSpec g = GFunctionSpec::power(2.0, 0.5, 1);

  std::function<double(double, std::span<const double>, std::span<const double>)> F;
  std::function<Vec(double, std::span<const double>, std::span<const double>)> F_x;
  std::function<Vec(double, std::span<const double>, std::span<const double>)> F_v;
  std::function<double(double, std::span<const double>)> V;
  std::function<Vec(double, std::span<const double>)> V_x;
  std::function<Vec(double)> f;
  bool f_is_zero = true;

  Witnesses w;
  std::string F_kind = "custom";
  std::string V_kind = "custom";
  std::string f_kind = "zero";

  double interval_length() const { return b - a; }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Catalog builders (the problem-file vocabulary).
void set_F_g_of_v(ProblemSpec& p);                       // F = G(v)
void set_F_scaled_g(ProblemSpec& p, double scale);       // F = c G(v)
void set_F_x_modulated(ProblemSpec& p, double eps);      // F = (1 + eps/(1+|x|^2)) G(v)
void set_V_neg_power(ProblemSpec& p, double kappa, double theta);  // V = -kappa |x|^theta
void set_V_well(ProblemSpec& p, double kappa1, double kappa2, double theta);  // k1|x|^2 - k2|x|^theta
void set_f_zero(ProblemSpec& p);
void set_f_constant(ProblemSpec& p, Vec value);
void set_f_samples(ProblemSpec& p, GridFunction samples);  // piecewise-linear forcing

struct LagrangianParts {
  double L = 0.0;
  double F_part = 0.0;
  double V_part = 0.0;
  double f_part = 0.0;
};

LagrangianParts eval_lagrangian(const ProblemSpec& p, double t, std::span<const double> x,
                                std::span<const double> v);

// ---------------------------------------------------------------------------
// Hypothesis checking (randomized falsification, never verification).

struct HypothesisSampler {
  long samples = 10000;      // per hypothesis
  double x_max = 0.0;        // 0 = auto: max(10 r0, 10 rho0)
  double v_max = 100.0;
  double lambda_max = 10.0;  // scaling range for the subhomogeneity probes
  std::uint64_t seed = 0x5EED;
};

enum class Verdict { passed, violated, skipped };

struct SamplePoint {
  double t = 0.0;
  Vec x;
  Vec v;
  Vec v2;              // second velocity, used by the convexity probe
  double lambda = 1.0;
};

struct HypothesisEntry {
  std::string name;
  Verdict verdict = Verdict::passed;
  long samples = 0;
  SamplePoint witness;  // meaningful when violated
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs at the witness; > 0 means violated
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisEntry> entries;
  bool all_passed = true;
  long violations = 0;
  const HypothesisEntry* find(const std::string& name) const;
};

HypothesisReport check_hypotheses(const ProblemSpec& p, const HypothesisSampler& sampler = {});

// Recomputes lhs - rhs for a named hypothesis at a stored sample, via the
// same code path the checker used.
double replay_margin(const ProblemSpec& p, const std::string& hypothesis, const SamplePoint& s);

// Empirical sup/inf of the ratios that define theta_F, theta_V, Lambda, plus
// the two bounded-ball suprema used by the solver diagnostics:
//   M_ps     = sup { |theta_V V - <grad V, x>| : t in I, |x| <= r0 }
//   M_valley = sup { |V(t,x)| : t in I, |x| <= r0 }
struct StructureEstimates {
  double theta_F_suggested = 0.0;
  double theta_V_suggested = 0.0;
  double Lambda_suggested = 0.0;
  double M_ps = 0.0;
  double M_valley = 0.0;
  long samples = 0;
};

StructureEstimates estimate_structure(const ProblemSpec& p, const HypothesisSampler& sampler = {});

// ---------------------------------------------------------------------------
// Existence gates.

struct GateSide {
  bool applicable = false;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string branch;  // exponent branch used by gate B
  bool skipped = false;
  std::string note;
};

struct GateResult {
  GateSide A;
  GateSide B;
  double C_inf_G = 0.0;
  double rho = 0.0;         // rho0 / C_inf_G
  double g_integral = 0.0;  // int_I g(t) dt
  double f_dual_norm = 0.0;
  double p_G = 0.0;
  double q_G = 0.0;
};

// Gate A: applicable iff rho0 >= C_inf_G; holds iff
//   int g < (Lambda - 2|I| ||f||_G*) rho0 / C_inf_G.
// Gate B: applicable iff the regime is global; holds iff
//   int g + 2|I| ||f||_G* rho < Lambda rho^e, e = q_G if rho0 <= C else p_G.
// Strict inequalities with zero slack; ties count as failures.
GateResult check_theorem_conditions(const ProblemSpec& p, const EmbeddingData& emb,
                                    const SimonenkoIndices& idx);

// int_I g(t) dt by composite trapezoid.
double witness_g_integral(const ProblemSpec& p, int cells = 2048);
// Conjugate Luxemburg norm of the forcing sampled on a uniform grid.
double forcing_dual_norm(const ProblemSpec& p, int cells = 512, bool* ok = nullptr);

}  // namespace mps
