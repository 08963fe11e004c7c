#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mps/action.hpp"
#include "mps/orlicz.hpp"

namespace mps {

struct MountainPassConfig {
  int path_points = 31;          // >= 3; endpoints pinned at 0 and e
  double deform_step = 0.5;      // initial descent step for the path maximizer
  double grad_tol = 1e-6;        // stop when the gradient norm is below
  int max_outer_iters = 400;
  int max_refine_iters = 200;
  std::optional<GridFunction> valley_seed;  // default: scaled sine bump
  double lambda_max = 1e6;       // cap for the valley doubling search
  int rim_samples = 200;
  long hypothesis_samples = 10000;
  int stagnation_limit = 12;     // consecutive stalled iterations before bailing out
  std::uint64_t seed = 0x5EED;
};

struct ValleyResult {
  bool ok = false;
  GridFunction e;
  double lambda0 = 0.0;
  double w0_norm = 0.0;       // ||e'||_G
  LagrangianParts parts;      // J's per-term breakdown at the final scaling
  std::string message;
};

// Default seed for the valley search: componentwise sine bump scaled so that
// sup |u0| = amplitude.
GridFunction default_valley_seed(const ActionContext& ctx, double amplitude);

// Doubles lambda from 2 until J(lambda u0) < 0 and ||lambda u0||_W0 > rho.
// rho < 0 means: compute rho0 / C_inf_G from the problem. The seed must
// exceed r0 on at least one node.
ValleyResult find_valley_point(const ActionContext& ctx, const GridFunction& u0,
                               const MountainPassConfig& cfg, double rho = -1.0);

// Sampled minimum of J over random zero-boundary directions rescaled to
// ||u'||_G = rho. A diagnostic surrogate for the rim level, not a bound.
double estimate_rim(const ActionContext& ctx, double rho, int samples,
                    std::uint64_t seed = 0x5EED);

struct RefineResult {
  GridFunction u;
  double grad_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Drives ||grad J||^2 to zero by damped Newton steps on the gradient system
// with a line search on the squared norm; falls back to steepest descent on
// the squared norm when the linear solve is unusable.
RefineResult refine_critical_point(const ActionContext& ctx, const GridFunction& u,
                                   const MountainPassConfig& cfg = {});

struct SolveReport {
  bool converged = false;
  bool geometry_ok = false;
  GridFunction e;
  GridFunction u_star;
  double lambda0 = 0.0;
  double rho = 0.0;
  double alpha_est = 0.0;
  double c_est = 0.0;       // final path maximum
  double grad_norm = 0.0;   // at u_star
  double j_at_estar = 0.0;  // J(e)
  double j_at_ustar = 0.0;  // J(u_star)
  double u_star_w0_norm = 0.0;
  Residual residual;
  int outer_iterations = 0;
  int refine_iterations = 0;
  GateResult gate;
  HypothesisReport hypothesis;
  std::vector<GridFunction> iterate_history;  // accepted path maximizers
  std::vector<double> path_max_history;
  std::vector<GridFunction> final_path;  // path nodes at termination, 0 to e
  std::string message;
};

// Path-deformation mountain pass: a discrete path from 0 to the valley point
// is relaxed by moving its highest node along -grad J, accepting only steps
// that lower the path maximum, with arc-length re-equidistribution between
// iterations. The final maximizer is polished by refine_critical_point.
// When the valley construction fails (no mountain geometry), the report
// carries the plain minimizer instead and says so.
SolveReport mountain_pass_solve(const ActionContext& ctx, const MountainPassConfig& cfg = {});

struct PsEntry {
  double value_term = 0.0;   // theta_V J(u) - J'(u)u
  double lower_bound = 0.0;  // Lambda (theta_V - theta_F) R_G(u') - |I| M - 2|I|(theta_V - 1)||f|| ||u'||
  double margin = 0.0;       // value_term - lower_bound
  double coercivity_ratio = 0.0;  // R_G(u') / ||u'||_G
};

struct PsDiagnostic {
  std::vector<PsEntry> entries;
  double min_margin = 0.0;
  bool ratio_nondecreasing = true;
  double M_estimate = 0.0;
  double f_dual_norm = 0.0;
};

// Boundedness diagnostic along a sequence of iterates.
PsDiagnostic ps_diagnostic(const ActionContext& ctx, const std::vector<GridFunction>& iterates);

}  // namespace mps
