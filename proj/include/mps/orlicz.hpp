#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mps/gfunction.hpp"
#include "mps/grid_function.hpp"

namespace mps {

// Modular R_G(u) = integral of G(u) over I, by composite trapezoid on the
// value grid. With of_derivative set, integrates G of the piecewise-constant
// derivative by the per-cell midpoint rule, which is exact there.
double modular(const GFunctionSpec& spec, const GridFunction& u, bool of_derivative = false);

// Luxemburg norm: the smallest lambda > 0 with R_G(u / lambda) <= 1, located
// by bisection on the strictly decreasing map lambda -> R_G(u / lambda).
// Returns 0 iff u is identically zero.
double luxemburg_norm(const GFunctionSpec& spec, const GridFunction& u,
                      bool of_derivative = false);

// Luxemburg norm for the conjugate function: lambda -> sum of w_k G*(v_k /
// lambda) <= 1. Sets *ok to false (when given) if a conjugate evaluation did
// not converge.
double dual_luxemburg_norm(const GFunctionSpec& spec, const GridFunction& v,
                           const SearchConfig& search = {}, bool* ok = nullptr);

struct NormBundle {
  double lux_u = 0.0;    // Luxemburg norm of u
  double lux_du = 0.0;   // Luxemburg norm of the derivative
  double w_norm = 0.0;   // lux_u + lux_du
  double w0_norm = 0.0;  // lux_du (equivalent norm on the zero-boundary subspace)
  double sup_norm = 0.0;
};

NormBundle norm_bundle(const GFunctionSpec& spec, const GridFunction& u);

struct InequalityCheck {
  std::string name;
  int index = 0;  // which pair / function the check applies to
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs; negative means violated
  bool passed = true;
  bool skipped = false;
  std::string note;
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  int violations = 0;
  int skipped = 0;
  bool all_passed() const { return violations == 0; }
};

// Runs the standard inequality battery on a list of (u, v) pairs:
//   Holder        |int <u,v>| <= 2 ||u||_G ||v||_G*          (each pair)
//   Poincare      ||u||_G <= |I| ||du||_G                    (zero-boundary u)
//   modular/norm  the two-sided modular-norm comparisons; the power-law
//                 versions only when the spec's regime is global
//   embedding     sup|u| <= C_inf_G (||u||_G + ||du||_G)
// Conjugate-norm failures turn the affected Holder check into a skip.
InequalityReport check_inequalities(const GFunctionSpec& spec,
                                    const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
                                    const EmbeddingData& emb);

}  // namespace mps
