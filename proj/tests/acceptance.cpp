// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mps/action.hpp"
#include "mps/orlicz.hpp"
#include "mps/rng.hpp"
#include "mps/solver.hpp"
#include "oracles.hpp"
#include "problems.hpp"

using namespace mps;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  std::string name;
  std::function<void()> body;  // throws std::runtime_error on failure
};

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridFunction random_zero_boundary(Rng& rng, int n, int dim, double amp) {
  GridFunction u = GridFunction::zeros(0.0, 1.0, n, dim, true);
  for (int k = 1; k < n; ++k)
    for (int c = 0; c < dim; ++c) u.node(k)[c] = amp * rng.normal();
  return u;
}

// ---------------------------------------------------------------- criterion 1
void simonenko_exactness() {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = GFunctionSpec::power(p, 1.0 / p, 2);
    const SimonenkoIndices idx = simonenko_indices(spec);
    require(std::fabs(idx.p_G - p) <= 1e-6, "p_G off for p = " + std::to_string(p));
    require(std::fabs(idx.q_G - p) <= 1e-6, "q_G off for p = " + std::to_string(p));
    require(seconds_since(t0) < 1.0, "runtime exceeded 1 s for p = " + std::to_string(p));
  }
}

// ---------------------------------------------------------------- criterion 2
void fenchel_equality() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<GFunctionSpec> kinds = {
      GFunctionSpec::power(3.0, 0.5, 2),
      GFunctionSpec::sum_power({2.0, 3.0}, {1.0, 0.5}),
      GFunctionSpec::power_log(2.0, 1.0, 2),
  };
  Rng rng(kDefaultSeed);
  for (const auto& spec : kinds) {
    for (int i = 0; i < 1000; ++i) {
      const Vec x = rng.in_ball(2, 3.0);
      const Vec y = grad_g(spec, x);
      const ConjugateResult c = conjugate_eval(spec, y);
      require(c.converged, "conjugate evaluation failed");
      const double ip = dot(x, y);
      const double gap = std::fabs(ip - eval_g(spec, x) - c.value);
      require(gap <= 1e-6 * (1.0 + std::fabs(ip)),
              "Fenchel equality gap " + std::to_string(gap));
    }
  }
  require(seconds_since(t0) < 30.0, "runtime exceeded 30 s");
}

// ---------------------------------------------------------------- criterion 3
void luxemburg_consistency() {
  const std::vector<GFunctionSpec> specs = {
      GFunctionSpec::power(2.0, 0.5, 1),
      GFunctionSpec::power_log(2.0, 1.0, 1),
      GFunctionSpec::sum_power({2.0, 3.0}, {1.0, 1.0}),
  };
  Rng rng(kDefaultSeed);
  // modular at the normalized function equals one
  for (int i = 0; i < 1000; ++i) {
    const auto& g = specs[static_cast<std::size_t>(i) % specs.size()];
    const int n = 4 + static_cast<int>(rng.uniform() * 28);
    GridFunction u = random_zero_boundary(rng, n, g.dimension,
                                          std::pow(10.0, rng.uniform(-2.0, 2.0)));
    const double nrm = luxemburg_norm(g, u);
    if (nrm == 0.0) continue;
    GridFunction w = u;
    w *= 1.0 / nrm;
    const double r = modular(g, w);
    require(std::fabs(r - 1.0) <= 1e-8, "modular at u/||u|| is " + std::to_string(r));
  }
  // Poincare on zero-boundary samples, zero violations
  long violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& g = specs[static_cast<std::size_t>(i) % specs.size()];
    const int n = 4 + static_cast<int>(rng.uniform() * 28);
    const GridFunction u = random_zero_boundary(rng, n, g.dimension,
                                                std::pow(10.0, rng.uniform(-1.0, 1.0)));
    const double lhs = luxemburg_norm(g, u, false);
    const double rhs = (u.b - u.a) * luxemburg_norm(g, u, true);
    if (lhs > rhs + 5e-10 * (1.0 + rhs)) ++violations;
  }
  require(violations == 0, std::to_string(violations) + " Poincare violations");
}

// ---------------------------------------------------------------- criterion 4
void modular_norm_comparisons() {
  const std::vector<GFunctionSpec> global_specs = {
      GFunctionSpec::power(2.0, 0.5, 1),
      GFunctionSpec::sum_power({2.0, 3.0}, {1.0, 1.0}),
      GFunctionSpec::power_log(2.0, 1.0, 1),
  };
  std::vector<GFunctionSpec> all_specs = global_specs;
  all_specs.push_back(GFunctionSpec::power_log(2.5, 1.0, 1, Regime::at_infinity));

  std::vector<SimonenkoIndices> indices;
  for (const auto& g : global_specs) indices.push_back(simonenko_indices(g));

  Rng rng(kDefaultSeed);
  long checked_21 = 0, checked_22 = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t which = static_cast<std::size_t>(i) % all_specs.size();
    const auto& g = all_specs[which];
    const int n = 4 + static_cast<int>(rng.uniform() * 20);
    const GridFunction u = random_zero_boundary(rng, n, g.dimension,
                                                std::pow(10.0, rng.uniform(-1.5, 1.5)));
    const double nrm = luxemburg_norm(g, u);
    if (nrm == 0.0) continue;
    const double r = modular(g, u);
    const double tol = 1e-10 * (1.0 + r);
    if (which < global_specs.size()) {
      const auto& idx = indices[which];
      const double power = nrm <= 1.0 ? idx.q_G : idx.p_G;
      require(std::pow(nrm, power) <= r + tol, "power comparison failed");
      ++checked_21;
    }
    if (nrm > 1.0)
      require(r >= nrm - tol, "modular above norm failed");
    else
      require(r <= nrm + tol, "modular below norm failed");
    ++checked_22;
  }
  require(checked_21 > 5000 && checked_22 > 9000, "insufficient sample coverage");
}

// ---------------------------------------------------------------- criterion 5
void gradient_fidelity() {
  Rng rng(kDefaultSeed);
  {
    const ProblemSpec p = bench::quartic();
    const ActionContext ctx = ActionContext::make(p, 64);
    for (int i = 0; i < 1000; ++i) {
      const GridFunction u = bench::random_fourier_state(rng, 0.0, 1.0, 64, 1, 1.0);
      const double err = gradient_fd_check(ctx, u, 1e-6);
      require(err < 1e-5, "quartic fd check " + std::to_string(err));
    }
  }
  {
    const ProblemSpec p = bench::linear_forced();
    const ActionContext ctx = ActionContext::make(p, 64);
    for (int i = 0; i < 1000; ++i) {
      const GridFunction u = bench::random_fourier_state(rng, 0.0, 1.0, 64, 1, 1.0);
      const double err = gradient_fd_check(ctx, u, 1e-5);
      require(err < 1e-9, "quadratic fd check " + std::to_string(err));
    }
  }
}

// ---------------------------------------------------------------- criterion 6
void linear_oracle() {
  const ProblemSpec p = bench::linear_forced();
  std::vector<double> errors;
  for (int n : {50, 100, 200}) {
    const ActionContext ctx = ActionContext::make(p, n);
    MountainPassConfig cfg;
    cfg.hypothesis_samples = 200;
    cfg.rim_samples = 50;
    const SolveReport rep = mountain_pass_solve(ctx, cfg);
    require(rep.converged, "solve did not converge at n = " + std::to_string(n));
    // sup over a dense evaluation grid of the piecewise-linear solution
    double err = 0.0;
    for (int j = 0; j <= 16 * n; ++j) {
      const double t = static_cast<double>(j) / (16 * n);
      err = std::max(err, std::fabs(rep.u_star.at(t)[0] - t * (t - 1.0) / 2.0));
    }
    require(err <= 1.0 / (n * double(n)), "sup error above C h^2 at n = " + std::to_string(n));
    errors.push_back(err);

    const Residual res = euler_lagrange_residual(ctx, rep.u_star);
    require(res.weak < 1e-9, "verify weak residual too large");
  }
  const double order1 = std::log2(errors[0] / errors[1]);
  const double order2 = std::log2(errors[1] / errors[2]);
  require(order1 >= 1.9 && order2 >= 1.9,
          "observed orders " + std::to_string(order1) + ", " + std::to_string(order2));
}

// shared state between criteria 7 and 10
SolveReport g_quartic_report;
bool g_quartic_ready = false;

// ---------------------------------------------------------------- criterion 7
void nonlinear_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec p = bench::quartic();
  const ActionContext ctx = ActionContext::make(p, 64);
  MountainPassConfig cfg;
  const SolveReport rep = mountain_pass_solve(ctx, cfg);
  require(rep.converged, "solver did not converge");
  require(rep.grad_norm < 1e-6, "grad norm " + std::to_string(rep.grad_norm));
  require(rep.j_at_ustar > 0.0, "J(u*) not positive");
  require(rep.j_at_estar < 0.0, "J(e) not negative");
  require(rep.u_star_w0_norm > rep.rho / 2.0, "u* is not nontrivial");

  auto rhs = [](double, double u) { return -4.0 * u * u * u; };
  const double slope = oracle::shoot_positive_bump(rhs, 0.0, 1.0);
  const std::vector<double> ref = oracle::ivp_on_grid(rhs, 0.0, 1.0, 64, slope);
  double err = 0.0;
  for (int k = 0; k <= 64; ++k)
    err = std::max(err, std::fabs(rep.u_star.node(k)[0] - ref[static_cast<std::size_t>(k)]));
  require(err <= 1e-3, "sup-norm distance to the shooting solution " + std::to_string(err));
  require(seconds_since(t0) < 60.0, "runtime exceeded 60 s");

  g_quartic_report = rep;
  g_quartic_ready = true;
}

// ---------------------------------------------------------------- criterion 8
void gate_arithmetic() {
  {
    const ProblemSpec p = bench::quartic(0.5);
    const EmbeddingData emb = embedding_constant(p.g, 1.0);
    const SimonenkoIndices idx = simonenko_indices(p.g);
    const GateResult g = check_theorem_conditions(p, emb, idx);
    require(g.B.applicable && g.B.holds, "gate B should hold");
    require(std::fabs(g.B.lhs - 0.0625) <= 1e-9, "B lhs " + std::to_string(g.B.lhs));
    require(std::fabs(g.B.rhs - 0.125) <= 1e-9, "B rhs " + std::to_string(g.B.rhs));
  }
  {
    const ProblemSpec p = bench::quartic(2.0);
    const EmbeddingData emb = embedding_constant(p.g, 1.0);
    const SimonenkoIndices idx = simonenko_indices(p.g);
    const GateResult g = check_theorem_conditions(p, emb, idx);
    require(g.A.applicable, "gate A should be applicable at rho0 = 2");
    require(!g.A.holds, "gate A should fail");
    require(std::fabs(g.A.lhs - 16.0) <= 1e-9, "A lhs " + std::to_string(g.A.lhs));
    require(std::fabs(g.A.rhs - std::sqrt(2.0)) <= 1e-9, "A rhs " + std::to_string(g.A.rhs));
  }
}

// ---------------------------------------------------------------- criterion 9
void action_vanishes_at_zero() {
  std::vector<ProblemSpec> catalog = {bench::quartic(), bench::quartic_with_forcing(0.01),
                                      bench::linear_forced()};
  {
    ProblemSpec p = bench::quartic();
    set_V_well(p, 0.5, 1.0, 4.0);
    catalog.push_back(p);
  }
  {
    ProblemSpec p = bench::quartic_with_forcing(0.02);
    set_F_x_modulated(p, 0.5);
    p.w.a_of_x = ScalarField::constant(2.25);
    catalog.push_back(p);
  }
  {
    ProblemSpec p = bench::quartic();
    set_F_scaled_g(p, 2.0);
    p.w.a_of_x = ScalarField::constant(4.0);
    catalog.push_back(p);
  }
  for (const auto& p : catalog) {
    const ActionContext ctx = ActionContext::make(p, 64);
    const double j0 = std::fabs(action_value(ctx, ctx.zero_state()));
    require(j0 < 1e-12, "|J(0)| = " + std::to_string(j0));
  }
}

// --------------------------------------------------------------- criterion 10
void ps_diagnostic_criterion() {
  require(g_quartic_ready, "criterion 7 must run first");
  const ProblemSpec p = bench::quartic();
  const ActionContext ctx = ActionContext::make(p, 64);
  require(!g_quartic_report.iterate_history.empty(), "no iterate history recorded");
  const PsDiagnostic diag = ps_diagnostic(ctx, g_quartic_report.iterate_history);
  require(diag.min_margin >= -1e-8,
          "PS margin " + std::to_string(diag.min_margin));

  // coercivity ratio along the scaled ray k u0, k = 1..1000
  GridFunction u0 = GridFunction::from_callable(
      0.0, 1.0, 64, 1, [](double t) { return Vec{std::sin(kPi * t)}; });
  u0.set_zero_boundary();
  double prev = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    GridFunction uk = u0;
    uk *= static_cast<double>(k);
    const double ratio = modular(p.g, uk, true) / luxemburg_norm(p.g, uk, true);
    require(ratio >= prev - 1e-9 * (1.0 + ratio), "ratio decreased at k = " + std::to_string(k));
    prev = ratio;
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 Simonenko exactness", simonenko_exactness},
      {"2 Fenchel equality", fenchel_equality},
      {"3 Luxemburg consistency and Poincare", luxemburg_consistency},
      {"4 modular-norm comparisons", modular_norm_comparisons},
      {"5 gradient fidelity", gradient_fidelity},
      {"6 linear oracle", linear_oracle},
      {"7 nonlinear oracle", nonlinear_oracle},
      {"8 gate arithmetic", gate_arithmetic},
      {"9 action vanishes at zero", action_vanishes_at_zero},
      {"10 Palais-Smale diagnostic", ps_diagnostic_criterion},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.body();
      std::printf("PASS criterion %s\n", c.name.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL criterion %s: %s\n", c.name.c_str(), e.what());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
