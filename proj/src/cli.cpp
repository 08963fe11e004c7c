#include "mps/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mps/action.hpp"
#include "mps/config.hpp"
#include "mps/grid_function.hpp"
#include "mps/orlicz.hpp"

namespace mps {

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::passed:
      return "passed";
    case Verdict::violated:
      return "violated";
    case Verdict::skipped:
      return "skipped";
  }
  return "?";
}

void describe_indices(ReportWriter& w, const SimonenkoIndices& idx, const EmbeddingData& emb,
                      const DoublingProbe& probe) {
  w.put("indices.p_G", idx.p_G);
  w.put("indices.q_G", idx.q_G);
  if (!idx.attained_min.empty()) w.put_vec("indices.attained_min", idx.attained_min);
  if (!idx.attained_max.empty()) w.put_vec("indices.attained_max", idx.attained_max);
  w.put("indices.skipped_samples", idx.skipped);
  if (!idx.note.empty()) w.put("indices.note", idx.note);
  w.put("embedding.C_inf_G", emb.C_inf_G);
  w.put("embedding.interval_length", emb.interval_length);
  w.put("embedding.minorant_inverse", emb.minorant_inverse);
  w.put("embedding.minorant_vertices", static_cast<long>(emb.minorant_samples.size()));
  w.put("delta2.constant", probe.delta2_constant);
  w.put("delta2.growth_suspected", probe.delta2_growth_suspected);
  w.put("nabla2.constant", probe.nabla2_constant);
  w.put("nabla2.growth_suspected", probe.nabla2_growth_suspected);
  w.put("nabla2.converged", probe.nabla2_ok);
  if (!probe.note.empty()) w.put("probe.note", probe.note);
}

struct CommonOpts {
  std::string problem_path;
  std::string input_path;
  std::string out_dir;
  int grid_n = 64;
  long samples = -1;  // -1: per-command default
  double tol_grad = 1e-6;
  int path_points = 31;
  std::uint64_t seed = 0x5EED;
};

void emit(const ReportWriter& w, const CommonOpts& opt) {
  const std::string text = w.str();
  std::cout << text;
  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream f(opt.out_dir + "/report.txt");
    f << text;
  }
}

void put_header(ReportWriter& w, const std::string& command, const CommonOpts& opt) {
  w.put("report.command", command);
  if (!opt.problem_path.empty()) w.put("problem.path", opt.problem_path);
  w.put("run.seed", static_cast<long>(opt.seed));
}

int cmd_check(const CommonOpts& opt) {
  const ProblemSpec p = load_problem(opt.problem_path);
  HypothesisSampler hs;
  hs.samples = opt.samples > 0 ? opt.samples : 10000;
  hs.seed = opt.seed;
  const HypothesisReport rep = check_hypotheses(p, hs);
  const StructureEstimates est = estimate_structure(p, hs);
  ReportWriter w;
  put_header(w, "check", opt);
  w.put("run.samples", hs.samples);
  describe_hypotheses(w, rep);
  w.put("estimates.theta_F_suggested", est.theta_F_suggested);
  w.put("estimates.theta_V_suggested", est.theta_V_suggested);
  w.put("estimates.Lambda_suggested", est.Lambda_suggested);
  w.put("estimates.M_ps", est.M_ps);
  w.put("estimates.M_valley", est.M_valley);
  emit(w, opt);
  return rep.all_passed ? 0 : 1;
}

int cmd_gates(const CommonOpts& opt) {
  const ProblemSpec p = load_problem(opt.problem_path);
  const EmbeddingData emb = embedding_constant(p.g, p.interval_length());
  const SimonenkoIndices idx = simonenko_indices(p.g);
  const GateResult g = check_theorem_conditions(p, emb, idx);
  ReportWriter w;
  put_header(w, "gates", opt);
  describe_gates(w, g);
  emit(w, opt);
  return (g.A.holds || g.B.holds) ? 0 : 1;
}

int cmd_indices(const CommonOpts& opt) {
  const ProblemSpec p = load_problem(opt.problem_path);
  const SimonenkoIndices idx = simonenko_indices(p.g);
  const EmbeddingData emb = embedding_constant(p.g, p.interval_length());
  const DoublingProbe probe = delta2_nabla2_probe(p.g);
  ReportWriter w;
  put_header(w, "indices", opt);
  describe_gfun(w, p.g);
  describe_indices(w, idx, emb, probe);
  emit(w, opt);
  return 0;
}

int cmd_norms(const CommonOpts& opt) {
  const ProblemSpec p = load_problem(opt.problem_path);
  const GridFunction u = read_csv(opt.input_path);
  if (u.dim != p.dim) throw std::invalid_argument("input CSV dimension does not match the problem");
  const NormBundle nb = norm_bundle(p.g, u);
  ReportWriter w;
  put_header(w, "norms", opt);
  w.put("input.path", opt.input_path);
  w.put("norms.lux_u", nb.lux_u);
  w.put("norms.lux_du", nb.lux_du);
  w.put("norms.w_norm", nb.w_norm);
  w.put("norms.w0_norm", nb.w0_norm);
  w.put("norms.sup_norm", nb.sup_norm);
  emit(w, opt);
  return 0;
}

int cmd_solve(const CommonOpts& opt) {
  const ProblemSpec p = load_problem(opt.problem_path);
  const ActionContext ctx = ActionContext::make(p, opt.grid_n);
  MountainPassConfig cfg;
  cfg.grad_tol = opt.tol_grad;
  cfg.path_points = opt.path_points;
  cfg.seed = opt.seed;
  if (opt.samples > 0) cfg.rim_samples = static_cast<int>(opt.samples);
  const SolveReport rep = mountain_pass_solve(ctx, cfg);
  ReportWriter w;
  put_header(w, "solve", opt);
  w.put("run.grid_n", opt.grid_n);
  w.put("run.tol_grad", opt.tol_grad);
  w.put("run.path_points", opt.path_points);
  describe_solve(w, rep);
  emit(w, opt);
  const std::string out_dir = opt.out_dir.empty() ? std::string(".") : opt.out_dir;
  std::filesystem::create_directories(out_dir);
  write_csv(rep.u_star, out_dir + "/solution.csv");
  if (!rep.converged) return 2;
  const bool gate_ok = rep.gate.A.holds || rep.gate.B.holds;
  if (!gate_ok || !rep.hypothesis.all_passed || !rep.geometry_ok) return 1;
  return 0;
}

int cmd_verify(const CommonOpts& opt) {
  const ProblemSpec p = load_problem(opt.problem_path);
  GridFunction u = read_csv(opt.input_path);
  if (!u.zero_boundary)
    throw std::invalid_argument("verify: input CSV must have exact zero boundary values");
  const ActionContext ctx = ActionContext::make(p, u.n);
  const Residual res = euler_lagrange_residual(ctx, u);
  ReportWriter w;
  put_header(w, "verify", opt);
  w.put("input.path", opt.input_path);
  w.put("verify.grid_n", u.n);
  w.put("verify.weak_residual", res.weak);
  w.put("verify.strong_residual", res.strong);
  w.put("verify.strong_available", res.strong_available);
  emit(w, opt);
  return 0;
}

}  // namespace

void describe_gates(ReportWriter& w, const GateResult& g) {
  w.put("gates.C_inf_G", g.C_inf_G);
  w.put("gates.rho", g.rho);
  w.put("gates.p_G", g.p_G);
  w.put("gates.q_G", g.q_G);
  w.put("gates.g_integral", g.g_integral);
  w.put("gates.f_dual_norm", g.f_dual_norm);
  w.put("gates.A.applicable", g.A.applicable);
  w.put("gates.A.holds", g.A.holds);
  w.put("gates.A.lhs", g.A.lhs);
  w.put("gates.A.rhs", g.A.rhs);
  if (g.A.skipped) w.put("gates.A.skipped", true);
  if (!g.A.note.empty()) w.put("gates.A.note", g.A.note);
  w.put("gates.B.applicable", g.B.applicable);
  w.put("gates.B.holds", g.B.holds);
  w.put("gates.B.lhs", g.B.lhs);
  w.put("gates.B.rhs", g.B.rhs);
  w.put("gates.B.branch", g.B.branch);
  if (g.B.skipped) w.put("gates.B.skipped", true);
  if (!g.B.note.empty()) w.put("gates.B.note", g.B.note);
}

void describe_hypotheses(ReportWriter& w, const HypothesisReport& h) {
  for (const auto& e : h.entries) {
    const std::string k = "hypothesis." + e.name;
    w.put(k + ".verdict", verdict_name(e.verdict));
    w.put(k + ".samples", e.samples);
    w.put(k + ".lhs", e.lhs);
    w.put(k + ".rhs", e.rhs);
    w.put(k + ".margin", e.margin);
    if (e.verdict == Verdict::violated) {
      w.put(k + ".witness.t", e.witness.t);
      if (!e.witness.x.empty()) w.put_vec(k + ".witness.x", e.witness.x);
      if (!e.witness.v.empty()) w.put_vec(k + ".witness.v", e.witness.v);
      if (e.witness.lambda != 1.0) w.put(k + ".witness.lambda", e.witness.lambda);
    }
    if (!e.note.empty()) w.put(k + ".note", e.note);
  }
  w.put("hypothesis.violations", h.violations);
  w.put("hypothesis.all_passed", h.all_passed);
}

void describe_solve(ReportWriter& w, const SolveReport& s) {
  w.put("solve.converged", s.converged);
  w.put("solve.geometry_ok", s.geometry_ok);
  w.put("solve.lambda0", s.lambda0);
  w.put("solve.rho", s.rho);
  w.put("solve.alpha_est", s.alpha_est);
  w.put("solve.c_est", s.c_est);
  w.put("solve.grad_norm", s.grad_norm);
  w.put("solve.j_at_e", s.j_at_estar);
  w.put("solve.j_at_u_star", s.j_at_ustar);
  w.put("solve.u_star_w0_norm", s.u_star_w0_norm);
  w.put("solve.weak_residual", s.residual.weak);
  w.put("solve.strong_residual", s.residual.strong);
  w.put("solve.outer_iterations", s.outer_iterations);
  w.put("solve.refine_iterations", s.refine_iterations);
  if (!s.message.empty()) w.put("solve.message", s.message);
  describe_gates(w, s.gate);
  describe_hypotheses(w, s.hypothesis);
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"anisotropic Orlicz-Sobolev toolkit and mountain-pass solver"};
  app.require_subcommand(1);
  CommonOpts opt;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    sub->add_option("problem", opt.problem_path, "problem file")->required();
    sub->add_option("--out", opt.out_dir, "output directory for reports and CSVs");
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
    sub->add_option("--samples", opt.samples, "sample count for randomized checks");
    if (needs_input)
      sub->add_option("--input", opt.input_path, "grid function CSV")->required();
  };

  CLI::App* c_check = app.add_subcommand("check", "run the hypothesis battery");
  add_common(c_check, false);
  CLI::App* c_gates = app.add_subcommand("gates", "evaluate the existence gates");
  add_common(c_gates, false);
  CLI::App* c_indices = app.add_subcommand("indices", "indices, embedding constant, doubling probes");
  add_common(c_indices, false);
  CLI::App* c_norms = app.add_subcommand("norms", "norm bundle of a CSV grid function");
  add_common(c_norms, true);
  CLI::App* c_solve = app.add_subcommand("solve", "run the mountain-pass solver");
  add_common(c_solve, false);
  c_solve->add_option("--grid-n", opt.grid_n, "number of grid subintervals");
  c_solve->add_option("--tol-grad", opt.tol_grad, "gradient norm tolerance");
  c_solve->add_option("--path-points", opt.path_points, "path discretization points");
  CLI::App* c_verify = app.add_subcommand("verify", "Euler-Lagrange residual of a CSV solution");
  add_common(c_verify, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_check)) return cmd_check(opt);
    if (app.got_subcommand(c_gates)) return cmd_gates(opt);
    if (app.got_subcommand(c_indices)) return cmd_indices(opt);
    if (app.got_subcommand(c_norms)) return cmd_norms(opt);
    if (app.got_subcommand(c_solve)) return cmd_solve(opt);
    if (app.got_subcommand(c_verify)) return cmd_verify(opt);
  } catch (const ParseError& e) {
    std::cerr << "error.code = parse_error\nerror.message = " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error.code = invalid_argument\nerror.message = " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error.code = runtime_error\nerror.message = " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mps
