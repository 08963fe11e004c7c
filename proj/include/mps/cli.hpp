#pragma once

#include "mps/problem.hpp"
#include "mps/report.hpp"
#include "mps/solver.hpp"

namespace mps {

// Exit codes: 0 success, 1 violated gates/hypotheses, 2 numeric failure.
int run_cli(int argc, const char* const* argv);

// Report serializers (stable key order).
void describe_gates(ReportWriter& w, const GateResult& g);
void describe_hypotheses(ReportWriter& w, const HypothesisReport& h);
void describe_solve(ReportWriter& w, const SolveReport& s);

}  // namespace mps
