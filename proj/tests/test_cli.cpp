#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mps/cli.hpp"
#include "mps/config.hpp"
#include "mps/grid_function.hpp"
#include "mps/orlicz.hpp"

using namespace mps;
namespace fs = std::filesystem;

namespace {

const char* kQuarticFile =
    "# quartic well benchmark\n"
    "interval.a = 0\n"
    "interval.b = 1\n"
    "dimension = 1\n"
    "gfun.kind = power\n"
    "gfun.p = 2\n"
    "gfun.coef = 0.5\n"
    "gfun.regime = global\n"
    "F.kind = g_of_v\n"
    "V.kind = neg_power\n"
    "V.kappa = 1\n"
    "V.theta = 4\n"
    "f.kind = zero\n"
    "witness.theta_F = 2\n"
    "witness.theta_V = 4\n"
    "witness.Lambda = 1\n"
    "witness.r0 = 1\n"
    "witness.rho0 = 0.5\n"
    "witness.g.kind = constant\n"
    "witness.g.value = 0.0625\n";

fs::path sandbox() {
  const fs::path dir = fs::temp_directory_path() / "mpsolve_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = sandbox() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

// run_cli with stdout captured, so test logs stay readable
int run_quiet(std::vector<std::string> args, std::string* captured = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("mpsolve");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::stringstream buf;
  std::streambuf* old = std::cout.rdbuf(buf.rdbuf());
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  if (captured) *captured = buf.str();
  return rc;
}

double report_value(const std::string& report, const std::string& key) {
  const std::string needle = key + " = ";
  const auto pos = report.find(needle);
  REQUIRE(pos != std::string::npos);
  return std::stod(report.substr(pos + needle.size()));
}

}  // namespace

TEST_CASE("load_problem parses the quartic example") {
  const fs::path file = write_file("quartic.prob", kQuarticFile);
  const ProblemSpec p = load_problem(file.string());
  CHECK(p.w.theta_F == 2.0);
  CHECK(p.w.theta_V == 4.0);
  CHECK(p.w.rho0 == 0.5);
  CHECK(p.F_kind == "g_of_v");
  CHECK(p.V_kind == "neg_power");
  CHECK(p.f_is_zero);
  CHECK(p.g.regime == Regime::global);
}

TEST_CASE("load_problem rejects theta_V <= theta_F naming the field") {
  std::string text = kQuarticFile;
  const auto pos = text.find("witness.theta_V = 4");
  text.replace(pos, std::string("witness.theta_V = 4").size(), "witness.theta_V = 1.5");
  const fs::path file = write_file("bad_theta.prob", text);
  try {
    load_problem(file.string());
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("theta_V") != std::string::npos);
  }
}

TEST_CASE("load_problem rejects exponents at or below one") {
  std::string text = kQuarticFile;
  const auto pos = text.find("gfun.p = 2");
  text.replace(pos, std::string("gfun.p = 2").size(), "gfun.p = 0.5");
  const fs::path file = write_file("bad_p.prob", text);
  CHECK_THROWS_AS(load_problem(file.string()), ParseError);
}

TEST_CASE("parser reports unknown keys, duplicates, and bad values with line numbers") {
  {
    const fs::path f = write_file("unknown.prob", std::string(kQuarticFile) + "F.scale = 2\n");
    try {
      load_problem(f.string());
      FAIL("expected an unknown-key error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("F.scale") != std::string::npos);
      CHECK(e.line > 0);
    }
  }
  {
    const fs::path f =
        write_file("dup.prob", std::string("interval.a = 0\ninterval.a = 1\n"));
    CHECK_THROWS_AS(KvFile::parse_file(f.string()), ParseError);
  }
  {
    const fs::path f = write_file("nonnum.prob", "interval.a = zero\n");
    const KvFile kv = KvFile::parse_file(f.string());
    try {
      kv.get_double("interval.a");
      FAIL("expected a number error");
    } catch (const ParseError& e) {
      CHECK(e.line == 1);
    }
  }
}

TEST_CASE("gfun serialization parses back to the same function") {
  const GFunctionSpec g = GFunctionSpec::sum_power({2.0, 3.5}, {1.0, 0.25}, Regime::at_infinity);
  const std::string block = serialize_gfun(g);
  const KvFile kv = KvFile::parse_string(block + "\n");
  kv.mark_consumed("gfun.dimension");
  const GFunctionSpec back = gfun_from_kv(kv, 2);
  CHECK(back.kind == GKind::sum_power);
  CHECK(back.regime == Regime::at_infinity);
  for (double r : {0.3, 1.7}) {
    const Vec x{r, -r * 0.5};
    CHECK(eval_g(back, x) == eval_g(g, x));
  }
}

TEST_CASE("grid function CSV round trip preserves values") {
  GridFunction u = GridFunction::from_callable(0.0, 1.0, 17, 2, [](double t) {
    return Vec{std::sin(3.0 * t) * 1e-7, t * t - 0.3};
  });
  const fs::path p = sandbox() / "u.csv";
  write_csv(u, p.string());
  const GridFunction v = read_csv(p.string());
  REQUIRE(v.n == u.n);
  REQUIRE(v.dim == u.dim);
  for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(v.values[i] == u.values[i]);
  CHECK_FALSE(v.zero_boundary);
}

TEST_CASE("gates command exit codes and determinism") {
  const fs::path good = write_file("quartic.prob", kQuarticFile);
  std::string rep1, rep2;
  CHECK(run_quiet({"gates", good.string()}, &rep1) == 0);
  CHECK(run_quiet({"gates", good.string()}, &rep2) == 0);
  CHECK(rep1 == rep2);  // byte-identical reports
  CHECK(rep1.find("gates.B.holds = true") != std::string::npos);

  std::string text = kQuarticFile;
  auto pos = text.find("witness.rho0 = 0.5");
  text.replace(pos, std::string("witness.rho0 = 0.5").size(), "witness.rho0 = 2");
  pos = text.find("witness.g.value = 0.0625");
  text.replace(pos, std::string("witness.g.value = 0.0625").size(), "witness.g.value = 16");
  const fs::path failing = write_file("quartic_rho2.prob", text);
  std::string rep3;
  CHECK(run_quiet({"gates", failing.string()}, &rep3) == 1);
  CHECK(rep3.find("gates.A.holds = false") != std::string::npos);
  CHECK(rep3.find("gates.A.lhs = 16") != std::string::npos);
}

TEST_CASE("check command is deterministic for a fixed seed") {
  const fs::path good = write_file("quartic.prob", kQuarticFile);
  std::string rep1, rep2;
  CHECK(run_quiet({"check", good.string(), "--samples", "400", "--seed", "7"}, &rep1) == 0);
  CHECK(run_quiet({"check", good.string(), "--samples", "400", "--seed", "7"}, &rep2) == 0);
  CHECK(rep1 == rep2);
  CHECK(rep1.find("hypothesis.all_passed = true") != std::string::npos);

  // an overstated Lambda must be caught and exit 1
  std::string text = kQuarticFile;
  const auto pos = text.find("witness.Lambda = 1");
  text.replace(pos, std::string("witness.Lambda = 1").size(), "witness.Lambda = 3");
  const fs::path bad = write_file("quartic_lambda3.prob", text);
  CHECK(run_quiet({"check", bad.string(), "--samples", "400"}, nullptr) == 1);
}

TEST_CASE("indices command reports the embedding constant") {
  const fs::path good = write_file("quartic.prob", kQuarticFile);
  std::string rep;
  CHECK(run_quiet({"indices", good.string()}, &rep) == 0);
  CHECK(report_value(rep, "indices.p_G") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(report_value(rep, "indices.q_G") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(report_value(rep, "embedding.C_inf_G") ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(report_value(rep, "delta2.constant") == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("solve, norms, and verify round trip through CSV files") {
  const fs::path good = write_file("quartic.prob", kQuarticFile);
  const fs::path out = sandbox() / "solve_out";
  std::string rep;
  const int rc = run_quiet({"solve", good.string(), "--grid-n", "48", "--samples", "100", "--out",
                            out.string()},
                           &rep);
  CHECK(rc == 0);
  CHECK(rep.find("solve.converged = true") != std::string::npos);
  REQUIRE(fs::exists(out / "solution.csv"));
  REQUIRE(fs::exists(out / "report.txt"));

  std::string vrep;
  CHECK(run_quiet({"verify", good.string(), "--input", (out / "solution.csv").string()}, &vrep) ==
        0);
  CHECK(vrep.find("verify.weak_residual") != std::string::npos);

  std::string nrep;
  CHECK(run_quiet({"norms", good.string(), "--input", (out / "solution.csv").string()}, &nrep) ==
        0);
  CHECK(nrep.find("norms.w0_norm") != std::string::npos);
}

TEST_CASE("verify accepts the closed-form solution of the linear problem") {
  std::string text = kQuarticFile;
  auto pos = text.find("V.kappa = 1");
  text.replace(pos, std::string("V.kappa = 1").size(), "V.kappa = 0");
  pos = text.find("f.kind = zero");
  text.replace(pos, std::string("f.kind = zero").size(), "f.kind = constant\nf.value = 1");
  const fs::path file = write_file("linear_verify.prob", text);

  GridFunction u = GridFunction::from_callable(0.0, 1.0, 100, 1,
                                               [](double t) { return Vec{t * (t - 1.0) / 2.0}; });
  u.set_zero_boundary();
  const fs::path csv = sandbox() / "parabola.csv";
  write_csv(u, csv.string());

  std::string rep;
  CHECK(run_quiet({"verify", file.string(), "--input", csv.string()}, &rep) == 0);
  CHECK(report_value(rep, "verify.weak_residual") < 1e-10);
  CHECK(report_value(rep, "verify.strong_residual") < 1e-4);  // O(h^2) bound at n = 100
}

TEST_CASE("solve on a convex problem exits with the violation code") {
  std::string text = kQuarticFile;
  auto pos = text.find("V.kappa = 1");
  text.replace(pos, std::string("V.kappa = 1").size(), "V.kappa = 0");
  pos = text.find("f.kind = zero");
  text.replace(pos, std::string("f.kind = zero").size(), "f.kind = constant\nf.value = 1");
  const fs::path file = write_file("linear.prob", text);
  std::string rep;
  CHECK(run_quiet({"solve", file.string(), "--grid-n", "32", "--samples", "50"}, &rep) == 1);
  CHECK(rep.find("solve.geometry_ok = false") != std::string::npos);
  CHECK(rep.find("minimizer") != std::string::npos);
  fs::remove("solution.csv");  // default out dir is the working directory
}

TEST_CASE("missing problem file is a numeric failure exit") {
  CHECK(run_quiet({"gates", (sandbox() / "no_such_file.prob").string()}) == 2);
}

TEST_CASE("CSV with a nonuniform grid is rejected") {
  const fs::path good = write_file("quartic.prob", kQuarticFile);
  const fs::path bad = write_file("warped.csv",
                                  "t,u1\n0,0\n0.3,1\n0.5,1\n1,0\n");
  CHECK(run_quiet({"norms", good.string(), "--input", bad.string()}) == 2);
}
