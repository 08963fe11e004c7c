#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mps/orlicz.hpp"
#include "mps/rng.hpp"

using namespace mps;

namespace {

GridFunction random_grid(Rng& rng, int n, int dim, double amp, bool zero_boundary) {
  GridFunction u = GridFunction::zeros(0.0, 1.0, n, dim, zero_boundary);
  const int lo = zero_boundary ? 1 : 0;
  const int hi = zero_boundary ? n - 1 : n;
  for (int k = lo; k <= hi; ++k)
    for (int c = 0; c < dim; ++c) u.node(k)[c] = amp * rng.normal();
  return u;
}

}  // namespace

TEST_CASE("modular of simple functions") {
  const auto g = GFunctionSpec::power(2.0, 1.0, 1);
  GridFunction u = GridFunction::from_callable(0.0, 1.0, 64, 1, [](double) { return Vec{1.5}; });
  CHECK(modular(g, u) == doctest::Approx(2.25).epsilon(1e-14));

  const GridFunction z = GridFunction::zeros(0.0, 1.0, 8, 1, true);
  CHECK(modular(g, z) == 0.0);

  GridFunction lin = GridFunction::from_callable(0.0, 1.0, 64, 1, [](double t) { return Vec{t}; });
  CHECK(modular(g, lin, true) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Luxemburg norm of a constant is the constant on a unit interval") {
  const auto g3 = GFunctionSpec::power(3.0, 1.0, 1);
  GridFunction u = GridFunction::from_callable(0.0, 1.0, 32, 1, [](double) { return Vec{2.0}; });
  CHECK(luxemburg_norm(g3, u) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(luxemburg_norm(g3, GridFunction::zeros(0.0, 1.0, 8, 1, true)) == 0.0);
}

TEST_CASE("Luxemburg norm of t on [0,1] against the quadrature oracle") {
  const auto g = GFunctionSpec::power(2.0, 1.0, 1);
  const int n = 100;
  GridFunction u = GridFunction::from_callable(0.0, 1.0, n, 1, [](double t) { return Vec{t}; });
  // lambda solves the trapezoid sum of (t_k/lambda)^2 = 1 directly
  const double h = 1.0 / n;
  double s = 0.5 * (0.0 + 1.0);
  for (int k = 1; k < n; ++k) s += (h * k) * (h * k);
  const double expected = std::sqrt(s * h);
  CHECK(luxemburg_norm(g, u) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("norm-modular consistency: R(u/||u||) = 1") {
  Rng rng(kDefaultSeed);
  const std::vector<GFunctionSpec> specs = {
      GFunctionSpec::power(2.0, 0.5, 1),
      GFunctionSpec::sum_power({2.0, 3.0}, {1.0, 1.0}),
      GFunctionSpec::power_log(2.0, 1.0, 2),
  };
  for (const auto& g : specs) {
    for (int i = 0; i < 80; ++i) {
      GridFunction u = random_grid(rng, 24, g.dimension, std::pow(10.0, rng.uniform(-2.0, 2.0)), true);
      const double nrm = luxemburg_norm(g, u);
      if (nrm == 0.0) continue;
      GridFunction w = u;
      w *= 1.0 / nrm;
      CHECK(modular(g, w) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("Luxemburg norm is positively homogeneous") {
  Rng rng(99);
  const auto g = GFunctionSpec::power_log(2.0, 1.0, 1);
  for (int i = 0; i < 40; ++i) {
    GridFunction u = random_grid(rng, 16, 1, 1.0, true);
    const double c = std::pow(10.0, rng.uniform(-3.0, 3.0));
    GridFunction cu = u;
    cu *= c;
    const double a = luxemburg_norm(g, cu);
    const double b = c * luxemburg_norm(g, u);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("norm bundle of the parabola bump") {
  const auto g = GFunctionSpec::power(2.0, 1.0, 1);
  const int n = 64;
  GridFunction u =
      GridFunction::from_callable(0.0, 1.0, n, 1, [](double t) { return Vec{t * (1.0 - t)}; });
  u.set_zero_boundary();
  const NormBundle nb = norm_bundle(g, u);
  CHECK(nb.sup_norm == doctest::Approx(0.25).epsilon(1e-14));
  // derivative cells carry 1 - 2 t_mid exactly; the norm is the square root
  // of the midpoint sum
  double s = 0.0;
  const double h = 1.0 / n;
  for (int k = 0; k < n; ++k) {
    const double tm = (k + 0.5) * h;
    s += h * (1.0 - 2.0 * tm) * (1.0 - 2.0 * tm);
  }
  CHECK(nb.lux_du == doctest::Approx(std::sqrt(s)).epsilon(1e-9));
  CHECK(nb.lux_du == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(2e-4));
  CHECK(nb.w_norm == doctest::Approx(nb.lux_u + nb.lux_du).epsilon(1e-14));
  CHECK(nb.w0_norm == doctest::Approx(nb.lux_du).epsilon(1e-14));
}

TEST_CASE("Poincare ratio of the sine bump is about 1/pi") {
  const auto g = GFunctionSpec::power(2.0, 1.0, 1);
  const double pi = 3.14159265358979323846;
  GridFunction u = GridFunction::from_callable(0.0, 1.0, 256, 1,
                                               [&](double t) { return Vec{std::sin(pi * t)}; });
  u.set_zero_boundary();
  const double nu = luxemburg_norm(g, u, false);
  const double ndu = luxemburg_norm(g, u, true);
  CHECK(nu <= 1.0 * ndu);
  CHECK(nu / ndu == doctest::Approx(1.0 / pi).epsilon(1e-3));
}

TEST_CASE("Poincare never fails on random zero-boundary functions") {
  Rng rng(kDefaultSeed);
  const std::vector<GFunctionSpec> specs = {
      GFunctionSpec::power(2.0, 0.5, 1),
      GFunctionSpec::power_log(2.0, 1.0, 1),
  };
  for (const auto& g : specs) {
    for (int i = 0; i < 500; ++i) {
      const int n = 4 + static_cast<int>(rng.uniform() * 28);
      GridFunction u = random_grid(rng, n, 1, std::pow(10.0, rng.uniform(-1.0, 1.0)), true);
      const double lhs = luxemburg_norm(g, u, false);
      const double rhs = (u.b - u.a) * luxemburg_norm(g, u, true);
      CHECK(lhs <= rhs + 5e-10 * (1.0 + rhs));
    }
  }
}

TEST_CASE("homogeneous equality case of the power-law comparison") {
  // for G = |x|^2 the modular is exactly the squared norm
  const auto g = GFunctionSpec::power(2.0, 1.0, 1);
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    GridFunction u = random_grid(rng, 20, 1, 4.0, true);
    const double nrm = luxemburg_norm(g, u);
    if (nrm <= 1.0) continue;
    const double r = modular(g, u);
    CHECK(r == doctest::Approx(nrm * nrm).epsilon(1e-8));
    CHECK(r >= std::pow(nrm, 2.0) - 1e-8 * (1.0 + r));
  }
}

TEST_CASE("inequality battery passes on random pairs") {
  const auto g = GFunctionSpec::sum_power({2.0, 3.0}, {1.0, 1.0});
  const EmbeddingData emb = embedding_constant(g, 1.0);
  Rng rng(kDefaultSeed);
  std::vector<std::pair<GridFunction, GridFunction>> pairs;
  for (int i = 0; i < 12; ++i)
    pairs.emplace_back(random_grid(rng, 16, 2, 1.5, true), random_grid(rng, 16, 2, 1.5, false));
  // the zero function paired with anything is trivially fine
  pairs.emplace_back(GridFunction::zeros(0.0, 1.0, 16, 2, true), random_grid(rng, 16, 2, 1.0, false));
  const InequalityReport rep = check_inequalities(g, pairs, emb);
  for (const auto& c : rep.checks) {
    INFO(c.name, " pair ", c.index, " lhs ", c.lhs, " rhs ", c.rhs);
    CHECK_FALSE((!c.passed && !c.skipped));
  }
  CHECK(rep.violations == 0);
  CHECK(rep.skipped == 0);
}

TEST_CASE("boundedness equivalence on generated families") {
  const auto g = GFunctionSpec::power_log(2.0, 1.0, 1);
  const DoublingProbe probe = delta2_nabla2_probe(g);
  Rng rng(17);
  // modular-bounded family: norms stay below max(1, bound)
  for (int i = 0; i < 50; ++i) {
    GridFunction u = random_grid(rng, 16, 1, 2.0, true);
    const double r = modular(g, u);
    if (r == 0.0) continue;
    GridFunction w = u;
    w *= std::pow(2.0 / std::max(r, 2.0), 1.0);  // scale modulars made <= ~2 only when large
    const double rw = modular(g, w);
    const double nw = luxemburg_norm(g, w);
    CHECK(nw <= std::max(1.0, rw) + 1e-8);
  }
  // norm-bounded family: modulars stay below the doubling constant
  for (int i = 0; i < 50; ++i) {
    GridFunction u = random_grid(rng, 16, 1, 2.0, true);
    const double nrm = luxemburg_norm(g, u);
    if (nrm == 0.0) continue;
    GridFunction w = u;
    w *= 2.0 / nrm;  // ||w|| = 2 = 2 * ||w/2|| with R(w/2) <= 1
    const double rw = modular(g, w);
    CHECK(rw <= probe.delta2_constant + 1e-6);
  }
}

TEST_CASE("modular coercivity along rays") {
  const auto g = GFunctionSpec::power(2.0, 0.5, 1);
  Rng rng(23);
  GridFunction u0 = random_grid(rng, 16, 1, 1.0, true);
  double prev = 0.0;
  for (int k = 1; k <= 1000; k *= 2) {
    GridFunction uk = u0;
    uk *= static_cast<double>(k);
    const double ratio = modular(g, uk) / luxemburg_norm(g, uk);
    CHECK(ratio >= prev - 1e-9 * (1.0 + ratio));
    prev = ratio;
  }
  CHECK(prev > 100.0 * (modular(g, u0) / luxemburg_norm(g, u0)));
}
