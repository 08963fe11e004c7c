#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mps/vecops.hpp"

namespace mps {

// Deterministic random source. Uniform and normal variates are derived from
// the raw 64-bit stream with fixed algorithms so that a given seed produces
// the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one spare value is cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Vec normal_vec(int n) {
    Vec v(static_cast<std::size_t>(n));
    for (double& x : v) x = normal();
    return v;
  }

  Vec unit_vector(int n) {
    Vec v = normal_vec(n);
    double r = norm2(v);
    while (r < 1e-300) {
      v = normal_vec(n);
      r = norm2(v);
    }
    for (double& x : v) x /= r;
    return v;
  }

  // uniform over the ball of given radius
  Vec in_ball(int n, double radius) {
    Vec v = unit_vector(n);
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    for (double& x : v) x *= r;
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace mps
