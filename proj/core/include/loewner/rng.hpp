// Deterministic random numbers. The mt19937_64 engine is pinned by the
// standard; the uniform/normal transforms are hand-rolled because the
// std::*_distribution classes are implementation-defined and would break
// byte-identical reproducibility across toolchains.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace loewner {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Independent substream for a named purpose; stable under call order.
  Rng fork(std::uint64_t stream_id) const {
    return Rng(splitmix64(seed_mix_ ^ splitmix64(stream_id)));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n) by rejection (exact, unbiased).
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; caches the second deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_mix_ = eng_();  // one draw reserved for fork derivation
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace loewner
