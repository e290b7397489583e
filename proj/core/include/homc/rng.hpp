#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace homc {

/// xoshiro256** seeded through splitmix64. Self-contained so that seeded
/// runs reproduce bit-identically regardless of standard-library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t x = z;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      word = x ^ (x >> 31);
    }
  }

  /// Independent substream: one chain per (seed, stream) pair, so parallel
  /// consumers draw identical values regardless of execution order.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xd1342543de82ef95ULL));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // rejection to remove modulo bias
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span + 1) % span;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v > limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  double exponential() { return -std::log1p(-uniform01()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Uniform sample of the probability simplex (Dirichlet(1,...,1)):
/// normalized standard exponentials.
inline std::vector<double> sample_simplex(Rng& rng, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& v : x) {
    v = rng.exponential() + 1e-300;
    sum += v;
  }
  for (auto& v : x) v /= sum;
  return x;
}

}  // namespace homc
