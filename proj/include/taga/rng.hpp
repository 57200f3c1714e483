// Deterministic 64-bit RNG streams (splitmix64). Every stochastic component
// derives its own substream from (seed, path...), so results do not depend on
// call ordering or thread scheduling.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>

namespace taga {

constexpr std::uint64_t kGolden64 = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Substream for (seed, path...). Identical paths give identical streams.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(seed + kGolden64);
    for (std::uint64_t p : path) s = mix64(s ^ mix64(p + kGolden64));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += kGolden64;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), exact (rejection sampling). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  template <class Vec>
  void shuffle(Vec& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace taga
