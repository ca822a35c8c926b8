#pragma once

#include <cstdint>
#include <random>

namespace graspkit {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: the value for (key, counter) does not depend on how
/// many other values were drawn, so parallel and serial callers agree.
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(mix64(key) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Unbiased integer in [0, n) from a counter-based stream (rejection on the
/// Lemire multiply-shift). `n` must be positive.
std::uint64_t counter_uniform_index(std::uint64_t key, std::uint64_t a, std::uint64_t b, std::uint64_t n);

/// Sequential generator with portable transforms. The engine sequence is
/// fixed by the standard; the distributions here are written out so results
/// do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double normal();
  /// Poisson count; exact inversion for small means, normal approximation above 500.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace graspkit
