#include "graspkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace graspkit {

std::uint64_t counter_uniform_index(std::uint64_t key, std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (std::uint64_t round = 0;; ++round) {
    const std::uint64_t x = counter_hash(key, a, b ^ (round << 40));
    const unsigned __int128 product = static_cast<unsigned __int128>(x) * n;
    if (static_cast<std::uint64_t>(product) >= threshold) return static_cast<std::uint64_t>(product >> 64);
  }
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 500.0) {
    const double v = std::floor(mean + std::sqrt(mean) * normal() + 0.5);
    return v < 0.0 ? 0 : static_cast<std::uint64_t>(v);
  }
  // Inversion by sequential search.
  double p = std::exp(-mean);
  double cdf = p;
  const double u = uniform();
  std::uint64_t k = 0;
  while (u > cdf && k < 10000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

}  // namespace graspkit
