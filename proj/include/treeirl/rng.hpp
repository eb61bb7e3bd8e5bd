#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace treeirl {

/// Random engine used throughout. mt19937_64's output sequence is fully
/// specified by the standard, so seeded runs reproduce bit-for-bit on any
/// conforming implementation.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from (master, index). Used to give
/// every run in a sweep its own RNG stream regardless of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= 0x632be59bd9b4e019ull * (index + 1);
  std::uint64_t out = splitmix64(s);
  return out ^ splitmix64(s);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
/// Avoids std::uniform_real_distribution, whose output is not pinned down
/// by the standard.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t rem = ~std::uint64_t{0} % n;
  const std::uint64_t limit = ~std::uint64_t{0} - rem;
  std::uint64_t x = rng();
  while (x > limit) x = rng();
  return x % n;
}

/// Draws an index from a probability vector (entries nonnegative, summing
/// to ~1). Falls back to the last index if rounding leaves a sliver.
inline int sample_categorical(const Eigen::VectorXd& probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (int i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

/// Deterministic pseudo-random value in [-0.5, 0.5) keyed by (seed, a, b).
/// Stateless, so the value is independent of evaluation order.
inline double hash_noise(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  s ^= 0x9e3779b97f4a7c15ull * (a + 0x100000001ull);
  splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4full * (b + 1);
  const std::uint64_t z = splitmix64(s);
  return static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
}

}  // namespace treeirl
