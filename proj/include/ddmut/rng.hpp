#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ddmut {

/// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the stream identified by (master, path...). Equal inputs give equal seeds.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Seedable pseudo-random stream. Each run owns one; it is not thread safe.
class RngStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Independent child stream for (this stream's seed, index).
  RngStream child(std::uint64_t index) const { return RngStream(derive_seed(seed_, {index})); }

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [lo, hi] (inclusive).
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  /// Uniform index on [0, n).
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

  bool bernoulli(double p) { return uniform01() < p; }

  int binomial(int trials, double p) { return std::binomial_distribution<int>(trials, p)(engine_); }

  /// k distinct indices of [0, n), uniformly chosen, in random order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  engine_type& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  engine_type engine_;
};

}  // namespace ddmut
