#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace tbcavi {

/// SplitMix64 finalizer applied to (master, stream). Used to derive
/// independent per-replication and per-purpose seeds from one master seed:
///   seed = splitmix64(master ^ splitmix64(stream + 0x9E3779B97F4A7C15))
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded random source. Satisfies UniformRandomBitGenerator so it can drive
/// <random> distributions directly.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  Rng split(std::uint64_t stream) { return Rng(mix_seed(engine_(), stream)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tbcavi
