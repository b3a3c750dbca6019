#pragma once

#include <cstdint>
#include <limits>

namespace trunctail {

/// SplitMix64 (Steele, Lea & Flood). Satisfies UniformRandomBitGenerator.
///
/// Streams for independent replications are derived from a master seed and
/// a stream index with `Rng::stream`, so replication r can be generated
/// without touching replications 0..r-1.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr Rng stream(std::uint64_t seed, std::uint64_t index) noexcept {
    // Two rounds of the finalizer decorrelate adjacent indices and seeds.
    return Rng(mix(mix(seed) ^ mix(index + 0xda942042e4dd58b5ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1); never returns either endpoint.
  constexpr double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace trunctail
