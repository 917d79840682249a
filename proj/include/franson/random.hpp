#pragma once

#include <cstdint>
#include <limits>

namespace franson {

/// SplitMix64 finaliser; used to derive independent seeds from counters.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Well-known stream labels so that different stages never share draws.
enum class StreamTag : std::uint64_t {
  pulse = 1,
  scan_point = 2,
  classical = 3,
  test = 99,
};

/// xoshiro256** generator seeded through SplitMix64.
///
/// Streams are addressed by (seed, tag, index): every pulse owns an
/// independent stream, so pulse batches can be simulated in any order or on
/// any number of threads and still reproduce the same draws.
class RandomStream {
public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept;
  RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Seed for a child stream; advances this stream.
  std::uint64_t fork() noexcept { return (*this)(); }

private:
  std::uint64_t s_[4];
};

} // namespace franson
