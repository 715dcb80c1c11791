#ifndef AVPOOL_RNG_HPP
#define AVPOOL_RNG_HPP

// Platform-independent random streams. std::mt19937_64's output sequence is
// fixed by the standard, but the std distributions are not, so sampling is
// done here with explicit integer arithmetic.

#include <cstdint>
#include <random>

namespace avpool {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream identifiers keep substreams of one master seed apart.
enum class StreamKind : std::uint64_t {
  Demand = 1,
  Layout = 2,
  Instance = 3,
  Config = 4,
};

/// Seed of substream `index` of `kind` under `master`. Independent of the
/// order in which substreams are requested.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, StreamKind kind,
                                                  std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  return splitmix64(h ^ index);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) {
      next_u64();
      return false;
    }
    return uniform01() < p;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace avpool

#endif  // AVPOOL_RNG_HPP
