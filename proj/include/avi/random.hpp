#pragma once

#include <cstdint>
#include <random>

namespace avi {

/// Per-replication pseudo-random engine.
using Engine = std::mt19937_64;

/// Engine for replication `replication` of an experiment seeded with `seed`.
/// Streams for distinct (seed, replication, tag) triples are seeded through
/// std::seed_seq and are independent for practical purposes; the same triple
/// always yields the same stream.
Engine replication_engine(std::uint64_t seed, std::uint64_t replication,
                          std::uint64_t tag = 0);

/// SplitMix64. Used as a keyed counter-based source: a generator seeded with
/// mix(key, counter) yields values that depend on nothing else.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// 64-bit key identifying one random stream.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t tag);

/// Standard normal variate determined solely by (key, counter).
double counter_normal(std::uint64_t key, std::uint64_t counter);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double standard_normal(Engine& g);

}  // namespace avi
