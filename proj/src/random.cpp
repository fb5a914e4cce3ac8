#include "avi/random.hpp"

#include <boost/random/normal_distribution.hpp>

namespace avi {

Engine replication_engine(std::uint64_t seed, std::uint64_t replication, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return Engine(seq);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t tag) {
  SplitMix64 a(seed);
  SplitMix64 b(a() ^ replication);
  SplitMix64 c(b() ^ tag);
  return c();
}

double counter_normal(std::uint64_t key, std::uint64_t counter) {
  SplitMix64 g(key ^ SplitMix64(counter)());
  boost::random::normal_distribution<double> nd;
  return nd(g);
}

double standard_normal(Engine& g) {
  boost::random::normal_distribution<double> nd;
  return nd(g);
}

}  // namespace avi
