#pragma once

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "avi/random.hpp"

namespace avi {

// Scalar distribution families with analytically known mean and standard
// deviation. All built-in shapes are centered; `shift` moves the mean.
//
//   normal       N(0, 1)
//   exponential  Exp(1) - 1
//   rademacher   +-1 with probability 1/2 each
//   bernoulli    (B - 0.1) / 0.3 with B ~ Bernoulli(0.1)
//   constant     0
class ScalarFamily {
 public:
  enum class Kind { Normal, Exponential, Rademacher, Bernoulli, Constant };

  explicit ScalarFamily(Kind kind, double shift = 0.0) : kind_(kind), shift_(shift) {}

  /// Throws std::invalid_argument for an unknown name.
  static ScalarFamily from_name(std::string_view name, double shift = 0.0);
  static std::vector<std::string> names();

  Kind kind() const { return kind_; }
  std::string name() const;
  double shift() const { return shift_; }
  double mean() const { return shift_; }
  double stddev() const { return kind_ == Kind::Constant ? 0.0 : 1.0; }

  /// Calls fn(sampler) with a concrete sampler object; sampler(engine) draws
  /// one observation. Dispatching once per replication keeps the per-draw
  /// path free of branches on the family.
  template <class Fn>
  decltype(auto) visit(Fn&& fn) const;

 private:
  Kind kind_;
  double shift_;
};

namespace sampler {

struct Normal {
  double shift;
  boost::random::normal_distribution<double> dist{};
  double operator()(Engine& g) { return shift + dist(g); }
};

struct Exponential {
  double shift;
  boost::random::exponential_distribution<double> dist{};
  double operator()(Engine& g) { return shift + dist(g) - 1.0; }
};

struct Rademacher {
  double shift;
  std::uint64_t bits = 0;
  int left = 0;
  double operator()(Engine& g) {
    if (left == 0) {
      bits = g();
      left = 64;
    }
    const double v = (bits & 1u) ? 1.0 : -1.0;
    bits >>= 1;
    --left;
    return shift + v;
  }
};

struct Bernoulli {
  double shift;
  static constexpr double kP = 0.1;
  static constexpr double kHigh = (1.0 - kP) / 0.3;
  static constexpr double kLow = -kP / 0.3;
  double operator()(Engine& g) { return shift + (uniform01(g) < kP ? kHigh : kLow); }
};

struct Constant {
  double shift;
  double operator()(Engine&) const { return shift; }
};

}  // namespace sampler

template <class Fn>
decltype(auto) ScalarFamily::visit(Fn&& fn) const {
  switch (kind_) {
    case Kind::Normal:
      return fn(sampler::Normal{shift_});
    case Kind::Exponential:
      return fn(sampler::Exponential{shift_});
    case Kind::Rademacher:
      return fn(sampler::Rademacher{shift_});
    case Kind::Bernoulli:
      return fn(sampler::Bernoulli{shift_});
    case Kind::Constant:
      break;
  }
  return fn(sampler::Constant{shift_});
}

}  // namespace avi
