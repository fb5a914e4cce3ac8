#pragma once

#include <cstdint>

namespace avi {

// Running count, mean and central second moment of a scalar stream.
//
// variance() is population-normalized, m2 / k, which is the estimator the
// anytime p-value and confidence sequence are built on. Updates use the
// Welford recurrence; merge() uses the Chan et al. pairwise combination so
// accumulators from independent workers can be reduced in any order.
class MomentAccumulator {
 public:
  MomentAccumulator() = default;

  /// Rebuild an accumulator from its sufficient statistics. m2 must be >= 0
  /// and count = 0 requires mean = m2 = 0.
  static MomentAccumulator from_moments(std::uint64_t count, double mean, double m2);

  /// Throws std::domain_error on non-finite x and leaves the state unchanged.
  void update(double x);

  std::uint64_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  /// Throws std::logic_error when empty.
  double mean() const;

  /// m2 / count, clamped at zero. Throws std::logic_error when empty.
  double variance() const;

  double m2() const { return m2_; }

  friend MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b);

  bool operator==(const MomentAccumulator&) const = default;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b);

}  // namespace avi
