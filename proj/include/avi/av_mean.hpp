#pragma once

#include <cstdint>
#include <stdexcept>

#include "avi/streaming_stats.hpp"

namespace avi {

/// Significance level, strictly inside (0, 1).
class AlphaLevel {
 public:
  explicit AlphaLevel(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Raised when a quantity indexed by time k is requested before the start
/// index m. The anytime guarantee begins at m, so earlier values are refused.
class SequencingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Interval {
  double lower;
  double upper;
  bool contains(double v) const { return lower <= v && v <= upper; }
};

/// Snapshot of the anytime-valid inference for the mean at time k.
struct AnytimeResult {
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  double p_value = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  bool reject = false;
  /// Zero sample variance: p = 1 and a point interval at the mean.
  bool degenerate = false;
};

/// True when the running variance is zero up to rounding relative to the
/// mean. Such states carry no information about the mean's sign.
bool is_degenerate(const MomentAccumulator& stats);

/// log(k / m) evaluated as log k - log m.
double log_ratio(std::uint64_t k, std::uint64_t m);

/// k mu^2 / sigma^2 - log(k/m), the argument of Psi in the p-value.
/// Requires a non-degenerate state with k >= m.
double rs_statistic(const MomentAccumulator& stats, std::uint64_t m);

/// 1 - Psi(k mu^2 / sigma^2 - log(k/m)). Returns 1 for degenerate states.
double anytime_p_value(const MomentAccumulator& stats, std::uint64_t m);

/// mu +- sigma sqrt((Psi^{-1}(1 - alpha) + log(k/m)) / k).
Interval confidence_sequence(const MomentAccumulator& stats, std::uint64_t m,
                             AlphaLevel alpha);

/// Reject H0: mean = 0 iff the anytime p-value is at most alpha.
bool anytime_test(const MomentAccumulator& stats, std::uint64_t m, AlphaLevel alpha);

/// p-value, interval, decision and degeneracy flag in one call.
AnytimeResult evaluate(const MomentAccumulator& stats, std::uint64_t m, AlphaLevel alpha);

/// Time-uniform threshold for |S_k| / sqrt(k): sqrt(x + log(k/m)).
double boundary(std::uint64_t k, std::uint64_t m, double x);

}  // namespace avi
