#include "avi/av_mean.hpp"

#include <cmath>
#include <string>

#include "avi/rs_dist.hpp"

namespace avi {
namespace {

// sigma / |mu| below this is treated as a constant stream.
constexpr double kRelativeDegeneracy = 1e-12;

void check_sequence(std::uint64_t k, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("start index m must be >= 1");
  if (k < m) {
    throw SequencingError("time index k=" + std::to_string(k) +
                          " precedes start index m=" + std::to_string(m));
  }
}

}  // namespace

AlphaLevel::AlphaLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie strictly between 0 and 1");
  }
}

bool is_degenerate(const MomentAccumulator& stats) {
  if (stats.empty()) return true;
  const double var = stats.variance();
  if (var == 0.0) return true;
  const double mu = stats.mean();
  return var <= kRelativeDegeneracy * kRelativeDegeneracy * mu * mu;
}

double log_ratio(std::uint64_t k, std::uint64_t m) {
  return std::log(static_cast<double>(k)) - std::log(static_cast<double>(m));
}

double rs_statistic(const MomentAccumulator& stats, std::uint64_t m) {
  check_sequence(stats.count(), m);
  if (is_degenerate(stats)) {
    throw std::domain_error("rs_statistic: zero sample variance");
  }
  const double k = static_cast<double>(stats.count());
  const double mu = stats.mean();
  return k * mu * mu / stats.variance() - log_ratio(stats.count(), m);
}

double anytime_p_value(const MomentAccumulator& stats, std::uint64_t m) {
  check_sequence(stats.count(), m);
  if (is_degenerate(stats)) return 1.0;
  return rs_survival(rs_statistic(stats, m));
}

Interval confidence_sequence(const MomentAccumulator& stats, std::uint64_t m,
                             AlphaLevel alpha) {
  check_sequence(stats.count(), m);
  const double mu = stats.mean();
  if (is_degenerate(stats)) return {mu, mu};
  const double k = static_cast<double>(stats.count());
  const double level = rs_quantile(1.0 - alpha.value()) + log_ratio(stats.count(), m);
  const double radius = std::sqrt(stats.variance()) * std::sqrt(level / k);
  return {mu - radius, mu + radius};
}

bool anytime_test(const MomentAccumulator& stats, std::uint64_t m, AlphaLevel alpha) {
  return anytime_p_value(stats, m) <= alpha.value();
}

AnytimeResult evaluate(const MomentAccumulator& stats, std::uint64_t m, AlphaLevel alpha) {
  AnytimeResult r;
  r.k = stats.count();
  r.m = m;
  r.p_value = anytime_p_value(stats, m);
  const Interval cs = confidence_sequence(stats, m, alpha);
  r.lower = cs.lower;
  r.upper = cs.upper;
  r.reject = r.p_value <= alpha.value();
  r.degenerate = is_degenerate(stats);
  return r;
}

double boundary(std::uint64_t k, std::uint64_t m, double x) {
  check_sequence(k, m);
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("boundary: x must be finite and nonnegative");
  }
  return std::sqrt(x + log_ratio(k, m));
}

}  // namespace avi
