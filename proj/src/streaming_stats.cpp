#include "avi/streaming_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace avi {

MomentAccumulator MomentAccumulator::from_moments(std::uint64_t count, double mean,
                                                  double m2) {
  if (!std::isfinite(mean) || !std::isfinite(m2) || m2 < 0.0) {
    throw std::domain_error("MomentAccumulator: mean and m2 must be finite, m2 >= 0");
  }
  if (count == 0 && (mean != 0.0 || m2 != 0.0)) {
    throw std::domain_error("MomentAccumulator: empty accumulator must have zero moments");
  }
  MomentAccumulator acc;
  acc.count_ = count;
  acc.mean_ = mean;
  acc.m2_ = m2;
  return acc;
}

void MomentAccumulator::update(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("MomentAccumulator::update: observation must be finite");
  }
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
  if (m2_ < 0.0) m2_ = 0.0;
}

double MomentAccumulator::mean() const {
  if (count_ == 0) throw std::logic_error("MomentAccumulator: mean of empty stream");
  return mean_;
}

double MomentAccumulator::variance() const {
  if (count_ == 0) throw std::logic_error("MomentAccumulator: variance of empty stream");
  const double v = m2_ / static_cast<double>(count_);
  return v > 0.0 ? v : 0.0;
}

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b) {
  if (a.count_ == 0) return b;
  if (b.count_ == 0) return a;
  MomentAccumulator out;
  out.count_ = a.count_ + b.count_;
  const double na = static_cast<double>(a.count_);
  const double nb = static_cast<double>(b.count_);
  const double n = static_cast<double>(out.count_);
  const double delta = b.mean_ - a.mean_;
  out.mean_ = a.mean_ + delta * (nb / n);
  out.m2_ = a.m2_ + b.m2_ + delta * delta * (na * nb / n);
  return out;
}

}  // namespace avi
