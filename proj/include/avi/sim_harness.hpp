#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "avi/experiment_config.hpp"

namespace avi {

/// First k in [m, horizon] at which a replication rejected (or missed), or
/// kNever.
inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

/// Fraction of replications that have rejected at or before k, for k in
/// [m, horizon]. Built from per-replication first-event times, so it is
/// nondecreasing and does not depend on how replications were scheduled.
class RejectionCurve {
 public:
  /// Events outside [m, horizon] other than kNever throw std::invalid_argument.
  RejectionCurve(std::uint64_t m, std::uint64_t horizon,
                 std::span<const std::uint64_t> first_events);

  std::uint64_t m() const { return m_; }
  std::uint64_t horizon() const { return horizon_; }
  std::uint64_t replications() const { return replications_; }

  /// Number of replications with an event at or before k.
  std::uint64_t count(std::uint64_t k) const;
  double value(std::uint64_t k) const;
  double terminal() const { return value(horizon_); }

  /// counts()[i] belongs to k = m + i.
  std::span<const std::uint64_t> counts() const { return counts_; }

  friend bool operator==(const RejectionCurve&, const RejectionCurve&) = default;

 private:
  std::uint64_t m_;
  std::uint64_t horizon_;
  std::uint64_t replications_;
  std::vector<std::uint64_t> counts_;
};

/// Time-uniform type-I error of the anytime test of mean 0 under cfg.family.
RejectionCurve run_mean_calibration(const ExperimentConfig& cfg);

/// Calibration at several levels from the same simulated paths; cfg.alpha is
/// ignored. One curve per entry of `alphas`.
std::vector<RejectionCurve> run_mean_calibration(const ExperimentConfig& cfg,
                                                 std::span<const double> alphas);

/// Fraction of replications whose confidence sequence has excluded the true
/// mean (cfg.shift) at some time up to k. Shares streams with
/// run_mean_calibration.
RejectionCurve run_mean_coverage(const ExperimentConfig& cfg);

struct CitCurves {
  /// Cumulative rejections of the anytime SeqGCM test.
  RejectionCurve seqgcm;
  /// Rejected ever by k when the fixed-n GCM test is recomputed at every k
  /// (every batch_stride steps for knn and kernel) and read naively.
  RejectionCurve batchgcm;
};

/// SeqGCM and naive repeated batch GCM on cit-null (cit-null kind) or cit-alt
/// with cfg.rho (cit-alternative kind). Both kinds share streams, so
/// rho = 0 reproduces the null run.
CitCurves run_cit_experiment(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind. For the mean kinds the vector has one curve, for
/// the CIT kinds two (seqgcm, batchgcm).
std::vector<RejectionCurve> run_experiment(const ExperimentConfig& cfg);

}  // namespace avi
