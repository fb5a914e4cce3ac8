#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "avi/av_mean.hpp"
#include "avi/regressors.hpp"
#include "avi/streaming_stats.hpp"

namespace avi {

/// One (X, Y, Z) observation with Z in R^d.
struct Triplet {
  double x = 0.0;
  double y = 0.0;
  std::vector<double> z;
};

/// Residual variance too small to standardize the GCM statistic.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Residual variance below this is reported as degenerate.
inline constexpr double kGcmDegenerateVariance = 1e-12;

// Sequential generalized covariance measure.
//
// Every time step consumes a training triplet and an evaluation triplet. The
// training triplet is fed to both regressors first; the product residual
//
//   R_n = (X_n - mu_x(Z_n)) (Y_n - mu_y(Z_n))
//
// is then formed at the evaluation triplet, so predictions never see the
// point they are evaluated at. The anytime p-value is
// 1 - Psi(n * GCM_n^2 - log(n/m)) with GCM_n = mean(R) / sigma_n.
class GcmState {
 public:
  GcmState(std::unique_ptr<OnlineRegressor> regressor_x,
           std::unique_ptr<OnlineRegressor> regressor_y);

  /// Advances one step and returns R_n. Throws std::invalid_argument on a
  /// dimension mismatch and std::runtime_error naming the regressor when a
  /// prediction is not finite; the state is unchanged in the latter case
  /// except for the regressors having seen the training triplet.
  double update(const Triplet& eval, const Triplet& train);

  std::uint64_t n() const { return residuals_.count(); }
  std::size_t dim() const { return dim_; }
  const MomentAccumulator& residual_stats() const { return residuals_; }

  /// sigma_n^2 = mean(R^2) - mean(R)^2, clamped at zero.
  double residual_variance() const;
  bool degenerate() const;

  /// mean(R) / sigma_n. Throws DegenerateError.
  double statistic() const;

  /// Anytime p-value; 1 while degenerate. Throws SequencingError for n < m.
  double p_value(std::uint64_t m) const;

  /// p-value, confidence sequence for E[R], decision and degeneracy flag.
  AnytimeResult evaluate(std::uint64_t m, AlphaLevel alpha) const;

  const OnlineRegressor& regressor_x() const { return *regressor_x_; }
  const OnlineRegressor& regressor_y() const { return *regressor_y_; }

 private:
  std::unique_ptr<OnlineRegressor> regressor_x_;
  std::unique_ptr<OnlineRegressor> regressor_y_;
  MomentAccumulator residuals_;
  std::size_t dim_ = 0;
};

/// sqrt(n) * GCM-dot_n for the fixed-n test: regressors built by `factory`
/// are fit once on `train`, residuals are formed on `eval`. Throws
/// DegenerateError on zero residual variance.
double batch_gcm_statistic(std::span<const Triplet> eval, std::span<const Triplet> train,
                           const RegressorFactory& factory);

/// Two-sided p-value 2 (1 - Phi(|t|)) of a standard-normal statistic.
double two_sided_normal_p_value(double t);

double batch_gcm_p_value(std::span<const Triplet> eval, std::span<const Triplet> train,
                         const RegressorFactory& factory);

// Fixed-n GCM recomputed after every step, for continuous monitoring of the
// batch test. The regressors are partitioning estimates; because a
// partitioning fit is constant on cells, the sums of R_{i,n} and R_{i,n}^2
// over all evaluation points decompose into per-cell moment sums and can be
// updated in O(1) per step instead of refitting and re-predicting all n
// points. At every n the result equals batch_gcm_statistic() with
// PartitionRegressor on the first n pairs, up to rounding.
class PartitionBatchGcm {
 public:
  explicit PartitionBatchGcm(double width_scale = 1.0);

  void add(const Triplet& eval, const Triplet& train);

  std::uint64_t n() const { return count_; }
  double residual_variance() const;
  bool degenerate() const;

  /// sqrt(n) * mean(R) / sigma. Throws DegenerateError.
  double statistic() const;

  /// Two-sided normal p-value; 1 while degenerate.
  double p_value() const;

 private:
  struct Moments {
    double n = 0, x = 0, y = 0, xy = 0, xx = 0, yy = 0, xxy = 0, xyy = 0, xxyy = 0;
    void add(double xv, double yv);
    Moments& operator+=(const Moments& o);
    Moments& operator-=(const Moments& o);
  };
  struct Sums {
    double r = 0.0;
    double r2 = 0.0;
  };
  struct CellState {
    Moments eval;
    bool trained = false;
    Sums contribution;
  };

  static Sums contribution(const Moments& m, double mean_x, double mean_y);
  CellState& cell_at(std::uint64_t key);
  void refresh(std::uint64_t key, CellState& cell);
  void rebuild();
  Sums totals() const;

  PartitionRegressor regressor_x_;
  PartitionRegressor regressor_y_;
  std::unordered_map<std::uint64_t, CellState> cells_;
  Moments untrained_;
  Sums trained_;
  std::vector<double> eval_xy_;
  std::vector<double> eval_z_;
  std::uint64_t epoch_ = 0;
  std::uint64_t count_ = 0;
};

}  // namespace avi
