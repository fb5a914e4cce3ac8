#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "avi/streaming_stats.hpp"

namespace avi {

// Online regression of a scalar target on a covariate vector z. Regressors
// only ever receive training pairs through fit_update; predict() must not
// learn from the points it is queried at.
class OnlineRegressor {
 public:
  virtual ~OnlineRegressor() = default;

  /// Ingest one training pair. The first call fixes the dimension of z.
  virtual void fit_update(std::span<const double> z, double target) = 0;

  /// Deterministic given the training history. With no training data the
  /// prediction is 0.
  virtual double predict(std::span<const double> z) const = 0;

  /// Number of training pairs seen.
  virtual std::size_t size() const = 0;

  virtual std::string name() const = 0;
};

using RegressorFactory = std::function<std::unique_ptr<OnlineRegressor>()>;

/// Averages the targets of the k(n) nearest stored training points
/// (Euclidean). Distance ties break toward the earlier training point.
/// Storage is an append-only list scanned linearly on every prediction.
class KnnRegressor final : public OnlineRegressor {
 public:
  using NeighborRule = std::function<std::size_t(std::size_t n)>;

  /// ceil(n^{2/3}).
  static std::size_t default_rule(std::size_t n);

  explicit KnnRegressor(NeighborRule rule = default_rule);

  void fit_update(std::span<const double> z, double target) override;
  double predict(std::span<const double> z) const override;
  std::size_t size() const override { return targets_.size(); }
  std::string name() const override { return "knn"; }

 private:
  NeighborRule rule_;
  std::size_t dim_ = 0;
  std::vector<double> points_;
  std::vector<double> targets_;
  double target_sum_ = 0.0;
  mutable std::vector<std::pair<double, std::size_t>> scratch_;
};

/// Nadaraya-Watson with a Gaussian product kernel and per-coordinate
/// bandwidths h_j(n). Falls back to the global training mean when the kernel
/// mass underflows to zero.
class KernelRegressor final : public OnlineRegressor {
 public:
  /// Maps (n, per-coordinate training std) to per-coordinate bandwidths.
  using BandwidthRule =
      std::function<std::vector<double>(std::size_t n, std::span<const double> coord_std)>;

  /// h_j = n^{-1/(4+d)} * s_j, with s_j replaced by 1 when it is zero.
  static std::vector<double> default_rule(std::size_t n, std::span<const double> coord_std);

  /// h_j = h for every coordinate.
  static BandwidthRule fixed(double h);

  explicit KernelRegressor(BandwidthRule rule = default_rule);

  void fit_update(std::span<const double> z, double target) override;
  double predict(std::span<const double> z) const override;
  std::size_t size() const override { return targets_.size(); }
  std::string name() const override { return "kernel"; }

 private:
  BandwidthRule rule_;
  std::size_t dim_ = 0;
  std::vector<double> points_;
  std::vector<double> targets_;
  std::vector<MomentAccumulator> coord_stats_;
  double target_sum_ = 0.0;
};

/// Partitioning (regressogram) estimate: the mean target of training points
/// in the same cubic cell as z. Cells have side h_j = c * N^{-1/(2+d)} * s_j,
/// where N is the largest power of two not above n; the grid is re-centred
/// and rebuilt from the stored points whenever n reaches a power of two, so
/// updates and predictions are O(1) amortized. Empty cells fall back to the
/// global training mean. Supports d <= 4.
class PartitionRegressor final : public OnlineRegressor {
 public:
  static constexpr std::size_t kMaxDim = 4;

  explicit PartitionRegressor(double width_scale = 1.0);

  void fit_update(std::span<const double> z, double target) override;
  double predict(std::span<const double> z) const override;
  std::size_t size() const override { return targets_.size(); }
  std::string name() const override { return "partition"; }

  struct Cell {
    std::uint64_t count = 0;
    double sum = 0.0;
  };

  /// Cell containing z under the current grid.
  std::uint64_t cell_key(std::span<const double> z) const;
  const Cell* find_cell(std::uint64_t key) const;

  /// Incremented every time the grid is rebuilt.
  std::uint64_t epoch() const { return epoch_; }
  double global_mean() const;
  std::size_t dim() const { return dim_; }

 private:
  void rebuild();

  double width_scale_;
  std::size_t dim_ = 0;
  std::vector<double> points_;
  std::vector<double> targets_;
  std::vector<MomentAccumulator> coord_stats_;
  std::vector<double> origin_;
  std::vector<double> inv_width_;
  std::unordered_map<std::uint64_t, Cell> cells_;
  double target_sum_ = 0.0;
  std::uint64_t epoch_ = 0;
};

/// Factory for "knn", "kernel" or "partition" with default tuning.
RegressorFactory regressor_factory(const std::string& name);
std::vector<std::string> regressor_names();

}  // namespace avi
