#include "avi/regressors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace avi {
namespace {

void check_point(std::span<const double> z, std::size_t& dim, bool fitting) {
  if (dim == 0) {
    if (!fitting) return;
    if (z.empty()) throw std::invalid_argument("regressor: covariate vector is empty");
    dim = z.size();
  }
  if (z.size() != dim) {
    throw std::invalid_argument("regressor: covariate dimension " + std::to_string(z.size()) +
                                " does not match " + std::to_string(dim));
  }
  for (double v : z) {
    if (!std::isfinite(v)) throw std::domain_error("regressor: non-finite covariate");
  }
}

void check_target(double target) {
  if (!std::isfinite(target)) throw std::domain_error("regressor: non-finite target");
}

}  // namespace

// ---------------------------------------------------------------------------
// k nearest neighbours

std::size_t KnnRegressor::default_rule(std::size_t n) {
  if (n == 0) return 0;
  // Smallest k with k^3 >= n^2, i.e. ceil(n^{2/3}) without rounding surprises.
  const unsigned __int128 n2 = static_cast<unsigned __int128>(n) * n;
  auto k = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n2))));
  auto cube = [](std::size_t v) { return static_cast<unsigned __int128>(v) * v * v; };
  while (k > 1 && cube(k - 1) >= n2) --k;
  while (cube(k) < n2) ++k;
  return k;
}

KnnRegressor::KnnRegressor(NeighborRule rule) : rule_(std::move(rule)) {}

void KnnRegressor::fit_update(std::span<const double> z, double target) {
  check_point(z, dim_, true);
  check_target(target);
  points_.insert(points_.end(), z.begin(), z.end());
  targets_.push_back(target);
  target_sum_ += target;
}

double KnnRegressor::predict(std::span<const double> z) const {
  const std::size_t n = targets_.size();
  if (n == 0) return 0.0;
  std::size_t dim = dim_;
  check_point(z, dim, false);
  std::size_t k = std::min(rule_(n), n);
  if (k == 0) return target_sum_ / static_cast<double>(n);

  scratch_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = points_.data() + i * dim_;
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double diff = p[j] - z[j];
      d2 += diff * diff;
    }
    scratch_[i] = {d2, i};
  }
  if (k < n) {
    std::nth_element(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     scratch_.end());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += targets_[scratch_[i].second];
  return sum / static_cast<double>(k);
}

// ---------------------------------------------------------------------------
// Nadaraya-Watson

std::vector<double> KernelRegressor::default_rule(std::size_t n,
                                                  std::span<const double> coord_std) {
  const double d = static_cast<double>(coord_std.size());
  const double base = std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), -1.0 / (4.0 + d));
  std::vector<double> h(coord_std.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    h[j] = base * (coord_std[j] > 0.0 ? coord_std[j] : 1.0);
  }
  return h;
}

KernelRegressor::BandwidthRule KernelRegressor::fixed(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("kernel bandwidth must be positive and finite");
  }
  return [h](std::size_t, std::span<const double> coord_std) {
    return std::vector<double>(coord_std.size(), h);
  };
}

KernelRegressor::KernelRegressor(BandwidthRule rule) : rule_(std::move(rule)) {}

void KernelRegressor::fit_update(std::span<const double> z, double target) {
  check_point(z, dim_, true);
  check_target(target);
  if (coord_stats_.empty()) coord_stats_.resize(dim_);
  for (std::size_t j = 0; j < dim_; ++j) coord_stats_[j].update(z[j]);
  points_.insert(points_.end(), z.begin(), z.end());
  targets_.push_back(target);
  target_sum_ += target;
}

double KernelRegressor::predict(std::span<const double> z) const {
  const std::size_t n = targets_.size();
  if (n == 0) return 0.0;
  std::size_t dim = dim_;
  check_point(z, dim, false);

  std::vector<double> sd(dim_);
  for (std::size_t j = 0; j < dim_; ++j) sd[j] = std::sqrt(coord_stats_[j].variance());
  const std::vector<double> h = rule_(n, sd);
  if (h.size() != dim_) throw std::logic_error("bandwidth rule returned wrong dimension");
  std::vector<double> inv_h(dim_);
  for (std::size_t j = 0; j < dim_; ++j) inv_h[j] = 1.0 / h[j];

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = points_.data() + i * dim_;
    double q = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double u = (p[j] - z[j]) * inv_h[j];
      q += u * u;
    }
    const double w = std::exp(-0.5 * q);
    num += w * targets_[i];
    den += w;
  }
  if (!(den > 0.0)) return target_sum_ / static_cast<double>(n);
  return num / den;
}

// ---------------------------------------------------------------------------
// Partitioning estimate

namespace {
constexpr int kCellBits = 16;
constexpr double kCellLimit = 32767.0;
}  // namespace

PartitionRegressor::PartitionRegressor(double width_scale) : width_scale_(width_scale) {
  if (!(width_scale > 0.0) || !std::isfinite(width_scale)) {
    throw std::invalid_argument("partition width scale must be positive and finite");
  }
}

std::uint64_t PartitionRegressor::cell_key(std::span<const double> z) const {
  std::uint64_t key = 0;
  for (std::size_t j = 0; j < dim_; ++j) {
    double c = std::floor((z[j] - origin_[j]) * inv_width_[j]);
    c = std::clamp(c, -kCellLimit, kCellLimit);
    const auto biased = static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + 32768);
    key |= biased << (kCellBits * j);
  }
  return key;
}

const PartitionRegressor::Cell* PartitionRegressor::find_cell(std::uint64_t key) const {
  const auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

double PartitionRegressor::global_mean() const {
  return targets_.empty() ? 0.0 : target_sum_ / static_cast<double>(targets_.size());
}

void PartitionRegressor::rebuild() {
  const std::size_t n = targets_.size();
  const double side =
      width_scale_ * std::pow(static_cast<double>(n), -1.0 / (2.0 + static_cast<double>(dim_)));
  origin_.resize(dim_);
  inv_width_.resize(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const double sd = std::sqrt(coord_stats_[j].variance());
    origin_[j] = coord_stats_[j].mean();
    inv_width_[j] = 1.0 / (side * (sd > 0.0 ? sd : 1.0));
  }
  cells_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    Cell& cell = cells_[cell_key({points_.data() + i * dim_, dim_})];
    ++cell.count;
    cell.sum += targets_[i];
  }
  ++epoch_;
}

void PartitionRegressor::fit_update(std::span<const double> z, double target) {
  check_point(z, dim_, true);
  check_target(target);
  if (dim_ > kMaxDim) {
    throw std::invalid_argument("partition regressor supports at most 4 covariates");
  }
  if (coord_stats_.empty()) coord_stats_.resize(dim_);
  for (std::size_t j = 0; j < dim_; ++j) coord_stats_[j].update(z[j]);
  points_.insert(points_.end(), z.begin(), z.end());
  targets_.push_back(target);
  target_sum_ += target;

  if (std::has_single_bit(targets_.size())) {
    rebuild();
    return;
  }
  Cell& cell = cells_[cell_key(z)];
  ++cell.count;
  cell.sum += target;
}

double PartitionRegressor::predict(std::span<const double> z) const {
  if (targets_.empty()) return 0.0;
  std::size_t dim = dim_;
  check_point(z, dim, false);
  const Cell* cell = find_cell(cell_key(z));
  if (cell == nullptr || cell->count == 0) return global_mean();
  return cell->sum / static_cast<double>(cell->count);
}

RegressorFactory regressor_factory(const std::string& name) {
  if (name == "knn") return [] { return std::make_unique<KnnRegressor>(); };
  if (name == "kernel") return [] { return std::make_unique<KernelRegressor>(); };
  if (name == "partition") return [] { return std::make_unique<PartitionRegressor>(); };
  throw std::invalid_argument("unknown regressor '" + name + "' (expected knn, kernel or partition)");
}

std::vector<std::string> regressor_names() { return {"knn", "kernel", "partition"}; }

}  // namespace avi
