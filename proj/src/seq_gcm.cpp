#include "avi/seq_gcm.hpp"

#include <cmath>
#include <string>

#include "avi/rs_dist.hpp"

namespace avi {
namespace {

void check_triplet(const Triplet& t, const char* which) {
  if (!std::isfinite(t.x) || !std::isfinite(t.y)) {
    throw std::domain_error(std::string(which) + " triplet has a non-finite x or y");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// GcmState

GcmState::GcmState(std::unique_ptr<OnlineRegressor> regressor_x,
                   std::unique_ptr<OnlineRegressor> regressor_y)
    : regressor_x_(std::move(regressor_x)), regressor_y_(std::move(regressor_y)) {
  if (!regressor_x_ || !regressor_y_) {
    throw std::invalid_argument("GcmState: both regressors are required");
  }
}

double GcmState::update(const Triplet& eval, const Triplet& train) {
  check_triplet(eval, "evaluation");
  check_triplet(train, "training");
  if (dim_ == 0) dim_ = train.z.size();
  if (train.z.size() != dim_ || eval.z.size() != dim_ || dim_ == 0) {
    throw std::invalid_argument("GcmState: covariate dimension must stay fixed at " +
                                std::to_string(dim_));
  }

  regressor_x_->fit_update(train.z, train.x);
  regressor_y_->fit_update(train.z, train.y);

  const double fx = regressor_x_->predict(eval.z);
  if (!std::isfinite(fx)) {
    throw std::runtime_error("regressor_x (" + regressor_x_->name() +
                             ") produced a non-finite prediction");
  }
  const double fy = regressor_y_->predict(eval.z);
  if (!std::isfinite(fy)) {
    throw std::runtime_error("regressor_y (" + regressor_y_->name() +
                             ") produced a non-finite prediction");
  }
  const double r = (eval.x - fx) * (eval.y - fy);
  residuals_.update(r);
  return r;
}

double GcmState::residual_variance() const {
  return residuals_.empty() ? 0.0 : residuals_.variance();
}

bool GcmState::degenerate() const {
  return residuals_.empty() || residual_variance() < kGcmDegenerateVariance;
}

double GcmState::statistic() const {
  if (degenerate()) throw DegenerateError("GCM statistic: residual variance is zero");
  return residuals_.mean() / std::sqrt(residual_variance());
}

double GcmState::p_value(std::uint64_t m) const {
  if (m == 0) throw std::invalid_argument("start index m must be >= 1");
  if (n() < m) {
    throw SequencingError("GCM p-value requested at n=" + std::to_string(n()) +
                          " before start index m=" + std::to_string(m));
  }
  if (degenerate()) return 1.0;
  return anytime_p_value(residuals_, m);
}

AnytimeResult GcmState::evaluate(std::uint64_t m, AlphaLevel alpha) const {
  AnytimeResult r;
  r.k = n();
  r.m = m;
  r.p_value = p_value(m);
  r.degenerate = degenerate();
  if (r.degenerate) {
    r.lower = r.upper = residuals_.mean();
  } else {
    const Interval cs = confidence_sequence(residuals_, m, alpha);
    r.lower = cs.lower;
    r.upper = cs.upper;
  }
  r.reject = r.p_value <= alpha.value();
  return r;
}

// ---------------------------------------------------------------------------
// Fixed-n GCM

double batch_gcm_statistic(std::span<const Triplet> eval, std::span<const Triplet> train,
                           const RegressorFactory& factory) {
  if (eval.empty() || train.empty()) {
    throw std::invalid_argument("batch GCM: evaluation and training data must be nonempty");
  }
  auto fx = factory();
  auto fy = factory();
  for (const Triplet& t : train) {
    check_triplet(t, "training");
    fx->fit_update(t.z, t.x);
    fy->fit_update(t.z, t.y);
  }
  std::vector<double> r(eval.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < eval.size(); ++i) {
    check_triplet(eval[i], "evaluation");
    r[i] = (eval[i].x - fx->predict(eval[i].z)) * (eval[i].y - fy->predict(eval[i].z));
    sum += r[i];
  }
  const double n = static_cast<double>(eval.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  const double var = ss / n;
  if (!(var >= kGcmDegenerateVariance)) {
    throw DegenerateError("batch GCM: residual variance is zero");
  }
  return std::sqrt(n) * mean / std::sqrt(var);
}

double two_sided_normal_p_value(double t) {
  return std::min(1.0, 2.0 * normal_sf(std::abs(t)));
}

double batch_gcm_p_value(std::span<const Triplet> eval, std::span<const Triplet> train,
                         const RegressorFactory& factory) {
  return two_sided_normal_p_value(batch_gcm_statistic(eval, train, factory));
}

// ---------------------------------------------------------------------------
// PartitionBatchGcm

void PartitionBatchGcm::Moments::add(double xv, double yv) {
  const double xy_ = xv * yv;
  n += 1.0;
  x += xv;
  y += yv;
  xy += xy_;
  xx += xv * xv;
  yy += yv * yv;
  xxy += xv * xy_;
  xyy += xy_ * yv;
  xxyy += xy_ * xy_;
}

PartitionBatchGcm::Moments& PartitionBatchGcm::Moments::operator+=(const Moments& o) {
  n += o.n;
  x += o.x;
  y += o.y;
  xy += o.xy;
  xx += o.xx;
  yy += o.yy;
  xxy += o.xxy;
  xyy += o.xyy;
  xxyy += o.xxyy;
  return *this;
}

PartitionBatchGcm::Moments& PartitionBatchGcm::Moments::operator-=(const Moments& o) {
  n -= o.n;
  x -= o.x;
  y -= o.y;
  xy -= o.xy;
  xx -= o.xx;
  yy -= o.yy;
  xxy -= o.xxy;
  xyy -= o.xyy;
  xxyy -= o.xxyy;
  return *this;
}

// Sums of (x - a)(y - c) and its square over the points summarized by m.
PartitionBatchGcm::Sums PartitionBatchGcm::contribution(const Moments& m, double a, double c) {
  Sums s;
  s.r = m.xy - c * m.x - a * m.y + a * c * m.n;
  s.r2 = m.xxyy - 2.0 * c * m.xxy + c * c * m.xx - 2.0 * a * m.xyy + 4.0 * a * c * m.xy -
         2.0 * a * c * c * m.x + a * a * m.yy - 2.0 * a * a * c * m.y + a * a * c * c * m.n;
  return s;
}

PartitionBatchGcm::PartitionBatchGcm(double width_scale)
    : regressor_x_(width_scale), regressor_y_(width_scale) {}

void PartitionBatchGcm::refresh(std::uint64_t key, CellState& cell) {
  const PartitionRegressor::Cell* cx = regressor_x_.find_cell(key);
  const PartitionRegressor::Cell* cy = regressor_y_.find_cell(key);
  const double a = cx->sum / static_cast<double>(cx->count);
  const double c = cy->sum / static_cast<double>(cy->count);
  cell.contribution = contribution(cell.eval, a, c);
  trained_.r += cell.contribution.r;
  trained_.r2 += cell.contribution.r2;
}

PartitionBatchGcm::CellState& PartitionBatchGcm::cell_at(std::uint64_t key) {
  const auto [it, inserted] = cells_.try_emplace(key);
  if (inserted) it->second.trained = regressor_x_.find_cell(key) != nullptr;
  return it->second;
}

void PartitionBatchGcm::rebuild() {
  cells_.clear();
  untrained_ = {};
  trained_ = {};
  const std::size_t d = regressor_x_.dim();
  for (std::size_t i = 0; i < count_; ++i) {
    const std::uint64_t key = regressor_x_.cell_key({eval_z_.data() + i * d, d});
    cells_[key].eval.add(eval_xy_[2 * i], eval_xy_[2 * i + 1]);
  }
  for (auto& [key, cell] : cells_) {
    cell.trained = regressor_x_.find_cell(key) != nullptr;
    if (cell.trained) {
      refresh(key, cell);
    } else {
      untrained_ += cell.eval;
    }
  }
}

void PartitionBatchGcm::add(const Triplet& eval, const Triplet& train) {
  check_triplet(eval, "evaluation");
  check_triplet(train, "training");
  if (eval.z.size() != train.z.size()) {
    throw std::invalid_argument("PartitionBatchGcm: evaluation and training dimensions differ");
  }
  if (count_ > 0 && eval.z.size() != regressor_x_.dim()) {
    throw std::invalid_argument("PartitionBatchGcm: covariate dimension must stay fixed");
  }
  regressor_x_.fit_update(train.z, train.x);
  regressor_y_.fit_update(train.z, train.y);
  eval_xy_.push_back(eval.x);
  eval_xy_.push_back(eval.y);
  eval_z_.insert(eval_z_.end(), eval.z.begin(), eval.z.end());
  ++count_;

  if (regressor_x_.epoch() != epoch_) {
    epoch_ = regressor_x_.epoch();
    rebuild();
    return;
  }

  const std::uint64_t train_key = regressor_x_.cell_key(train.z);
  CellState& tc = cell_at(train_key);
  if (tc.trained) {
    trained_.r -= tc.contribution.r;
    trained_.r2 -= tc.contribution.r2;
  } else {
    untrained_ -= tc.eval;
    tc.trained = true;
  }
  refresh(train_key, tc);

  const std::uint64_t eval_key = regressor_x_.cell_key(eval.z);
  CellState& ec = cell_at(eval_key);
  ec.eval.add(eval.x, eval.y);
  if (ec.trained) {
    trained_.r -= ec.contribution.r;
    trained_.r2 -= ec.contribution.r2;
    refresh(eval_key, ec);
  } else {
    untrained_.add(eval.x, eval.y);
  }
}

PartitionBatchGcm::Sums PartitionBatchGcm::totals() const {
  Sums s = trained_;
  if (untrained_.n > 0.0) {
    const Sums u =
        contribution(untrained_, regressor_x_.global_mean(), regressor_y_.global_mean());
    s.r += u.r;
    s.r2 += u.r2;
  }
  return s;
}

double PartitionBatchGcm::residual_variance() const {
  if (count_ == 0) return 0.0;
  const Sums s = totals();
  const double n = static_cast<double>(count_);
  const double mean = s.r / n;
  const double var = s.r2 / n - mean * mean;
  return var > 0.0 ? var : 0.0;
}

bool PartitionBatchGcm::degenerate() const {
  return count_ == 0 || residual_variance() < kGcmDegenerateVariance;
}

double PartitionBatchGcm::statistic() const {
  if (degenerate()) throw DegenerateError("batch GCM: residual variance is zero");
  const double n = static_cast<double>(count_);
  return std::sqrt(n) * (totals().r / n) / std::sqrt(residual_variance());
}

double PartitionBatchGcm::p_value() const {
  if (degenerate()) return 1.0;
  return two_sided_normal_p_value(statistic());
}

}  // namespace avi
