#include "avi/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "avi/av_mean.hpp"
#include "avi/dgp.hpp"
#include "avi/families.hpp"
#include "avi/parallel.hpp"
#include "avi/random.hpp"
#include "avi/regressors.hpp"
#include "avi/rs_dist.hpp"
#include "avi/seq_gcm.hpp"
#include "avi/streaming_stats.hpp"

namespace avi {

RejectionCurve::RejectionCurve(std::uint64_t m, std::uint64_t horizon,
                               std::span<const std::uint64_t> first_events)
    : m_(m), horizon_(horizon), replications_(first_events.size()) {
  if (m < 1 || horizon < m) throw std::invalid_argument("RejectionCurve: need 1 <= m <= horizon");
  counts_.assign(horizon - m + 1, 0);
  for (const std::uint64_t k : first_events) {
    if (k == kNever) continue;
    if (k < m || k > horizon)
      throw std::invalid_argument("RejectionCurve: event time outside [m, horizon]");
    ++counts_[k - m];
  }
  for (std::size_t i = 1; i < counts_.size(); ++i) counts_[i] += counts_[i - 1];
}

std::uint64_t RejectionCurve::count(std::uint64_t k) const {
  if (k < m_ || k > horizon_) throw std::out_of_range("RejectionCurve: k outside [m, horizon]");
  return counts_[k - m_];
}

double RejectionCurve::value(std::uint64_t k) const {
  if (replications_ == 0) return 0.0;
  return static_cast<double>(count(k)) / static_cast<double>(replications_);
}

namespace {

constexpr std::uint64_t kMeanTag = 0x4D45414E;
constexpr std::uint64_t kCitTag = 0x434954;

std::vector<double> log_ratio_table(std::uint64_t m, std::uint64_t horizon) {
  std::vector<double> t(horizon - m + 1);
  for (std::uint64_t k = m; k <= horizon; ++k) t[k - m] = log_ratio(k, m);
  return t;
}

// Per replication, the first time each threshold is reached by
//   A_k = k (mean_k - center)^2 / var_k - log(k/m),
// the statistic behind both the anytime p-value (reject iff A_k >= q) and the
// confidence sequence (miss iff A_k > q) with q = Psi^{-1}(1 - alpha).
// Degenerate states neither reject nor, unless the point interval misses the
// center, miscover.
enum class MeanEvent { Reject, Miss };

std::vector<std::vector<std::uint64_t>> mean_first_events(const ExperimentConfig& cfg,
                                                          std::span<const double> alphas,
                                                          double center, MeanEvent event) {
  cfg.validate();
  const ScalarFamily family = ScalarFamily::from_name(cfg.family, cfg.shift);
  std::vector<double> q;
  for (double a : alphas) q.push_back(rs_quantile(1.0 - AlphaLevel(a).value()));
  const std::vector<double> lr = log_ratio_table(cfg.m, cfg.horizon);

  std::vector<std::vector<std::uint64_t>> first(q.size(),
                                                std::vector<std::uint64_t>(cfg.replications, kNever));
  for_each_replication(cfg.replications, cfg.threads, [&](std::uint64_t r) {
    Engine engine = replication_engine(cfg.seed, r, kMeanTag);
    family.visit([&](auto draw) {
      MomentAccumulator stats;
      std::size_t pending = q.size();
      for (std::uint64_t k = 1; k <= cfg.horizon && pending > 0; ++k) {
        stats.update(draw(engine));
        if (k < cfg.m) continue;
        double a;
        if (is_degenerate(stats)) {
          if (event == MeanEvent::Reject || stats.mean() == center) continue;
          a = std::numeric_limits<double>::infinity();
        } else {
          const double dev = stats.mean() - center;
          a = static_cast<double>(k) * dev * dev / stats.variance() - lr[k - cfg.m];
        }
        for (std::size_t j = 0; j < q.size(); ++j) {
          if (first[j][r] != kNever) continue;
          const bool hit = event == MeanEvent::Reject ? a >= q[j] : a > q[j];
          if (hit) {
            first[j][r] = k;
            --pending;
          }
        }
      }
    });
  });
  return first;
}

}  // namespace

std::vector<RejectionCurve> run_mean_calibration(const ExperimentConfig& cfg,
                                                 std::span<const double> alphas) {
  if (cfg.kind != ExperimentKind::MeanCalibration)
    throw ConfigError("kind", "run_mean_calibration needs kind = mean-calibration");
  const auto first = mean_first_events(cfg, alphas, 0.0, MeanEvent::Reject);
  std::vector<RejectionCurve> curves;
  for (const auto& f : first) curves.emplace_back(cfg.m, cfg.horizon, f);
  return curves;
}

RejectionCurve run_mean_calibration(const ExperimentConfig& cfg) {
  const double alpha[] = {cfg.alpha};
  return run_mean_calibration(cfg, alpha).front();
}

RejectionCurve run_mean_coverage(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::MeanCoverage)
    throw ConfigError("kind", "run_mean_coverage needs kind = mean-coverage");
  const double alpha[] = {cfg.alpha};
  const double center = ScalarFamily::from_name(cfg.family, cfg.shift).mean();
  const auto first = mean_first_events(cfg, alpha, center, MeanEvent::Miss);
  return RejectionCurve(cfg.m, cfg.horizon, first.front());
}

namespace {

// Fixed-n GCM recomputed from scratch with a generic regressor.
class RefitBatchGcm {
 public:
  RefitBatchGcm(RegressorFactory factory, std::uint64_t horizon) : factory_(std::move(factory)) {
    eval_.reserve(horizon);
    train_.reserve(horizon);
  }
  void add(const Triplet& eval, const Triplet& train) {
    eval_.push_back(eval);
    train_.push_back(train);
  }
  double p_value() const {
    try {
      return batch_gcm_p_value(eval_, train_, factory_);
    } catch (const DegenerateError&) {
      return 1.0;
    }
  }

 private:
  RegressorFactory factory_;
  std::vector<Triplet> eval_;
  std::vector<Triplet> train_;
};

}  // namespace

CitCurves run_cit_experiment(const ExperimentConfig& cfg) {
  if (!is_cit(cfg.kind)) throw ConfigError("kind", "run_cit_experiment needs a CIT kind");
  cfg.validate();
  const CitDgp dgp(cfg.d, cfg.kind == ExperimentKind::CitAlternative ? cfg.rho : 0.0);
  const RegressorFactory factory = regressor_factory(cfg.regressor);
  const bool partition = cfg.regressor == "partition";
  const double alpha = AlphaLevel(cfg.alpha).value();

  std::vector<std::uint64_t> seq_first(cfg.replications, kNever);
  std::vector<std::uint64_t> batch_first(cfg.replications, kNever);
  for_each_replication(cfg.replications, cfg.threads, [&](std::uint64_t r) {
    Engine engine = replication_engine(cfg.seed, r, kCitTag);
    GcmState seq(factory(), factory());
    std::unique_ptr<PartitionBatchGcm> fast;
    std::unique_ptr<RefitBatchGcm> refit;
    if (partition)
      fast = std::make_unique<PartitionBatchGcm>();
    else
      refit = std::make_unique<RefitBatchGcm>(factory, cfg.horizon);

    Triplet train, eval;
    for (std::uint64_t k = 1; k <= cfg.horizon; ++k) {
      dgp.sample(engine, train);
      dgp.sample(engine, eval);
      seq.update(eval, train);
      if (fast) fast->add(eval, train);
      if (refit) refit->add(eval, train);
      if (k < cfg.m) continue;

      if (seq_first[r] == kNever && seq.p_value(cfg.m) <= alpha) seq_first[r] = k;
      if (batch_first[r] == kNever) {
        if (fast) {
          if (fast->p_value() <= alpha) batch_first[r] = k;
        } else if ((k - cfg.m) % cfg.batch_stride == 0 || k == cfg.horizon) {
          if (refit->p_value() <= alpha) batch_first[r] = k;
        }
      }
      if (seq_first[r] != kNever && batch_first[r] != kNever) break;
    }
  });
  return {RejectionCurve(cfg.m, cfg.horizon, seq_first),
          RejectionCurve(cfg.m, cfg.horizon, batch_first)};
}

std::vector<RejectionCurve> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::MeanCalibration:
      return {run_mean_calibration(cfg)};
    case ExperimentKind::MeanCoverage:
      return {run_mean_coverage(cfg)};
    case ExperimentKind::CitNull:
    case ExperimentKind::CitAlternative: {
      CitCurves c = run_cit_experiment(cfg);
      return {std::move(c.seqgcm), std::move(c.batchgcm)};
    }
  }
  throw ConfigError("kind", "unsupported experiment kind");
}

}  // namespace avi
