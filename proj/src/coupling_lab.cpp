#include "avi/coupling_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "avi/av_mean.hpp"
#include "avi/parallel.hpp"

namespace avi {

namespace {

constexpr std::uint64_t kWienerTag = 0x5749454E;   // "WIEN"
constexpr std::uint64_t kPartialSumTag = 0x50535550;
constexpr std::uint64_t kLilTag = 0x4C494C;

}  // namespace

void PathConfig::validate() const {
  if (m < 1) throw std::invalid_argument("PathConfig: m must be >= 1");
  if (!std::isfinite(horizon) || !(horizon > static_cast<double>(m)))
    throw std::invalid_argument("PathConfig: horizon must exceed m");
  if (!std::isfinite(step) || !(step > 0.0))
    throw std::invalid_argument("PathConfig: step must be positive");
  if (replications < 1) throw std::invalid_argument("PathConfig: replications must be >= 1");
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::survival(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalCdf& samples, const std::function<double(double)>& cdf) {
  const auto xs = samples.sorted();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// --- Wiener supremum -------------------------------------------------------

namespace {

class WienerWalk {
 public:
  WienerWalk(double dt, std::uint64_t last, const NormalAt& normal_at, double skip_probability)
      : dt_(dt),
        last_(last),
        normal_at_(normal_at),
        eps_(skip_probability),
        log_two_over_eps_(skip_probability > 0.0 ? std::log(2.0 / skip_probability) : 0.0) {}

  double best() const { return best_; }

  void visit(std::uint64_t i, double w) {
    const double t = 1.0 + static_cast<double>(i) * dt_;
    best_ = std::max(best_, w * w / t - std::log(t));
  }

  // Visits the grid points strictly inside (lo, hi) in increasing order.
  void refine(std::uint64_t lo, double a, std::uint64_t hi, double b) {
    if (hi - lo < 2 || lo >= last_) return;
    if (can_skip(lo, a, hi, b)) return;
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const double span = static_cast<double>(hi - lo);
    const double left = static_cast<double>(mid - lo);
    const double right = static_cast<double>(hi - mid);
    const double wm =
        a + (b - a) * left / span + std::sqrt(dt_ * left * right / span) * normal_at_(mid);
    refine(lo, a, mid, wm);
    if (mid <= last_) visit(mid, wm);
    refine(mid, wm, hi, b);
  }

 private:
  // On [t_lo, t_hi] a point beats the running maximum only if
  // W^2 > t (best + log t) >= t_lo (best + log t_lo) = u^2. The bridge from a
  // to b over time tau leaves (-u, u) with probability at most
  // exp(-2(u-a)(u-b)/tau) + exp(-2(u+a)(u+b)/tau).
  bool can_skip(std::uint64_t lo, double a, std::uint64_t hi, double b) const {
    if (eps_ <= 0.0) return false;
    const double t_lo = 1.0 + static_cast<double>(lo) * dt_;
    const double u2 = t_lo * (best_ + std::log(t_lo));
    if (!(u2 > 0.0)) return false;
    const double u = std::sqrt(u2);
    const double reach = std::max(std::abs(a), std::abs(b));
    if (reach >= u) return false;
    const double tau = static_cast<double>(hi - lo) * dt_;
    const double gap = u - reach;
    if (2.0 * gap * gap / tau >= log_two_over_eps_) return true;
    const double p = std::exp(-2.0 * (u - a) * (u - b) / tau) +
                     std::exp(-2.0 * (u + a) * (u + b) / tau);
    return p <= eps_;
  }

  double dt_;
  std::uint64_t last_;
  const NormalAt& normal_at_;
  double eps_;
  double log_two_over_eps_;
  double best_ = -std::numeric_limits<double>::infinity();
};

std::uint64_t grid_steps(const PathConfig& cfg) {
  return static_cast<std::uint64_t>(std::floor((cfg.horizon - 1.0) / cfg.step + 1e-9));
}

}  // namespace

double simulate_wiener_sup(const PathConfig& cfg, const NormalAt& normal_at,
                           const WienerOptions& options) {
  cfg.validate();
  if (options.block < 1) throw std::invalid_argument("WienerOptions: block must be >= 1");
  const std::uint64_t last = grid_steps(cfg);
  const std::uint64_t block = options.block;
  WienerWalk walk(cfg.step, last, normal_at, options.skip_probability);

  double a = normal_at(0);
  walk.visit(0, a);
  const double block_sd = std::sqrt(static_cast<double>(block) * cfg.step);
  for (std::uint64_t lo = 0; lo < last; lo += block) {
    const std::uint64_t hi = lo + block;
    const double b = a + block_sd * normal_at(hi);
    walk.refine(lo, a, hi, b);
    if (hi <= last) walk.visit(hi, b);
    a = b;
  }
  return walk.best();
}

double simulate_wiener_sup(const PathConfig& cfg, std::uint64_t replication,
                           const WienerOptions& options) {
  const std::uint64_t key = stream_key(cfg.seed, replication, kWienerTag);
  const NormalAt source = [key](std::uint64_t i) { return counter_normal(key, i); };
  return simulate_wiener_sup(cfg, source, options);
}

double simulate_wiener_sup_increments(const PathConfig& cfg, Engine& engine) {
  cfg.validate();
  const std::uint64_t last = grid_steps(cfg);
  const double sd = std::sqrt(cfg.step);
  double w = standard_normal(engine);
  double best = w * w;
  for (std::uint64_t i = 1; i <= last; ++i) {
    w += sd * standard_normal(engine);
    const double t = 1.0 + static_cast<double>(i) * cfg.step;
    best = std::max(best, w * w / t - std::log(t));
  }
  return best;
}

std::vector<double> wiener_sup_samples(const PathConfig& cfg, unsigned threads,
                                       const WienerOptions& options) {
  cfg.validate();
  std::vector<double> out(cfg.replications);
  for_each_replication(cfg.replications, threads,
                       [&](std::uint64_t r) { out[r] = simulate_wiener_sup(cfg, r, options); });
  return out;
}

// --- Standardized partial sums --------------------------------------------

namespace {

class PartialSumTables {
 public:
  PartialSumTables(std::uint64_t m, std::uint64_t horizon) : m_(m), horizon_(horizon) {
    if (m < 1) throw std::invalid_argument("partial sums: m must be >= 1");
    if (horizon < m) throw std::invalid_argument("partial sums: horizon must be >= m");
    const std::size_t n = horizon - m + 1;
    log_ratio_.resize(n);
    inv_k_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t k = m + j;
      log_ratio_[j] = log_ratio(k, m);
      inv_k_[j] = 1.0 / static_cast<double>(k);
    }
  }

  // Runs the walk; with stop_above set, returns as soon as a value exceeds x.
  // Both modes evaluate S_k^2 / k - log(k/m) identically.
  double run(const ScalarFamily& family, Engine& engine, bool stop_above, double x) const {
    const double sd = family.stddev();
    if (sd == 0.0) return 0.0;
    const double mu = family.mean();
    const double inv_sd = 1.0 / sd;
    return family.visit([&](auto draw) {
      double s = 0.0;
      for (std::uint64_t k = 1; k < m_; ++k) s += (draw(engine) - mu) * inv_sd;
      double best = -std::numeric_limits<double>::infinity();
      const std::size_t n = log_ratio_.size();
      for (std::size_t j = 0; j < n; ++j) {
        s += (draw(engine) - mu) * inv_sd;
        const double v = s * s * inv_k_[j] - log_ratio_[j];
        if (v > best) {
          best = v;
          if (stop_above && best > x) return best;
        }
      }
      return best;
    });
  }

 private:
  std::uint64_t m_;
  std::uint64_t horizon_;
  std::vector<double> log_ratio_;
  std::vector<double> inv_k_;
};

std::uint64_t discrete_horizon(const PathConfig& cfg) {
  cfg.validate();
  return static_cast<std::uint64_t>(std::floor(cfg.horizon));
}

}  // namespace

double simulate_partial_sum_sup(const ScalarFamily& family, std::uint64_t m,
                                std::uint64_t horizon, Engine& engine) {
  return PartialSumTables(m, horizon).run(family, engine, false, 0.0);
}

bool crosses_boundary(const ScalarFamily& family, double x, std::uint64_t m,
                      std::uint64_t horizon, Engine& engine) {
  return PartialSumTables(m, horizon).run(family, engine, true, x) > x;
}

std::vector<double> partial_sum_sup_samples(const ScalarFamily& family, const PathConfig& cfg,
                                            unsigned threads) {
  const PartialSumTables tables(cfg.m, discrete_horizon(cfg));
  std::vector<double> out(cfg.replications);
  for_each_replication(cfg.replications, threads, [&](std::uint64_t r) {
    Engine engine = replication_engine(cfg.seed, r, kPartialSumTag);
    out[r] = tables.run(family, engine, false, 0.0);
  });
  return out;
}

double boundary_crossing_rate(const ScalarFamily& family, double x, const PathConfig& cfg,
                              unsigned threads) {
  if (!std::isfinite(x)) throw std::invalid_argument("boundary_crossing_rate: x must be finite");
  const PartialSumTables tables(cfg.m, discrete_horizon(cfg));
  std::vector<char> crossed(cfg.replications, 0);
  for_each_replication(cfg.replications, threads, [&](std::uint64_t r) {
    Engine engine = replication_engine(cfg.seed, r, kPartialSumTag);
    crossed[r] = tables.run(family, engine, true, x) > x;
  });
  const auto hits = std::count(crossed.begin(), crossed.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(cfg.replications);
}

// --- Iterated logarithm ----------------------------------------------------

LilReport lil_envelope_check(const ScalarFamily& family, std::uint64_t k_min,
                             std::uint64_t k_max, std::uint64_t replications,
                             std::uint64_t seed, double level, unsigned threads) {
  if (k_min < 8) throw std::invalid_argument("lil_envelope_check: k_min must be >= 8");
  if (k_max < k_min) throw std::invalid_argument("lil_envelope_check: k_max must be >= k_min");
  if (replications < 1)
    throw std::invalid_argument("lil_envelope_check: replications must be >= 1");

  LilReport report;
  report.level = level;
  report.max_ratios.assign(replications, 0.0);
  const double sd = family.stddev();
  if (sd > 0.0) {
    const std::size_t n = k_max - k_min + 1;
    std::vector<double> scale(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double k = static_cast<double>(k_min + j);
      scale[j] = 1.0 / std::sqrt(2.0 * k * std::log(std::log(k)));
    }
    const double mu = family.mean();
    const double inv_sd = 1.0 / sd;
    for_each_replication(replications, threads, [&](std::uint64_t r) {
      Engine engine = replication_engine(seed, r, kLilTag);
      report.max_ratios[r] = family.visit([&](auto draw) {
        double s = 0.0;
        for (std::uint64_t k = 1; k < k_min; ++k) s += (draw(engine) - mu) * inv_sd;
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          s += (draw(engine) - mu) * inv_sd;
          best = std::max(best, std::abs(s) * scale[j]);
        }
        return best;
      });
    });
  }

  std::vector<double> sorted = report.max_ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  report.median = sorted.size() % 2 ? sorted[half] : 0.5 * (sorted[half - 1] + sorted[half]);
  const auto above = std::count_if(sorted.begin(), sorted.end(),
                                   [level](double v) { return v > level; });
  report.exceedance = static_cast<double>(above) / static_cast<double>(sorted.size());
  return report;
}

void write_samples_csv(std::ostream& out, std::span<const double> samples) {
  const auto old_precision = out.precision(17);
  out << "replication,value\n";
  for (std::size_t i = 0; i < samples.size(); ++i) out << i << ',' << samples[i] << '\n';
  out.precision(old_precision);
}

}  // namespace avi
