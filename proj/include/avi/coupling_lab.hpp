#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "avi/families.hpp"
#include "avi/random.hpp"

namespace avi {

// Monte Carlo checks of the time-uniform limit theory: the law of the Wiener
// supremum, boundary crossing of standardized partial sums, and the
// iterated-logarithm envelope. Every replication draws from its own stream
// derived from (seed, replication), so sample sets are reproducible and
// independent of the worker count.

/// Path settings. For the Wiener sampler `horizon` is T and `step` is the
/// grid spacing on [1, T]; for discrete sums `horizon` is K and `step` is 1.
struct PathConfig {
  double horizon = 1e4;
  double step = 0.01;
  std::uint64_t m = 1;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless horizon > m >= 1, step > 0 and
  /// replications >= 1.
  void validate() const;
};

class EmpiricalCdf {
 public:
  /// Throws std::invalid_argument on an empty sample.
  explicit EmpiricalCdf(std::vector<double> samples);

  /// Fraction of samples <= x.
  double operator()(double x) const;
  /// Fraction of samples > x.
  double survival(double x) const;

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_n(x) - cdf(x)|, evaluated at the jump points from both sides.
double ks_distance(const EmpiricalCdf& samples, const std::function<double(double)>& cdf);

// --- Wiener supremum -------------------------------------------------------

/// Source of the standard normal attached to grid index i.
using NormalAt = std::function<double(std::uint64_t index)>;

struct WienerOptions {
  /// Fine steps per coarse block.
  std::uint64_t block = 1024;
  /// Skip a sub-interval when a Brownian bridge between its endpoints
  /// reaches the level needed to raise the running maximum with at most this
  /// probability. Zero disables pruning.
  double skip_probability = 1e-20;
};

/// One draw of max over t in {1, 1 + dt, ..., T} of W(t)^2 / t - log t.
///
/// The grid path is built by bisection: W(1) ~ N(0, 1), coarse block ends by
/// independent increments, interior points from the conditional
/// (Brownian-bridge) law given their neighbours. The normal for grid index i
/// is normal_at(i), so the path is a fixed function of the source and of
/// nothing else. Sub-intervals that cannot raise the maximum except with
/// probability <= skip_probability are not expanded; expanded points are
/// visited in increasing time order, which makes the sample nondecreasing in
/// T for a fixed source.
double simulate_wiener_sup(const PathConfig& cfg, const NormalAt& normal_at,
                           const WienerOptions& options = {});

/// Same, with normals keyed by (cfg.seed, replication).
double simulate_wiener_sup(const PathConfig& cfg, std::uint64_t replication,
                           const WienerOptions& options = {});

/// Reference sampler that sums all (T - 1)/dt increments directly.
double simulate_wiener_sup_increments(const PathConfig& cfg, Engine& engine);

/// cfg.replications draws of simulate_wiener_sup.
std::vector<double> wiener_sup_samples(const PathConfig& cfg, unsigned threads = 1,
                                       const WienerOptions& options = {});

// --- Standardized partial sums --------------------------------------------

/// max over k in [m, K] of S_k^2 / k - log(k/m), with S_k the partial sum of
/// (X_i - mean) / sd. Zero for a zero-variance family.
double simulate_partial_sum_sup(const ScalarFamily& family, std::uint64_t m,
                                std::uint64_t horizon, Engine& engine);

/// Whether S_k^2 / k - log(k/m) > x for some k in [m, K], i.e. whether
/// |S_k| / sqrt(k) passes boundary(k, m, x).
bool crosses_boundary(const ScalarFamily& family, double x, std::uint64_t m,
                      std::uint64_t horizon, Engine& engine);

/// cfg.replications draws of simulate_partial_sum_sup with K = cfg.horizon.
std::vector<double> partial_sum_sup_samples(const ScalarFamily& family, const PathConfig& cfg,
                                            unsigned threads = 1);

/// Fraction of replications that cross. Shares streams with
/// partial_sum_sup_samples, so it equals EmpiricalCdf(samples).survival(x) for the
/// same configuration.
double boundary_crossing_rate(const ScalarFamily& family, double x, const PathConfig& cfg,
                              unsigned threads = 1);

// --- Iterated logarithm ----------------------------------------------------

struct LilReport {
  std::vector<double> max_ratios;
  double median = 0.0;
  double level = 1.5;
  /// Fraction of replications whose maximum ratio exceeds `level`.
  double exceedance = 0.0;
};

/// Per replication, max over k in [k_min, k_max] of
/// |S_k| / sqrt(2 sigma^2 k log log k) with S_k the centered partial sum.
/// Requires 8 <= k_min <= k_max (log log k > 0).
LilReport lil_envelope_check(const ScalarFamily& family, std::uint64_t k_min,
                             std::uint64_t k_max, std::uint64_t replications,
                             std::uint64_t seed, double level = 1.5, unsigned threads = 1);

/// CSV with header "replication,value", one row per sample.
void write_samples_csv(std::ostream& out, std::span<const double> samples);

}  // namespace avi
