#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace avi {

enum class ExperimentKind { MeanCalibration, MeanCoverage, CitNull, CitAlternative };

std::string_view to_string(ExperimentKind kind);
/// Throws ConfigError for an unknown name.
ExperimentKind parse_experiment_kind(std::string_view name);

inline bool is_cit(ExperimentKind kind) {
  return kind == ExperimentKind::CitNull || kind == ExperimentKind::CitAlternative;
}

/// Invalid or incomplete experiment configuration; field() names the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Settings of one Monte Carlo experiment. Config files are flat
// `key = value` lines; `#` starts a comment. Required keys: kind,
// replications, seed, plus family for the mean kinds and d and regressor for
// the CIT kinds. Everything else has the defaults below.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::MeanCalibration;
  std::string family = "normal";
  double shift = 0.0;
  std::uint64_t d = 1;
  std::uint64_t m = 300;
  std::uint64_t horizon = 10000;
  double alpha = 0.05;
  std::uint64_t replications = 1000;
  std::uint64_t seed = 0;
  std::string regressor = "partition";
  double rho = 0.5;
  /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
  unsigned threads = 0;
  /// The batch GCM is re-evaluated every batch_stride steps for knn and
  /// kernel regressors. The partition regressor is evaluated at every step.
  std::uint64_t batch_stride = 1;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// All result-affecting fields in a fixed order, one `key = value` per line.
  /// `threads` is excluded.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace avi
