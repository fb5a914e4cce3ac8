#include "avi/experiment_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "avi/dgp.hpp"
#include "avi/families.hpp"
#include "avi/regressors.hpp"

namespace avi {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 4> kKindNames{{
    {ExperimentKind::MeanCalibration, "mean-calibration"},
    {ExperimentKind::MeanCoverage, "mean-coverage"},
    {ExperimentKind::CitNull, "cit-null"},
    {ExperimentKind::CitAlternative, "cit-alternative"},
}};

const std::set<std::string_view> kKnownKeys{
    "kind", "family", "shift", "d",    "m",       "horizon",      "alpha",
    "replications", "seed", "regressor", "rho", "threads", "batch_stride"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_uint(const std::string& key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

double parse_real(const std::string& key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + std::string(text) + "'");
  return v;
}

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw ConfigError("kind", "unknown experiment kind '" + std::string(name) +
                                "' (expected mean-calibration, mean-coverage, cit-null or "
                                "cit-alternative)");
}

void ExperimentConfig::validate() const {
  if (m < 1) throw ConfigError("m", "must be >= 1");
  if (horizon < m) throw ConfigError("horizon", "must be >= m");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  if (replications < 1) throw ConfigError("replications", "must be >= 1");
  if (!std::isfinite(shift)) throw ConfigError("shift", "must be finite");
  if (!std::isfinite(rho)) throw ConfigError("rho", "must be finite");
  if (batch_stride < 1) throw ConfigError("batch_stride", "must be >= 1");
  if (is_cit(kind)) {
    if (d < 1) throw ConfigError("d", "must be >= 1");
    const auto names = regressor_names();
    if (std::find(names.begin(), names.end(), regressor) == names.end())
      throw ConfigError("regressor", "unknown regressor '" + regressor + "'");
    if (regressor == "partition" && d > PartitionRegressor::kMaxDim)
      throw ConfigError("d", "the partition regressor supports d <= " +
                                 std::to_string(PartitionRegressor::kMaxDim));
  } else {
    try {
      (void)ScalarFamily::from_name(family);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("family", e.what());
    }
    if (kind == ExperimentKind::MeanCalibration && shift != 0.0)
      throw ConfigError("shift", "mean-calibration needs a zero-mean family (shift = 0)");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "kind = " << to_string(kind) << '\n';
  if (is_cit(kind)) {
    out << "d = " << d << '\n' << "regressor = " << regressor << '\n';
    if (kind == ExperimentKind::CitAlternative) out << "rho = " << format_real(rho) << '\n';
    out << "batch_stride = " << batch_stride << '\n';
  } else {
    out << "family = " << family << '\n' << "shift = " << format_real(shift) << '\n';
  }
  out << "m = " << m << '\n'
      << "horizon = " << horizon << '\n'
      << "alpha = " << format_real(alpha) << '\n'
      << "replications = " << replications << '\n'
      << "seed = " << seed << '\n';
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  std::array<char, 17> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, fnv1a64(canonical()), 16);
  std::string hex(buf.data(), ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  std::map<std::string, std::string, std::less<>> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash_pos = text.find('#'); hash_pos != std::string_view::npos)
      text = text.substr(0, hash_pos);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (!kKnownKeys.contains(key))
      throw ConfigError(key, "unknown key on line " + std::to_string(line_no));
    if (value.empty())
      throw ConfigError(key, "empty value on line " + std::to_string(line_no));
    if (!values.emplace(key, value).second)
      throw ConfigError(key, "given twice (line " + std::to_string(line_no) + ")");
  }

  const auto require = [&](const char* key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError(key, "missing required field");
    return it->second;
  };
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  ExperimentConfig cfg;
  cfg.kind = parse_experiment_kind(require("kind"));
  cfg.replications = parse_uint("replications", require("replications"));
  cfg.seed = parse_uint("seed", require("seed"));
  if (is_cit(cfg.kind)) {
    cfg.d = parse_uint("d", require("d"));
    cfg.regressor = require("regressor");
  } else {
    cfg.family = require("family");
  }
  if (auto* v = get("shift")) cfg.shift = parse_real("shift", *v);
  if (auto* v = get("m")) cfg.m = parse_uint("m", *v);
  if (auto* v = get("horizon")) cfg.horizon = parse_uint("horizon", *v);
  if (auto* v = get("alpha")) cfg.alpha = parse_real("alpha", *v);
  if (auto* v = get("rho")) cfg.rho = parse_real("rho", *v);
  if (auto* v = get("threads")) {
    const auto t = parse_uint("threads", *v);
    if (t > 4096) throw ConfigError("threads", "must be <= 4096");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (auto* v = get("batch_stride")) cfg.batch_stride = parse_uint("batch_stride", *v);
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  return parse(in);
}

}  // namespace avi
