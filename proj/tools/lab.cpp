#include <iomanip>

#include "avi/coupling_lab.hpp"
#include "avi/csv.hpp"
#include "avi/families.hpp"
#include "avi/rs_dist.hpp"
#include "commands.hpp"

namespace avi::cli {

namespace {

struct LabOptions {
  double horizon = 1e4;
  double step = 0.01;
  std::uint64_t sum_horizon = 30000;
  std::uint64_t m = 300;
  std::uint64_t replications = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string family = "normal";
  double x = 7.814728;
  std::uint64_t k_min = 100;
  std::uint64_t k_max = 1000000;
  double level = 1.5;
  std::string out = "-";
};

void summarize(const std::vector<double>& samples, double x) {
  const EmpiricalCdf cdf(samples);
  std::cerr << "replications=" << samples.size()
            << " ks_distance=" << format_double(ks_distance(cdf, rs_cdf))
            << " survival_at_" << format_double(x) << '=' << format_double(cdf.survival(x))
            << " rs_survival=" << format_double(rs_survival(x)) << '\n';
}

int run_wiener(const LabOptions& opt) {
  PathConfig cfg;
  cfg.horizon = opt.horizon;
  cfg.step = opt.step;
  cfg.replications = opt.replications;
  cfg.seed = opt.seed;
  const auto samples = wiener_sup_samples(cfg, opt.threads);
  OutputTarget target(opt.out);
  write_samples_csv(target.stream(), samples);
  target.finish();
  summarize(samples, opt.x);
  return kExitOk;
}

int run_partial_sum(const LabOptions& opt) {
  PathConfig cfg;
  cfg.horizon = static_cast<double>(opt.sum_horizon);
  cfg.step = 1.0;
  cfg.m = opt.m;
  cfg.replications = opt.replications;
  cfg.seed = opt.seed;
  const auto samples =
      partial_sum_sup_samples(ScalarFamily::from_name(opt.family), cfg, opt.threads);
  OutputTarget target(opt.out);
  write_samples_csv(target.stream(), samples);
  target.finish();
  summarize(samples, opt.x);
  return kExitOk;
}

int run_lil(const LabOptions& opt) {
  const LilReport report =
      lil_envelope_check(ScalarFamily::from_name(opt.family), opt.k_min, opt.k_max,
                         opt.replications, opt.seed, opt.level, opt.threads);
  OutputTarget target(opt.out);
  write_samples_csv(target.stream(), report.max_ratios);
  target.finish();
  std::cerr << "replications=" << report.max_ratios.size()
            << " median=" << format_double(report.median) << " exceedance_above_"
            << format_double(report.level) << '=' << format_double(report.exceedance) << '\n';
  return kExitOk;
}

void common_options(CLI::App* sub, LabOptions& opt) {
  sub->add_option("--replications", opt.replications)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", opt.seed)->capture_default_str();
  sub->add_option("--threads", opt.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  sub->add_option("--out", opt.out, "Sample CSV (replication,value), - for stdout")
      ->capture_default_str();
}

}  // namespace

void add_lab(CLI::App& app, Action& action) {
  auto opt = std::make_shared<LabOptions>();
  CLI::App* lab = app.add_subcommand("lab", "Monte Carlo checks of the limit distributions");
  lab->require_subcommand(1);
  const auto families = ScalarFamily::names();

  CLI::App* wiener =
      lab->add_subcommand("wiener", "Samples of sup_{1<=t<=T} W(t)^2/t - log t on a grid");
  wiener->add_option("--horizon", opt->horizon, "T")->capture_default_str();
  wiener->add_option("--step", opt->step, "Grid spacing")->check(CLI::PositiveNumber)
      ->capture_default_str();
  wiener->add_option("--x", opt->x, "Level for the survival summary")->capture_default_str();
  common_options(wiener, *opt);
  wiener->callback([opt, &action] { action = [opt] { return run_wiener(*opt); }; });

  CLI::App* partial = lab->add_subcommand(
      "partial-sum", "Samples of max_{m<=k<=K} S_k^2/(sigma^2 k) - log(k/m)");
  partial->add_option("--family", opt->family)->check(CLI::IsMember(families))
      ->capture_default_str();
  partial->add_option("--m", opt->m)->check(CLI::PositiveNumber)->capture_default_str();
  partial->add_option("--horizon", opt->sum_horizon, "K")->capture_default_str();
  partial->add_option("--x", opt->x, "Level for the survival summary")->capture_default_str();
  common_options(partial, *opt);
  partial->callback([opt, &action] { action = [opt] { return run_partial_sum(*opt); }; });

  CLI::App* lil = lab->add_subcommand(
      "lil", "Per-replication max of |S_k| / sqrt(2 sigma^2 k log log k)");
  lil->add_option("--family", opt->family)->check(CLI::IsMember(families))
      ->capture_default_str();
  lil->add_option("--k-min", opt->k_min)->capture_default_str();
  lil->add_option("--k-max", opt->k_max)->capture_default_str();
  lil->add_option("--level", opt->level, "Exceedance level")->capture_default_str();
  common_options(lil, *opt);
  lil->callback([opt, &action] { action = [opt] { return run_lil(*opt); }; });
}

}  // namespace avi::cli
