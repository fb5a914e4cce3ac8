#include <memory>
#include <ostream>
#include <vector>

#include "avi/av_mean.hpp"
#include "avi/csv.hpp"
#include "avi/regressors.hpp"
#include "avi/seq_gcm.hpp"
#include "commands.hpp"

namespace avi::cli {

namespace {

struct MonitorOptions {
  std::string mode = "mean";
  std::uint64_t m = 300;
  double alpha = 0.05;
  bool stop_on_reject = false;
  std::string layout = "interleaved";
  std::string input = "-";
  std::string train;
  std::string eval;
  std::string regressor = "knn";
  bool warmup_echo = false;
  std::string out = "-";
};

void write_header(std::ostream& out) {
  out << "k,mean,variance,p_value,lower,upper,reject,degenerate\n";
}

void write_record(std::ostream& out, const AnytimeResult& r, double mean, double variance) {
  out << r.k << ',' << format_double(mean) << ',' << format_double(variance) << ','
      << format_double(r.p_value) << ',' << format_double(r.lower) << ','
      << format_double(r.upper) << ',' << (r.reject ? 1 : 0) << ','
      << (r.degenerate ? 1 : 0) << '\n';
}

void echo_warmup(std::uint64_t k, double mean, double variance) {
  std::cerr << "warmup," << k << ',' << format_double(mean) << ',' << format_double(variance)
            << '\n';
}

int monitor_mean(const MonitorOptions& opt, std::ostream& out) {
  const AlphaLevel alpha(opt.alpha);
  InputSource input(opt.input);
  NumericCsvReader reader(input.stream(), input.name(), 1);
  MomentAccumulator stats;
  std::vector<double> row;
  write_header(out);
  while (reader.next(row)) {
    stats.update(row[0]);
    if (stats.count() < opt.m) {
      if (opt.warmup_echo) echo_warmup(stats.count(), stats.mean(), stats.variance());
      continue;
    }
    const AnytimeResult r = evaluate(stats, opt.m, alpha);
    write_record(out, r, stats.mean(), stats.variance());
    if (r.reject && opt.stop_on_reject) return kExitRejected;
  }
  return kExitOk;
}

// Yields (train, eval) pairs from one interleaved file or two parallel files.
class TripletPairs {
 public:
  explicit TripletPairs(const MonitorOptions& opt) {
    if (opt.layout == "interleaved") {
      if (!opt.train.empty() || !opt.eval.empty())
        throw UsageError("--train/--eval need --layout two-files");
      first_ = std::make_unique<InputSource>(opt.input);
    } else {
      if (opt.train.empty() || opt.eval.empty())
        throw UsageError("--layout two-files needs --train and --eval");
      first_ = std::make_unique<InputSource>(opt.train);
      second_ = std::make_unique<InputSource>(opt.eval);
      eval_reader_ =
          std::make_unique<NumericCsvReader>(second_->stream(), second_->name());
    }
    train_reader_ = std::make_unique<NumericCsvReader>(first_->stream(), first_->name());
  }

  bool next(Triplet& train, Triplet& eval) {
    if (!train_reader_->next(row_)) {
      if (eval_reader_ && eval_reader_->next(row_))
        throw ParseError(second_->name(), eval_reader_->line(),
                         "evaluation file has more rows than the training file");
      return false;
    }
    train = row_to_triplet(row_, first_->name(), train_reader_->line());
    if (eval_reader_) {
      if (!eval_reader_->next(row_))
        throw ParseError(first_->name(), train_reader_->line(),
                         "training file has more rows than the evaluation file");
      eval = row_to_triplet(row_, second_->name(), eval_reader_->line());
      if (eval.z.size() != train.z.size())
        throw ParseError(second_->name(), eval_reader_->line(),
                         "row width differs from the training file");
    } else {
      if (!train_reader_->next(row_))
        throw ParseError(first_->name(), train_reader_->line(),
                         "training row without a following evaluation row");
      eval = row_to_triplet(row_, first_->name(), train_reader_->line());
    }
    return true;
  }

 private:
  std::unique_ptr<InputSource> first_;
  std::unique_ptr<InputSource> second_;
  std::unique_ptr<NumericCsvReader> train_reader_;
  std::unique_ptr<NumericCsvReader> eval_reader_;
  std::vector<double> row_;
};

int monitor_cit(const MonitorOptions& opt, std::ostream& out) {
  const AlphaLevel alpha(opt.alpha);
  const RegressorFactory factory = regressor_factory(opt.regressor);
  GcmState state(factory(), factory());
  TripletPairs pairs(opt);
  Triplet train, eval;
  write_header(out);
  while (pairs.next(train, eval)) {
    state.update(eval, train);
    const double mean = state.residual_stats().mean();
    const double variance = state.residual_variance();
    if (state.n() < opt.m) {
      if (opt.warmup_echo) echo_warmup(state.n(), mean, variance);
      continue;
    }
    const AnytimeResult r = state.evaluate(opt.m, alpha);
    write_record(out, r, mean, variance);
    if (r.reject && opt.stop_on_reject) return kExitRejected;
  }
  return kExitOk;
}

int run_monitor(const MonitorOptions& opt) {
  OutputTarget target(opt.out);
  const int code = opt.mode == "mean" ? monitor_mean(opt, target.stream())
                                      : monitor_cit(opt, target.stream());
  target.finish();
  return code;
}

}  // namespace

void add_monitor(CLI::App& app, Action& action) {
  auto opt = std::make_shared<MonitorOptions>();
  CLI::App* sub = app.add_subcommand(
      "monitor",
      "Read a stream and print the anytime p-value and confidence sequence from index m on");
  sub->add_option("--mode", opt->mode, "mean: one numeric column; cit: x,y,z_1..z_d rows")
      ->check(CLI::IsMember({"mean", "cit"}))
      ->capture_default_str();
  sub->add_option("--m", opt->m, "Start index")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--alpha", opt->alpha, "Significance level")
      ->check(kOpenUnitInterval)
      ->capture_default_str();
  sub->add_flag("--stop-on-reject", opt->stop_on_reject,
                "Exit with status 3 after the first rejecting record");
  sub->add_option("--layout", opt->layout,
                  "cit mode: interleaved train/eval rows in one input, or two files")
      ->check(CLI::IsMember({"interleaved", "two-files"}))
      ->capture_default_str();
  sub->add_option("--input", opt->input, "Input file, - for stdin")->capture_default_str();
  sub->add_option("--train", opt->train, "Training triplets (two-files layout)");
  sub->add_option("--eval", opt->eval, "Evaluation triplets (two-files layout)");
  sub->add_option("--regressor", opt->regressor, "cit mode nuisance regressor")
      ->check(CLI::IsMember(regressor_names()))
      ->capture_default_str();
  sub->add_flag("--warmup-echo", opt->warmup_echo,
                "Print running mean and variance before index m to stderr");
  sub->add_option("--out", opt->out, "Output CSV, - for stdout")->capture_default_str();
  sub->callback([opt, &action] { action = [opt] { return run_monitor(*opt); }; });
}

}  // namespace avi::cli
