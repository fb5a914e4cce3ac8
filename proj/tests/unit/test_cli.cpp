#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "avi/av_mean.hpp"
#include "avi/csv.hpp"
#include "avi/dgp.hpp"
#include "avi/random.hpp"
#include "avi/regressors.hpp"
#include "avi/seq_gcm.hpp"
#include "avi/streaming_stats.hpp"

namespace fs = std::filesystem;
using namespace avi;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

class Workdir {
 public:
  Workdir() : path_(fs::temp_directory_path() / ("avi_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~Workdir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

Run run(const Workdir& dir, const std::string& args) {
  const fs::path out = dir / "stdout", err = dir / "stderr";
  const std::string cmd = std::string("'") + AVI_CLI_PATH + "' " + args + " > '" + out.string() +
                          "' 2> '" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string expected_record(const AnytimeResult& r, double mean, double variance) {
  return std::to_string(r.k) + ',' + format_double(mean) + ',' + format_double(variance) + ',' +
         format_double(r.p_value) + ',' + format_double(r.lower) + ',' + format_double(r.upper) +
         ',' + (r.reject ? "1" : "0") + ',' + (r.degenerate ? "1" : "0");
}

std::string triplet_row(const Triplet& t) {
  std::string s = format_double(t.x) + ',' + format_double(t.y);
  for (double z : t.z) s += ',' + format_double(z);
  return s;
}

}  // namespace

TEST_CASE("version and usage") {
  Workdir dir;
  const Run v = run(dir, "--version");
  CHECK(v.status == 0);
  CHECK(v.out.find('.') != std::string::npos);
  CHECK(run(dir, "--help").status == 0);
  CHECK(run(dir, "monitor --mode bogus").status == 2);
  CHECK(run(dir, "nosuchcommand").status == 2);
  CHECK(run(dir, "monitor --alpha 1.5 --input /dev/null").status == 2);
}

TEST_CASE("mean monitor reproduces the library field for field") {
  Workdir dir;
  Engine g = replication_engine(21, 0);
  std::string input = "value\n";
  std::vector<double> xs(400);
  for (auto& x : xs) {
    x = 0.1 + standard_normal(g);
    input += format_double(x) + '\n';
  }
  spit(dir / "in.csv", input);
  const Run r = run(dir, "monitor --m 50 --alpha 0.1 --input '" + (dir / "in.csv").string() + "'");
  REQUIRE(r.status == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 1 + xs.size() - 49);
  CHECK(out[0] == "k,mean,variance,p_value,lower,upper,reject,degenerate");
  MomentAccumulator stats;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    stats.update(xs[i]);
    if (stats.count() < 50) continue;
    const auto res = evaluate(stats, 50, AlphaLevel(0.1));
    REQUIRE(out[stats.count() - 49] == expected_record(res, stats.mean(), stats.variance()));
  }
}

TEST_CASE("mean monitor reads stdin and echoes the warm-up") {
  Workdir dir;
  spit(dir / "in.csv", "1\n2\n3\n4\n");
  const Run r = run(dir, "monitor --m 3 --warmup-echo < '" + (dir / "in.csv").string() + "'");
  CHECK(r.status == 0);
  CHECK(lines(r.out).size() == 3);
  CHECK(r.err == "warmup,1,1,0\nwarmup,2,1.5,0.25\n");
}

TEST_CASE("constant stream is degenerate with p = 1") {
  Workdir dir;
  std::string input;
  for (int i = 0; i < 20; ++i) input += "4.25\n";
  spit(dir / "c.csv", input);
  const Run r = run(dir, "monitor --m 5 --input '" + (dir / "c.csv").string() + "'");
  REQUIRE(r.status == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 17);
  for (std::size_t i = 1; i < out.size(); ++i)
    CHECK(out[i] == std::to_string(i + 4) + ",4.25,0,1,4.25,4.25,0,1");
}

TEST_CASE("shifted stream rejects and stop-on-reject exits 3") {
  Workdir dir;
  Engine g = replication_engine(22, 0);
  std::string input;
  for (int i = 0; i < 10000; ++i) input += format_double(0.2 + standard_normal(g)) + '\n';
  spit(dir / "s.csv", input);
  const std::string path = (dir / "s.csv").string();
  const Run full = run(dir, "monitor --input '" + path + "'");
  REQUIRE(full.status == 0);
  const auto out = lines(full.out);
  std::size_t first = 0;
  for (std::size_t i = 1; i < out.size() && first == 0; ++i)
    if (out[i].ends_with(",1,0")) first = i;
  REQUIRE(first > 0);
  const Run stop = run(dir, "monitor --stop-on-reject --input '" + path + "'");
  CHECK(stop.status == 3);
  const auto stopped = lines(stop.out);
  CHECK(stopped.size() == first + 1);
  CHECK(stopped.back() == out[first]);
}

TEST_CASE("malformed rows report the line") {
  Workdir dir;
  spit(dir / "bad.csv", "x\n1\n2\nthree\n4\n");
  const Run r = run(dir, "monitor --m 1 --input '" + (dir / "bad.csv").string() + "'");
  CHECK(r.status == 1);
  CHECK(r.err.find("bad.csv:4") != std::string::npos);
  CHECK(run(dir, "monitor --input '" + (dir / "missing.csv").string() + "'").status == 1);
}

TEST_CASE("cit monitor in both layouts matches GcmState") {
  Workdir dir;
  const CitDgp dgp(2, 0.0);
  Engine g = replication_engine(23, 0);
  std::string interleaved = "x,y,z1,z2\n", train_file, eval_file;
  GcmState state(regressor_factory("knn")(), regressor_factory("knn")());
  std::vector<std::string> expected;
  for (int k = 1; k <= 150; ++k) {
    Triplet train = dgp.sample(g), eval = dgp.sample(g);
    interleaved += triplet_row(train) + '\n' + triplet_row(eval) + '\n';
    train_file += triplet_row(train) + '\n';
    eval_file += triplet_row(eval) + '\n';
    state.update(eval, train);
    if (k >= 20)
      expected.push_back(expected_record(state.evaluate(20, AlphaLevel(0.05)),
                                         state.residual_stats().mean(), state.residual_variance()));
  }
  spit(dir / "i.csv", interleaved);
  spit(dir / "train.csv", train_file);
  spit(dir / "eval.csv", eval_file);

  const Run a = run(dir, "monitor --mode cit --m 20 --input '" + (dir / "i.csv").string() + "'");
  REQUIRE(a.status == 0);
  const auto out = lines(a.out);
  REQUIRE(out.size() == expected.size() + 1);
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(out[i + 1] == expected[i]);

  const Run b = run(dir, "monitor --mode cit --m 20 --layout two-files --train '" +
                             (dir / "train.csv").string() + "' --eval '" +
                             (dir / "eval.csv").string() + "'");
  CHECK(b.status == 0);
  CHECK(b.out == a.out);

  spit(dir / "short.csv", eval_file.substr(0, eval_file.rfind('\n', eval_file.size() - 2) + 1));
  const Run c = run(dir, "monitor --mode cit --layout two-files --train '" +
                             (dir / "train.csv").string() + "' --eval '" +
                             (dir / "short.csv").string() + "'");
  CHECK(c.status == 1);
  CHECK(c.err.find("train.csv:150") != std::string::npos);
  CHECK(run(dir, "monitor --mode cit --layout two-files --train x.csv").status == 2);
}

TEST_CASE("experiment command") {
  Workdir dir;
  spit(dir / "nofam.cfg", "kind = mean-calibration\nreplications = 5\nseed = 1\n");
  const Run missing = run(dir, "experiment --config '" + (dir / "nofam.cfg").string() +
                                   "' --out '" + (dir / "x").string() + "'");
  CHECK(missing.status == 2);
  CHECK(missing.err.find("family") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "x.csv"));

  spit(dir / "one.cfg",
       "kind = mean-calibration\nfamily = normal\nreplications = 1\nseed = 5\nm = 10\nhorizon = 200\n");
  const Run one = run(dir, "experiment --config '" + (dir / "one.cfg").string() + "' --out '" +
                               (dir / "one").string() + "'");
  REQUIRE(one.status == 0);
  const auto rows = lines(slurp(dir / "one.csv"));
  REQUIRE(rows.size() == 192);
  CHECK(rows[0] == "k,value,curve");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ok = rows[i].ends_with(",0,mean-calibration") || rows[i].ends_with(",1,mean-calibration");
    CHECK_MESSAGE(ok, rows[i]);
  }
  const std::string meta = slurp(dir / "one.meta");
  CHECK(meta.find("config_hash = ") != std::string::npos);
  CHECK(meta.find("seed = 5") != std::string::npos);

  const Run reseeded = run(dir, "experiment --config '" + (dir / "one.cfg").string() +
                                    "' --seed 6 --out '" + (dir / "six").string() + "'");
  REQUIRE(reseeded.status == 0);
  CHECK(slurp(dir / "six.meta").find("seed = 6") != std::string::npos);

  spit(dir / "cit.cfg",
       "kind = cit-null\nd = 1\nregressor = partition\nreplications = 6\nseed = 2\nm = 20\n"
       "horizon = 120\n");
  const std::string cit_args = "experiment --config '" + (dir / "cit.cfg").string() + "' --out '";
  REQUIRE(run(dir, cit_args + (dir / "a").string() + "' --threads 1").status == 0);
  REQUIRE(run(dir, cit_args + (dir / "b").string() + "' --threads 3").status == 0);
  for (const char* suffix : {".seqgcm.csv", ".batchgcm.csv", ".meta"}) {
    CHECK(fs::exists(dir / (std::string("a") + suffix)));
    CHECK(slurp(dir / (std::string("a") + suffix)) == slurp(dir / (std::string("b") + suffix)));
  }
  CHECK(lines(slurp(dir / "a.seqgcm.csv")).size() == 102);
}

TEST_CASE("lab commands") {
  Workdir dir;
  const Run w = run(dir, "lab wiener --horizon 20 --step 0.01 --replications 50 --seed 3 --x 2.0");
  REQUIRE(w.status == 0);
  CHECK(lines(w.out).size() == 51);
  CHECK(w.err.find("ks_distance") != std::string::npos);
  CHECK(run(dir, "lab wiener --horizon 20 --replications 50 --seed 3 --x 2.0 --threads 2").out == w.out);

  const Run p = run(dir, "lab partial-sum --family rademacher --m 10 --horizon 300 --replications 20");
  CHECK(p.status == 0);
  CHECK(lines(p.out).size() == 21);
  const Run l = run(dir, "lab lil --family normal --k-min 100 --k-max 1000 --replications 10");
  CHECK(l.status == 0);
  CHECK(l.err.find("median") != std::string::npos);
  CHECK(run(dir, "lab partial-sum --family cauchy").status == 2);
}
