#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "avi/random.hpp"
#include "avi/regressors.hpp"

using namespace avi;

namespace {

void fit(OnlineRegressor& r, std::initializer_list<std::pair<std::vector<double>, double>> pts) {
  for (const auto& [z, y] : pts) r.fit_update(z, y);
}

double predict(const OnlineRegressor& r, std::vector<double> z) { return r.predict(z); }

}  // namespace

TEST_CASE("single training point is predicted everywhere") {
  for (const auto& name : regressor_names()) {
    auto r = regressor_factory(name)();
    CHECK(predict(*r, {0.3}) == 0.0);
    r->fit_update(std::vector<double>{1.5}, 4.25);
    CHECK(r->size() == 1);
    for (double z : {-100.0, 0.0, 1.5, 7.0}) CHECK_MESSAGE(predict(*r, {z}) == 4.25, name);
  }
  CHECK_THROWS_AS(regressor_factory("forest"), std::invalid_argument);
}

TEST_CASE("knn averages the nearest targets") {
  KnnRegressor knn([](std::size_t) { return std::size_t{2}; });
  fit(knn, {{{0, 0}, 0.0}, {{1, 1}, 1.0}, {{2, 2}, 2.0}});
  CHECK(predict(knn, {0.9, 0.9}) == 0.5);
  CHECK(predict(knn, {1.9, 2.1}) == 1.5);
  KnnRegressor one([](std::size_t) { return std::size_t{1}; });
  fit(one, {{{0}, 10.0}, {{1}, 20.0}});
  CHECK(predict(one, {0.5}) == 10.0);  // tie goes to the earlier point
  KnnRegressor many([](std::size_t) { return std::size_t{50}; });
  fit(many, {{{0}, 1.0}, {{1}, 2.0}});
  CHECK(predict(many, {3.0}) == 1.5);
}

TEST_CASE("knn default rule is ceil(n^(2/3))") {
  CHECK(KnnRegressor::default_rule(1) == 1);
  CHECK(KnnRegressor::default_rule(8) == 4);
  CHECK(KnnRegressor::default_rule(9) == 5);
  CHECK(KnnRegressor::default_rule(27) == 9);
  CHECK(KnnRegressor::default_rule(1000) == 100);
  CHECK(KnnRegressor::default_rule(1001) == 101);
  CHECK(KnnRegressor::default_rule(1000000) == 10000);
}

TEST_CASE("kernel regression") {
  KernelRegressor wide(KernelRegressor::fixed(1e6));
  fit(wide, {{{0}, 1.0}, {{5}, 2.0}, {{-3}, 6.0}});
  for (double z : {-50.0, 0.0, 2.0, 80.0}) CHECK(std::abs(predict(wide, {z}) - 3.0) <= 1e-6);

  KernelRegressor narrow(KernelRegressor::fixed(0.1));
  fit(narrow, {{{0}, 1.0}, {{5}, 2.0}});
  CHECK(std::abs(predict(narrow, {0.05}) - 1.0) <= 1e-12);
  CHECK(predict(narrow, {1e4}) == 1.5);  // no kernel mass: global mean

  const std::vector<double> s{2.0, 0.0};
  const auto h = KernelRegressor::default_rule(16, s);
  CHECK(h[0] == doctest::Approx(2.0 * std::pow(16.0, -1.0 / 6.0)));
  CHECK(h[1] == doctest::Approx(std::pow(16.0, -1.0 / 6.0)));
}

TEST_CASE("regressors reject bad input") {
  for (const auto& name : regressor_names()) {
    auto r = regressor_factory(name)();
    CHECK_THROWS_AS(r->fit_update(std::vector<double>{std::nan("")}, 1.0), std::domain_error);
    CHECK_THROWS_AS(r->fit_update(std::vector<double>{1.0}, INFINITY), std::domain_error);
    r->fit_update(std::vector<double>{1.0}, 1.0);
    CHECK_THROWS_AS(r->fit_update(std::vector<double>{1.0, 2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)r->predict(std::vector<double>{1.0, 2.0}), std::invalid_argument);
  }
  CHECK_THROWS_AS(PartitionRegressor().fit_update(std::vector<double>(5, 0.0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("partition regressor is a cell mean on a dyadically rebuilt grid") {
  PartitionRegressor r;
  Engine g = replication_engine(51, 0);
  std::vector<std::pair<double, double>> data;
  for (int n = 1; n <= 3000; ++n) {
    const double z = standard_normal(g);
    const double y = std::sin(2 * z) + 0.1 * standard_normal(g);
    r.fit_update(std::vector<double>{z}, y);
    data.emplace_back(z, y);
    if (std::has_single_bit(static_cast<unsigned>(n))) CHECK(r.epoch() == std::bit_width(static_cast<unsigned>(n)));
  }
  // brute-force cell mean under the current grid
  for (double q : {-1.2, -0.3, 0.0, 0.4, 1.7}) {
    const std::vector<double> zq{q};
    const auto key = r.cell_key(zq);
    double sum = 0.0;
    int count = 0;
    for (const auto& [z, y] : data) {
      if (r.cell_key(std::vector<double>{z}) == key) {
        sum += y;
        ++count;
      }
    }
    REQUIRE(count > 0);
    CHECK(std::abs(r.predict(zq) - sum / count) <= 1e-12);
    CHECK(std::abs(r.predict(zq) - std::sin(2 * q)) < 0.3);
  }
  CHECK(r.predict(std::vector<double>{1e6}) == doctest::Approx(r.global_mean()));
}

TEST_CASE("regressors converge on a smooth target") {
  for (const auto& name : regressor_names()) {
    auto r = regressor_factory(name)();
    Engine g = replication_engine(52, 0);
    for (int n = 0; n < 4000; ++n) {
      const double z = standard_normal(g);
      r->fit_update(std::vector<double>{z}, z * z / 2 + standard_normal(g));
    }
    double err = 0.0;
    for (double q = -1.5; q <= 1.5; q += 0.1) err = std::max(err, std::abs(predict(*r, {q}) - q * q / 2));
    CHECK_MESSAGE(err < 0.4, name);
  }
}
