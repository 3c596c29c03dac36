#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "fdx/resampling.hpp"
#include "fdx/rng.hpp"
#include "fdx/stats.hpp"

using namespace fdx;

namespace {

bool is_permutation_of_iota(const std::vector<std::uint32_t>& p) {
  std::vector<std::uint32_t> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) return false;
  return true;
}

Dataset small_two_group(std::uint64_t seed, std::size_t n, std::size_t m) {
  auto rng = make_rng(seed);
  std::vector<double> rows(n * m);
  for (double& v : rows) v = normal_draw(rng);
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t i = n / 2; i < n; ++i) labels[i] = 1;
  return make_dataset(DesignKind::two_group, rows, n, m, labels);
}

}  // namespace

TEST_CASE("draw_transforms contracts") {
  ResamplePlan plan;
  plan.engine = ResampleEngine::sign_flip;
  plan.count = 1;
  plan.seed = 5;
  const auto flips = draw_transforms(plan, 3);
  REQUIRE(flips.signs.size() == 2);
  CHECK(flips.signs[0] == std::vector<std::int8_t>{1, 1, 1});
  for (std::int8_t s : flips.signs[1]) CHECK((s == 1 || s == -1));

  plan.engine = ResampleEngine::label_permutation;
  plan.count = 2;
  const auto perms = draw_transforms(plan, 4);
  REQUIRE(perms.perms.size() == 3);
  CHECK(perms.perms[0] == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(is_permutation_of_iota(perms.perms[1]));
  CHECK(is_permutation_of_iota(perms.perms[2]));

  const auto again = draw_transforms(plan, 4);
  CHECK(again.perms == perms.perms);  // same seed, same draws

  plan.seed = 6;
  const auto other = draw_transforms(plan, 4);
  CHECK(other.perms != perms.perms);

  CHECK_THROWS_AS(draw_transforms(plan, 0), std::invalid_argument);
}

TEST_CASE("draw_transforms without replacement") {
  ResamplePlan plan;
  plan.engine = ResampleEngine::sign_flip;
  plan.with_replacement = false;
  plan.count = 3;  // group {-1,+1}^2 has 4 elements
  plan.seed = 9;
  const auto ts = draw_transforms(plan, 2);
  std::vector<std::vector<std::int8_t>> all = ts.signs;
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());  // all distinct

  plan.count = 4;  // would need 5 distinct elements
  CHECK_THROWS_AS(draw_transforms(plan, 2), std::invalid_argument);
}

TEST_CASE("build_stat_matrix sign-flip hand value") {
  // column 1 = (1, -2); flips (-1, +1) turn it into (-1, -2), |mean| = 1.5
  Dataset ds = make_dataset(DesignKind::one_sample, std::vector<double>{1, 10, -2, 20}, 2, 2);
  TransformSet ts;
  ts.engine = ResampleEngine::sign_flip;
  ts.n = 2;
  ts.signs = {{1, 1}, {-1, 1}};
  StatisticPlugin plugin;
  plugin.kind = StatKind::abs_mean;
  const auto stats = build_stat_matrix(ds, ts, plugin);
  CHECK(stats.row(1)[0] == doctest::Approx(1.5));
  CHECK(stats.row(0)[0] == doctest::Approx(0.5));
}

TEST_CASE("identity row is bit-identical to direct statistics") {
  const auto ds = small_two_group(31, 8, 5);
  ResamplePlan plan;
  plan.count = 6;
  plan.seed = 31;
  const auto stats = build_stat_matrix(ds, draw_transforms(plan, ds.n), StatisticPlugin{});
  for (std::size_t j = 0; j < ds.m; ++j)
    CHECK(stats.row(0)[j] == abs_two_sample_t(ds.column(j), ds.labels));
}

TEST_CASE("response identity permutation reproduces row 0") {
  auto rng = make_rng(32);
  std::vector<double> rows(6 * 3);
  for (double& v : rows) v = normal_draw(rng);
  std::vector<double> y(6);
  for (double& v : y) v = normal_draw(rng);
  const auto ds = make_dataset(DesignKind::response, rows, 6, 3, {}, y);
  TransformSet ts;
  ts.engine = ResampleEngine::response_permutation;
  ts.n = 6;
  ts.perms = {{0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5}};
  StatisticPlugin plugin;
  plugin.kind = StatKind::abs_pearson;
  const auto stats = build_stat_matrix(ds, ts, plugin);
  for (std::size_t j = 0; j < 3; ++j) CHECK(stats.row(0)[j] == stats.row(1)[j]);
}

TEST_CASE("same seed gives the same matrix for any worker count") {
  const auto ds = small_two_group(33, 10, 6);
  ResamplePlan plan;
  plan.count = 8;
  plan.seed = 77;

  setenv("FDX_THREADS", "1", 1);
  const auto serial = build_stat_matrix(ds, draw_transforms(plan, ds.n), StatisticPlugin{});
  setenv("FDX_THREADS", "4", 1);
  const auto threaded = build_stat_matrix(ds, draw_transforms(plan, ds.n), StatisticPlugin{});
  unsetenv("FDX_THREADS");

  REQUIRE(serial.rows() == threaded.rows());
  for (std::size_t g = 0; g < serial.rows(); ++g)
    for (std::size_t j = 0; j < serial.cols(); ++j) CHECK(serial.row(g)[j] == threaded.row(g)[j]);
}

TEST_CASE("rank of the observed statistic is uniform under the null") {
  // exchangeable null data: the identity row's rank among all transformation
  // rows should be uniform on 1..d
  const std::size_t d = 8, iters = 400;
  std::vector<std::size_t> rank_counts(d, 0);
  for (std::size_t it = 0; it < iters; ++it) {
    const auto ds = small_two_group(1000 + it, 10, 3);
    ResamplePlan plan;
    plan.count = d - 1;
    plan.seed = 2000 + it;
    const auto stats = build_stat_matrix(ds, draw_transforms(plan, ds.n), StatisticPlugin{});
    std::size_t rank = 0;
    for (std::size_t g = 0; g < d; ++g)
      if (stats.row(g)[0] <= stats.row(0)[0]) ++rank;
    rank_counts[rank - 1] += 1;
  }
  const double expected = static_cast<double>(iters) / static_cast<double>(d);
  const double sd = std::sqrt(expected * (1.0 - 1.0 / static_cast<double>(d)));
  for (std::size_t r = 0; r < d; ++r)
    CHECK(std::abs(static_cast<double>(rank_counts[r]) - expected) < 4.5 * sd + 1.0);
}

TEST_CASE("engine and design must match") {
  const auto ds = small_two_group(34, 6, 3);
  TransformSet ts;
  ts.engine = ResampleEngine::sign_flip;
  ts.n = 6;
  ts.signs = {std::vector<std::int8_t>(6, 1)};
  CHECK_THROWS_AS(build_stat_matrix(ds, ts, StatisticPlugin{}), std::invalid_argument);
}
