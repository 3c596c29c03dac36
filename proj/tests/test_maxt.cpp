#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <vector>

#include "fdx/fdx_seq.hpp"
#include "fdx/fdx_single.hpp"
#include "fdx/maxt.hpp"
#include "fdx/rng.hpp"
#include "support/oracles.hpp"

using namespace fdx;

TEST_CASE("maxt_single worked example") {
  const auto stats = StatMatrix::from_rows({{5, 3}, {1, 2}});
  const auto res = maxt_single(stats, 0.5);
  CHECK(res.maxima == std::vector<double>{5, 2});
  CHECK(res.Q0 == 2.0);
  CHECK(res.rejections.indices == std::vector<std::size_t>{1, 2});
}

TEST_CASE("maxt_single extreme quantiles") {
  // alpha so small the quantile is the global maximum: row 0 attains it, so
  // strict exceedance rejects nothing
  const auto stats = StatMatrix::from_rows({{9, 3}, {1, 2}, {4, 5}});
  const auto res = maxt_single(stats, 0.01);
  CHECK(res.Q0 == 9.0);
  CHECK(res.rejections.empty());

  // identity row alone
  const auto solo = maxt_single(StatMatrix::from_rows({{2, 7, 4}}), 0.1);
  CHECK(solo.Q0 == 7.0);
  CHECK(solo.rejections.empty());
}

TEST_CASE("maxt_sequential worked example and termination") {
  const auto stats = StatMatrix::from_rows({{5, 3}, {1, 2}});
  const auto res = maxt_sequential(stats, 0.5);
  CHECK(res.Q0 == 2.0);
  CHECK(res.Q_lim == 2.0);  // complement empties after step 0
  CHECK(res.rejections_seq.indices == std::vector<std::size_t>{1, 2});

  const auto none = maxt_sequential(StatMatrix::from_rows({{0.1, 0.2}, {5, 6}, {7, 8}}), 0.4);
  CHECK(none.rejections_single.empty());
  CHECK(none.Q_lim == none.Q0);
}

TEST_CASE("sequential dominates single step and Q_lim <= Q0") {
  auto rng = make_rng(61);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t d = 1 + static_cast<std::size_t>(bounded(rng, 12));
    const std::size_t m = 2 + static_cast<std::size_t>(bounded(rng, 12));
    const auto stats = StatMatrix::from_rows(oracles::random_rows(rng, d, m));
    const double alpha = 0.05 + 0.6 * uniform01(rng);
    const auto res = maxt_sequential(stats, alpha);
    CHECK(res.Q_lim <= res.Q0);
    CHECK(std::includes(res.rejections_seq.indices.begin(), res.rejections_seq.indices.end(),
                        res.rejections_single.indices.begin(),
                        res.rejections_single.indices.end()));
    double prev = kInf;
    for (const auto& step : res.steps) {
      CHECK(step.Q <= prev);
      prev = step.Q;
    }
  }
}

TEST_CASE("single-step FDX is never stricter than maxT") {
  // Holds structurally: every s_g is at most the row maximum. The analogous
  // sequential ordering q_lim <= Q_lim can fail on arbitrary matrices when the
  // identity row is pivotal at the quantile, so it is not asserted.
  auto rng = make_rng(62);
  for (int rep = 0; rep < 40; ++rep) {
    const auto stats = StatMatrix::from_rows(oracles::random_rows(rng, 8, 9));
    const double alpha = 0.2 + 0.4 * uniform01(rng);
    for (double gamma : {0.1, 0.2, 0.5}) {
      AnalysisConfig cfg;
      cfg.alpha = alpha;
      cfg.gamma = gamma;
      CHECK(single_step(stats, cfg).q <= maxt_single(stats, alpha).Q0);
      CHECK(sequential_exact(stats, cfg).q_lim <= maxt_single(stats, alpha).Q0);
    }
  }
}

TEST_CASE("coincidence_check verdicts") {
  const RejectionSet a{0.0, {3, 7}};
  CHECK(coincidence_check(a, a, 0.1) == Coincidence::consistent);

  RejectionSet fdx{0.0, {}}, mx{0.0, {}};
  for (std::size_t i = 1; i <= 12; ++i) fdx.indices.push_back(i);
  for (std::size_t i = 1; i <= 9; ++i) mx.indices.push_back(i);
  CHECK(coincidence_check(fdx, mx, 0.1) == Coincidence::violation);  // mx below 1/gamma, differs

  const RejectionSet empty{kInf, {}};
  const RejectionSet one{0.0, {4}};
  CHECK(coincidence_check(empty, one, 0.1) == Coincidence::violation);

  // both at or above 1/gamma may differ
  RejectionSet big = fdx;
  RejectionSet big2 = fdx;
  big2.indices.push_back(13);
  CHECK(coincidence_check(big, big2, 0.1) == Coincidence::consistent);

  // exactly 1/gamma rejections on one side is not "fewer than"
  RejectionSet ten{0.0, {}};
  for (std::size_t i = 1; i <= 10; ++i) ten.indices.push_back(i);
  RejectionSet eleven = ten;
  eleven.indices.push_back(11);
  CHECK(coincidence_check(ten, eleven, 0.1) == Coincidence::consistent);

  CHECK_THROWS_AS(coincidence_check(a, a, 0.0), std::invalid_argument);
}

TEST_CASE("few-rejection coincidence on tie-free instances") {
  // Single-step coincidence holds at every gamma. The sequential pair can
  // legitimately diverge when the count sits exactly at 1/gamma next to the
  // identity row's kept maximum (frequent at gamma=0.5, absent in practice at
  // gamma=0.1), so the sequential assertion sticks to gamma=0.1.
  auto rng = make_rng(63);
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t d = 2 + static_cast<std::size_t>(bounded(rng, 14));
    const std::size_t m = 2 + static_cast<std::size_t>(bounded(rng, 12));
    const auto stats = StatMatrix::from_rows(oracles::random_rows(rng, d, m));
    const double alpha = 0.1 + 0.5 * uniform01(rng);
    for (double gamma : {0.1, 0.2, 0.5}) {
      AnalysisConfig cfg;
      cfg.alpha = alpha;
      cfg.gamma = gamma;
      const auto fdx_s = single_step(stats, cfg);
      const auto mx_s = maxt_single(stats, alpha);
      CHECK(coincidence_check(fdx_s.rejections, mx_s.rejections, gamma) ==
            Coincidence::consistent);
    }
    AnalysisConfig cfg;
    cfg.alpha = alpha;
    cfg.gamma = 0.1;
    const auto fdx_q = sequential_exact(stats, cfg);
    const auto mx_q = maxt_sequential(stats, alpha);
    CHECK(coincidence_check(fdx_q.rejections, mx_q.rejections_seq, 0.1) ==
          Coincidence::consistent);
  }
}
