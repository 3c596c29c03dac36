#include "fdx/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fdx/fdx_seq.hpp"
#include "fdx/fdx_single.hpp"
#include "fdx/maxt.hpp"
#include "fdx/report.hpp"
#include "fdx/rng.hpp"
#include "fdx/stats.hpp"

namespace fdx {

namespace {

std::vector<std::size_t> indices_of(const RejectionSet& r) { return r.indices; }

StatMatrix random_matrix(std::size_t d, std::size_t m, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<std::vector<double>> rows(d, std::vector<double>(m));
  for (auto& row : rows)
    for (double& v : row) v = normal_draw(rng);
  return StatMatrix::from_rows(rows);
}

bool check_quantile() {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>(i + 1);
  return upper_quantile(v, 0.05) == 95.0 && upper_quantile(std::vector<double>{5, 2}, 0.5) == 2.0;
}

bool check_exceedance() {
  const std::vector<double> row{1, 2, 3, 4, -5, 6};
  return count_exceed(row, 5.0) == 1 && count_exceed(row, -6.0) == 6 && count_exceed(row, 6.0) == 0;
}

bool check_grid_critical() {
  const std::vector<double> obs{5, 3};
  const std::vector<double> g1{1, 2};
  return s_g_grid(obs, g1, 0.4) == 2.0 && s_g_grid(obs, obs, 0.4) == 5.0 &&
         s_g_grid(obs, g1, 0.0) == 2.0;
}

StatMatrix sign_flip_fixture(bool with_seventh) {
  std::vector<double> x{1, 2, 3, 4, -5, 6};
  if (with_seventh) x.push_back(7);
  std::vector<double> flipped(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) flipped[i] = -x[i];
  return StatMatrix::from_rows({x, flipped});
}

bool check_fixture_six() {
  AnalysisConfig cfg;
  cfg.alpha = 0.5;
  cfg.gamma = 0.5;
  const auto res = single_step(sign_flip_fixture(false), cfg);
  return res.q == 5.0 && indices_of(res.rejections) == std::vector<std::size_t>{6};
}

bool check_fixture_seven() {
  AnalysisConfig cfg;
  cfg.alpha = 0.5;
  cfg.gamma = 0.5;
  const auto res = single_step(sign_flip_fixture(true), cfg);
  return res.q == -3.0 && indices_of(res.rejections) == std::vector<std::size_t>{1, 2, 3, 4, 6, 7};
}

bool check_gamma0_single() {
  const auto stats = random_matrix(12, 7, 41);
  AnalysisConfig cfg;
  cfg.alpha = 0.2;
  cfg.gamma = 0.0;
  const auto fdx_res = single_step(stats, cfg);
  const auto maxt_res = maxt_single(stats, cfg.alpha);
  return fdx_res.q == maxt_res.Q0 && fdx_res.rejections == maxt_res.rejections;
}

bool check_gamma0_sequential() {
  const auto stats = random_matrix(10, 6, 97);
  AnalysisConfig cfg;
  cfg.alpha = 0.3;
  cfg.gamma = 0.0;
  const auto fdx_res = sequential_exact(stats, cfg);
  const auto maxt_res = maxt_sequential(stats, cfg.alpha);
  return fdx_res.q_lim == maxt_res.Q_lim &&
         indices_of(fdx_res.rejections) == indices_of(maxt_res.rejections_seq);
}

bool check_pvalue_duality() {
  auto rng = make_rng(7);
  std::vector<std::vector<double>> rows(8, std::vector<double>(5));
  for (auto& row : rows)
    for (double& v : row) v = uniform01_open(rng);
  const auto pmat = StatMatrix::from_rows(rows);
  AnalysisConfig cfg;
  cfg.alpha = 0.25;
  cfg.gamma = 0.2;
  const auto via_p = single_step_pvalues(pmat, cfg);

  std::vector<std::vector<double>> negated(rows.size());
  for (std::size_t g = 0; g < rows.size(); ++g) negated[g] = negate_pvalues(rows[g]);
  const auto via_stat = single_step(StatMatrix::from_rows(negated), cfg);
  return indices_of(via_p.rejections) == indices_of(via_stat.rejections) &&
         via_p.q == -via_stat.q;
}

bool check_zoom_bounds() {
  std::vector<double> obs(30);
  for (std::size_t i = 0; i < obs.size(); ++i) obs[i] = 100.0 - static_cast<double>(i);
  const double q = obs[21] - 0.5;  // exactly 22 statistics above
  const auto table = zoom_table(obs, q, 0.2, 0.1);
  if (table.rows.size() != 22) return false;
  auto bound_at = [&](std::size_t k) -> long {
    for (const auto& row : table.rows)
      if (row.k == k) return static_cast<long>(row.v_bound);
    return -1;
  };
  return bound_at(22) == 4 && bound_at(9) == 1 && bound_at(4) == 0;
}

}  // namespace

int run_selftest(std::ostream& out) {
  const std::vector<std::pair<std::string, std::function<bool()>>> checks = {
      {"order-statistic quantile", check_quantile},
      {"exceedance counting", check_exceedance},
      {"grid critical value", check_grid_critical},
      {"six-hypothesis sign-flip fixture", check_fixture_six},
      {"seven-hypothesis extension fixture", check_fixture_seven},
      {"gamma=0 equals single-step maxT", check_gamma0_single},
      {"gamma=0 equals sequential maxT", check_gamma0_sequential},
      {"p-value negation duality", check_pvalue_duality},
      {"zoom table worked bounds", check_zoom_bounds},
  };

  int failures = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "FAIL - " << name << " (exception: " << e.what() << ")\n";
      ++failures;
      continue;
    }
    if (ok) {
      out << "ok - " << name << "\n";
    } else {
      out << "FAIL - " << name << "\n";
      ++failures;
    }
  }
  out << "selftest: " << checks.size() << " checks, " << failures << " failure"
      << (failures == 1 ? "" : "s") << "\n";
  return failures;
}

}  // namespace fdx
