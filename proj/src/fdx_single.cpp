#include "fdx/fdx_single.hpp"

#include <algorithm>
#include <stdexcept>

#include "fdx/parallel.hpp"
#include "fdx/stats.hpp"

namespace fdx {

namespace detail {

double descending_critical(std::span<const double> sorted_obs, std::span<const double> sorted_row,
                           std::span<const double> sorted_excluded, double gamma,
                           std::uint32_t* grid_size) {
  std::size_t i = sorted_obs.size();
  std::size_t r = sorted_row.size();
  std::size_t e = sorted_excluded.size();
  double next_larger = kInf;
  bool has_larger = false;
  std::uint32_t visited = 0;
  double v = kInf;

  while (i > 0 || r > 0) {
    v = -kInf;
    if (i > 0) v = std::max(v, sorted_obs[i - 1]);
    if (r > 0) v = std::max(v, sorted_row[r - 1]);
    // counts strictly above v: exactly the entries consumed on earlier (larger) grid values
    while (e > 0 && sorted_excluded[e - 1] > v) --e;
    const std::size_t above_obs = sorted_obs.size() - i;
    const std::size_t above_num = (sorted_row.size() - r) - (sorted_excluded.size() - e);
    if (fraction_exceeds(above_num, above_obs, gamma)) {
      if (grid_size) *grid_size = visited + 1;
      return has_larger ? next_larger : kInf;
    }
    while (i > 0 && sorted_obs[i - 1] == v) --i;
    while (r > 0 && sorted_row[r - 1] == v) --r;
    next_larger = v;
    has_larger = true;
    ++visited;
  }
  if (grid_size) *grid_size = visited;
  return next_larger;  // no grid point certifies: the smallest grid value
}

}  // namespace detail

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

void append_common_warnings(const StatMatrix& stats, const AnalysisConfig& cfg,
                            std::vector<std::string>& warnings) {
  const std::size_t need = min_transform_count(cfg.alpha);
  if (stats.rows() < need)
    warnings.push_back("only " + std::to_string(stats.rows()) + " transformations; at least " +
                       std::to_string(need) + " are needed for any rejection at alpha=" +
                       std::to_string(cfg.alpha));
  if (stats.infinite_entries() > 0)
    warnings.push_back(std::to_string(stats.infinite_entries()) +
                       " infinite statistic entries (degenerate-variance sentinel)");
}

}  // namespace

double s_g_grid(std::span<const double> stats_obs, std::span<const double> stats_g, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  if (stats_obs.empty() || stats_g.empty()) throw std::invalid_argument("empty statistic vector");
  const auto obs = sorted_copy(stats_obs);
  const auto row = sorted_copy(stats_g);
  return detail::descending_critical(obs, row, {}, gamma);
}

SingleStepResult single_step(const StatMatrix& stats, const AnalysisConfig& cfg) {
  cfg.validate();
  stats.validate();
  const std::size_t d = stats.rows();

  const auto obs_sorted = sorted_copy(stats.observed());
  SingleStepResult res;
  res.s_values.resize(d);
  res.grid_sizes.resize(d);

  parallel_for(d, [&](std::size_t g) {
    const auto row_sorted = sorted_copy(stats.row(g));
    res.s_values[g] =
        detail::descending_critical(obs_sorted, row_sorted, {}, cfg.gamma, &res.grid_sizes[g]);
  });

  res.q = upper_quantile(res.s_values, cfg.alpha);
  res.rejections = reject_above(stats.observed(), res.q);
  append_common_warnings(stats, cfg, res.warnings);
  return res;
}

SingleStepResult single_step_pvalues(const StatMatrix& pvalues, const AnalysisConfig& cfg) {
  cfg.validate();
  const std::size_t d = pvalues.rows();
  std::vector<std::vector<double>> negated(d);
  for (std::size_t g = 0; g < d; ++g) {
    const auto row = pvalues.row(g);
    negated[g] = negate_pvalues(row);
  }
  SingleStepResult res = single_step(StatMatrix::from_rows(negated), cfg);

  // Map back to the p-value scale: q_pv = -q, reject P_i < q_pv.
  res.q = -res.q;
  res.rejections.threshold = res.q;
  for (double& s : res.s_values) s = -s;
  res.pvalue_scale = true;
  return res;
}

}  // namespace fdx
