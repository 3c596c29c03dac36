#include "fdx/fdx_seq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdx/parallel.hpp"
#include "fdx/rng.hpp"

namespace fdx {

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

// All B-element subsets of `rejected`, lexicographic.
std::vector<std::vector<std::size_t>> enumerate_combos(std::span<const std::size_t> rejected,
                                                       std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  if (b > rejected.size()) return out;
  std::vector<std::size_t> pick(b);
  for (std::size_t i = 0; i < b; ++i) pick[i] = i;
  for (;;) {
    std::vector<std::size_t> combo(b);
    for (std::size_t i = 0; i < b; ++i) combo[i] = rejected[pick[i]];
    out.push_back(std::move(combo));
    // advance
    std::size_t i = b;
    while (i > 0) {
      --i;
      if (pick[i] + (b - i) < rejected.size()) {
        ++pick[i];
        for (std::size_t j = i + 1; j < b; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
    if (b == 0) return out;  // single empty subset
  }
}

std::vector<std::vector<std::size_t>> draw_combos(std::span<const std::size_t> rejected,
                                                  std::size_t b, std::size_t m_draws,
                                                  std::uint64_t seed, std::size_t step) {
  // a unique candidate makes every draw identical
  if (combination_count(rejected.size(), b, 1) <= 1) {
    auto all = enumerate_combos(rejected, b);
    return all;
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(m_draws);
  for (std::size_t j = 0; j < m_draws; ++j) {
    auto rng = make_rng(seed, 0xC0B1u, step, j);
    std::vector<std::size_t> pool(rejected.begin(), rejected.end());
    // partial Fisher-Yates: the last b slots form a uniform b-subset
    for (std::size_t i = pool.size(); i > pool.size() - b; --i) {
      const std::size_t k = static_cast<std::size_t>(bounded(rng, i));
      std::swap(pool[i - 1], pool[k]);
    }
    std::vector<std::size_t> combo(pool.end() - static_cast<std::ptrdiff_t>(b), pool.end());
    std::sort(combo.begin(), combo.end());
    out.push_back(std::move(combo));
  }
  return out;
}

SequentialResult run_sequential(const StatMatrix& stats, const AnalysisConfig& cfg,
                                SequentialMode mode, const ComboSource& source) {
  SequentialResult res;
  res.mode = mode;
  res.first_step = single_step(stats, cfg);

  const std::size_t d = stats.rows();
  const auto obs = stats.observed();
  const auto obs_sorted = sorted_copy(obs);
  std::vector<std::vector<double>> rows_sorted(d);
  for (std::size_t g = 0; g < d; ++g) rows_sorted[g] = sorted_copy(stats.row(g));

  double q_prev = res.first_step.q;
  RejectionSet rejected = res.first_step.rejections;

  for (std::size_t i = 1;; ++i) {
    if (rejected.size() == stats.cols()) break;  // everything rejected: nothing to refine
    const std::size_t r_count = rejected.size();
    const std::size_t b = r_count - detail::floor_scaled(cfg.gamma, r_count);
    const auto combos = source(i, rejected.indices, b);
    if (combos.empty()) throw std::invalid_argument("no candidate subsets produced");

    std::vector<double> candidate_q(combos.size());
    parallel_for(combos.size(), [&](std::size_t c) {
      const auto& excluded = combos[c];
      std::vector<double> excluded_values(excluded.size());
      std::vector<double> s(d);
      for (std::size_t g = 0; g < d; ++g) {
        const auto row = stats.row(g);
        for (std::size_t k = 0; k < excluded.size(); ++k)
          excluded_values[k] = row[excluded[k] - 1];
        std::sort(excluded_values.begin(), excluded_values.end());
        s[g] = detail::descending_critical(obs_sorted, rows_sorted[g], excluded_values, cfg.gamma);
      }
      candidate_q[c] = upper_quantile(s, cfg.alpha);
    });

    // The step map need not lower the threshold on arbitrary matrices, so the
    // running threshold clamps to the smallest value seen and the loop stops
    // at the first step that fails to strictly decrease it.
    const double q_i = *std::max_element(candidate_q.begin(), candidate_q.end());
    const bool stalled = !(q_i < q_prev);
    q_prev = std::min(q_prev, q_i);
    res.steps.push_back({i, b, q_prev, combos.size()});
    rejected = reject_above(obs, q_prev);
    if (stalled) break;
    if (cfg.max_steps > 0 && i >= cfg.max_steps) break;
  }

  res.q_lim = q_prev;
  res.rejections = rejected;
  res.rejections.threshold = res.q_lim;
  return res;
}

}  // namespace

std::size_t combination_count(std::size_t r, std::size_t b, std::size_t cap) {
  if (b > r) return 0;
  b = std::min(b, r - b);
  // The partial products are the binomials C(r-b+i, i), monotone in i, so the
  // cap check can exit early; anything at or below the cap is exact in double.
  double result = 1.0;
  for (std::size_t i = 1; i <= b; ++i) {
    result *= static_cast<double>(r - b + i) / static_cast<double>(i);
    if (result > static_cast<double>(cap) + 0.5) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(result));
}

double s_g_subset_grid(std::span<const double> stats_obs, std::span<const double> stats_g,
                       std::span<const std::size_t> subset, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  if (stats_obs.size() != stats_g.size() || stats_obs.empty())
    throw std::invalid_argument("statistic vectors must be nonempty and equal-length");
  std::vector<bool> keep(stats_g.size(), false);
  for (std::size_t i : subset) {
    if (i < 1 || i > stats_g.size()) throw std::invalid_argument("subset index out of range");
    keep[i - 1] = true;
  }
  std::vector<double> excluded_values;
  for (std::size_t j = 0; j < stats_g.size(); ++j)
    if (!keep[j]) excluded_values.push_back(stats_g[j]);
  std::sort(excluded_values.begin(), excluded_values.end());
  const auto obs = sorted_copy(stats_obs);
  const auto row = sorted_copy(stats_g);
  return detail::descending_critical(obs, row, excluded_values, gamma);
}

SequentialResult sequential_exact(const StatMatrix& stats, const AnalysisConfig& cfg) {
  cfg.validate();
  const ComboSource exhaustive = [&cfg](std::size_t, std::span<const std::size_t> rejected,
                                        std::size_t b) {
    if (combination_count(rejected.size(), b, cfg.exact_combo_limit) > cfg.exact_combo_limit)
      throw std::invalid_argument("exact enumeration infeasible");
    return enumerate_combos(rejected, b);
  };
  return run_sequential(stats, cfg, SequentialMode::exact, exhaustive);
}

SequentialResult sequential_approx(const StatMatrix& stats, const AnalysisConfig& cfg) {
  cfg.validate();
  const ComboSource random = [&cfg](std::size_t step, std::span<const std::size_t> rejected,
                                    std::size_t b) {
    return draw_combos(rejected, b, cfg.combos_per_step, cfg.seed, step);
  };
  return run_sequential(stats, cfg, SequentialMode::approximate, random);
}

SequentialResult sequential_approx(const StatMatrix& stats, const AnalysisConfig& cfg,
                                   const ComboSource& source) {
  cfg.validate();
  return run_sequential(stats, cfg, SequentialMode::approximate, source);
}

}  // namespace fdx
