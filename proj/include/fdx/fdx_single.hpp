#pragma once

#include <span>
#include <string>
#include <vector>

#include "fdx/core.hpp"

namespace fdx {

struct SingleStepResult {
  double q = kInf;               // rejection threshold, the (1-alpha)-quantile of s_values
  std::vector<double> s_values;  // per-transformation critical values, index 0 = identity
  std::vector<std::uint32_t> grid_sizes;  // distinct grid points examined per transformation
  RejectionSet rejections;
  bool pvalue_scale = false;  // threshold/s_values on the p-value scale (reject below)
  std::vector<std::string> warnings;
};

// Per-transformation critical value on the discontinuity grid: the largest
// threshold at which the transformed exceedance count, relative to the
// observed rejection count, still exceeds gamma -- resolved to the next grid
// element. +inf only in the (unreachable) degenerate case where the maximal
// grid point itself certifies.
double s_g_grid(std::span<const double> stats_obs, std::span<const double> stats_g, double gamma);

// Single-step procedure: s_g per transformation, threshold q, rejections
// {i : T_i(X) > q}.
SingleStepResult single_step(const StatMatrix& stats, const AnalysisConfig& cfg);

// p-value front end: entries in (0,1], evaluated through entrywise negation.
// The returned threshold and s_values are mapped back to the p-value scale and
// rejections hold {i : P_i(X) < q}.
SingleStepResult single_step_pvalues(const StatMatrix& pvalues, const AnalysisConfig& cfg);

namespace detail {

// Shared grid walk: descends the union grid of sorted_obs and sorted_row,
// counting entries above each grid value. Values listed in sorted_excluded
// (a sub-multiset of sorted_row) are removed from the numerator, which turns
// the same walk into the subset-restricted critical value.
double descending_critical(std::span<const double> sorted_obs, std::span<const double> sorted_row,
                           std::span<const double> sorted_excluded, double gamma,
                           std::uint32_t* grid_size = nullptr);

}  // namespace detail
}  // namespace fdx
