#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fdx/core.hpp"
#include "fdx/fdx_single.hpp"

namespace fdx {

struct SequentialStep {
  std::size_t index = 0;        // refinement step, 1-based
  std::size_t subset_size = 0;  // B_i: hypotheses excluded from the numerator
  double q = kInf;              // threshold after this step
  std::size_t combos = 0;       // candidate subsets evaluated

  friend bool operator==(const SequentialStep&, const SequentialStep&) = default;
};

enum class SequentialMode { exact, approximate };

struct SequentialResult {
  double q_lim = kInf;
  std::vector<SequentialStep> steps;
  SequentialMode mode = SequentialMode::exact;
  RejectionSet rejections;
  SingleStepResult first_step;  // the single-step run the refinement starts from
  bool pvalue_scale = false;
};

// Subset-restricted critical value: the numerator counts only hypotheses in
// `subset` (sorted 1-based indices), the denominator stays the full observed
// exceedance count, and the grid is the full union of both rows.
double s_g_subset_grid(std::span<const double> stats_obs, std::span<const double> stats_g,
                       std::span<const std::size_t> subset, double gamma);

// Produces, for refinement step `step`, the candidate exclusion sets: each is
// a sorted list of `subset_size` hypothesis indices drawn from `rejected`.
using ComboSource = std::function<std::vector<std::vector<std::size_t>>(
    std::size_t step, std::span<const std::size_t> rejected, std::size_t subset_size)>;

// Exact refinement: enumerates every candidate subset per step; throws
// "exact enumeration infeasible" when a step exceeds cfg.exact_combo_limit.
SequentialResult sequential_exact(const StatMatrix& stats, const AnalysisConfig& cfg);

// Randomized refinement: cfg.combos_per_step uniform draws (with replacement)
// per step, derived from (cfg.seed, step, draw).
SequentialResult sequential_approx(const StatMatrix& stats, const AnalysisConfig& cfg);

// Same iteration with caller-provided candidate subsets (test seam).
SequentialResult sequential_approx(const StatMatrix& stats, const AnalysisConfig& cfg,
                                   const ComboSource& source);

// Number of B-subsets of an R-element set, saturating at cap+1.
std::size_t combination_count(std::size_t r, std::size_t b, std::size_t cap);

}  // namespace fdx
