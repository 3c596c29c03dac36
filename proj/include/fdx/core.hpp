#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fdx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Analysis-wide parameters shared by every procedure.
struct AnalysisConfig {
  double alpha = 0.05;               // confidence level: P(FDP <= gamma) >= 1 - alpha
  double gamma = 0.1;                // tolerated false discovery proportion
  std::size_t combos_per_step = 25;  // subset draws per refinement step (approximate sequential)
  std::uint64_t seed = 0;
  std::size_t exact_combo_limit = 100000;  // refuse exact enumeration beyond this many subsets per step
  std::size_t max_steps = 0;               // cap on refinement steps; 0 = run to the fixed point

  void validate() const;  // throws std::invalid_argument
};

// Matrix of test statistics: one row per data transformation, one column per
// hypothesis. Row 0 always holds the observed statistics (identity transformation).
// Entries may be +inf (degenerate-statistic sentinel) but never NaN or -inf.
class StatMatrix {
 public:
  StatMatrix(std::size_t transform_count, std::size_t hypothesis_count);
  static StatMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return d_; }
  std::size_t cols() const noexcept { return m_; }
  std::span<const double> row(std::size_t g) const { return {values_.data() + g * m_, m_}; }
  std::span<double> row(std::size_t g) { return {values_.data() + g * m_, m_}; }
  std::span<const double> observed() const { return row(0); }
  std::size_t infinite_entries() const noexcept;
  void validate() const;  // throws std::invalid_argument on NaN/-inf entries or bad shape

 private:
  std::size_t d_ = 0, m_ = 0;
  std::vector<double> values_;
};

// Hypotheses are numbered 1..m. `indices` is sorted and holds exactly
// {i : observed[i-1] > threshold}; -inf means reject-all, +inf reject-none.
struct RejectionSet {
  double threshold = kInf;
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
  friend bool operator==(const RejectionSet&, const RejectionSet&) = default;
};

// #{i : stats_row[i] > t}; non-increasing and right-continuous in t.
std::size_t count_exceed(std::span<const double> stats_row, double t) noexcept;

RejectionSet reject_above(std::span<const double> observed, double threshold);

// |truth ∩ rejected| / (|rejected| v 1); truth holds sorted 1-based indices.
double fdp_of(const RejectionSet& rejected, std::span<const std::size_t> truth_sorted);

// Exact upper order-statistic quantile: the k-th smallest value with
// k = ceil((1-alpha)*d), equivalently min{t : #{v <= t}/d >= 1-alpha}.
// No interpolation; ties allowed. Throws "empty sample" on empty input.
double upper_quantile(std::span<const double> values, double alpha);

// Smallest transformation count d with d >= 1/alpha; below it no procedure can reject.
std::size_t min_transform_count(double alpha);

// Test hook used by the CLI selftest's negative control; biases the quantile
// order-statistic index. Must stay 0 in normal operation.
void set_quantile_bias_hook(int bias) noexcept;
int quantile_bias_hook() noexcept;

namespace detail {

// Snaps x to the nearest integer when within a relative 1e-9, so that decimal
// alpha/gamma parameters scale to exact integer boundaries.
double snap_scaled(double x) noexcept;

// floor(factor * n) after snapping.
std::size_t floor_scaled(double factor, std::size_t n) noexcept;

// numer / (denom v 1) > gamma, decimal-robust.
bool fraction_exceeds(std::size_t numer, std::size_t denom, double gamma) noexcept;

// count < 1/gamma for gamma in (0,1), decimal-robust.
bool below_inv_gamma(std::size_t count, double gamma) noexcept;

}  // namespace detail
}  // namespace fdx
