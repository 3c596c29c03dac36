#include "fdx/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace fdx {

namespace {
std::atomic<int> g_quantile_bias{0};
}

void set_quantile_bias_hook(int bias) noexcept { g_quantile_bias.store(bias); }
int quantile_bias_hook() noexcept { return g_quantile_bias.load(); }

void AnalysisConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  if (combos_per_step < 1) throw std::invalid_argument("combos_per_step must be positive");
  if (exact_combo_limit < 1) throw std::invalid_argument("exact_combo_limit must be positive");
}

StatMatrix::StatMatrix(std::size_t transform_count, std::size_t hypothesis_count)
    : d_(transform_count), m_(hypothesis_count), values_(transform_count * hypothesis_count, 0.0) {
  if (d_ < 1) throw std::invalid_argument("statistic matrix needs at least one transformation row");
  if (m_ < 2) throw std::invalid_argument("statistic matrix needs at least two hypotheses");
}

StatMatrix StatMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("statistic matrix needs at least one transformation row");
  StatMatrix out(rows.size(), rows.front().size());
  for (std::size_t g = 0; g < rows.size(); ++g) {
    if (rows[g].size() != out.m_)
      throw std::invalid_argument("statistic matrix rows must all have the same length");
    std::copy(rows[g].begin(), rows[g].end(), out.row(g).begin());
  }
  out.validate();
  return out;
}

void StatMatrix::validate() const {
  for (double v : values_) {
    if (std::isnan(v)) throw std::invalid_argument("matrix entries must not be NaN");
    if (v == -kInf) throw std::invalid_argument("matrix entries must not be -inf");
  }
}

std::size_t StatMatrix::infinite_entries() const noexcept {
  std::size_t n = 0;
  for (double v : values_) n += std::isinf(v) ? 1 : 0;
  return n;
}

std::size_t count_exceed(std::span<const double> stats_row, double t) noexcept {
  std::size_t n = 0;
  for (double v : stats_row) n += (v > t) ? 1 : 0;
  return n;
}

RejectionSet reject_above(std::span<const double> observed, double threshold) {
  RejectionSet out;
  out.threshold = threshold;
  for (std::size_t j = 0; j < observed.size(); ++j)
    if (observed[j] > threshold) out.indices.push_back(j + 1);
  return out;
}

double fdp_of(const RejectionSet& rejected, std::span<const std::size_t> truth_sorted) {
  std::size_t hits = 0;
  auto it = truth_sorted.begin();
  for (std::size_t i : rejected.indices) {
    while (it != truth_sorted.end() && *it < i) ++it;
    if (it != truth_sorted.end() && *it == i) ++hits;
  }
  const std::size_t denom = std::max<std::size_t>(rejected.size(), 1);
  return static_cast<double>(hits) / static_cast<double>(denom);
}

double upper_quantile(std::span<const double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t d = sorted.size();
  // ceil((1-alpha)*d) == d - floor(alpha*d) because d is an integer.
  const std::size_t k = d - detail::floor_scaled(alpha, d);
  long idx = static_cast<long>(k) - 1 + g_quantile_bias.load();
  idx = std::clamp<long>(idx, 0, static_cast<long>(d) - 1);
  return sorted[static_cast<std::size_t>(idx)];
}

std::size_t min_transform_count(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  return static_cast<std::size_t>(std::ceil(detail::snap_scaled(1.0 / alpha)));
}

namespace detail {

double snap_scaled(double x) noexcept {
  const double nearest = std::nearbyint(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(nearest))) return nearest;
  return x;
}

std::size_t floor_scaled(double factor, std::size_t n) noexcept {
  const double prod = snap_scaled(factor * static_cast<double>(n));
  return static_cast<std::size_t>(std::floor(std::max(prod, 0.0)));
}

bool fraction_exceeds(std::size_t numer, std::size_t denom, double gamma) noexcept {
  const std::size_t d = std::max<std::size_t>(denom, 1);
  return static_cast<double>(numer) > snap_scaled(gamma * static_cast<double>(d));
}

bool below_inv_gamma(std::size_t count, double gamma) noexcept {
  return snap_scaled(gamma * static_cast<double>(count)) < 1.0;
}

}  // namespace detail
}  // namespace fdx
