#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fdx {

// Per-column test statistics. Absolute statistics are >= 0; +inf is the
// degenerate-variance sentinel and sorts above every finite value.
enum class StatKind { abs_two_sample_t, abs_mean, abs_pearson };

struct StatisticPlugin {
  StatKind kind = StatKind::abs_two_sample_t;
  bool equal_variance = true;  // pooled-variance t; false selects Welch
};

// |t| for a two-group comparison, labels in {0,1}. Zero pooled variance yields
// 0 when the group means agree and +inf otherwise.
double abs_two_sample_t(std::span<const double> column, std::span<const std::uint8_t> labels,
                        bool equal_variance = true);

double abs_mean(std::span<const double> column);

// |Pearson correlation|; throws "degenerate correlation" on constant input.
double abs_pearson(std::span<const double> column, std::span<const double> y);

// Entrywise negation turning p-values in (0,1] into test statistics; strictly
// order-reversing.
std::vector<double> negate_pvalues(std::span<const double> p);

}  // namespace fdx
