#include "fdx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdx/core.hpp"

namespace fdx {

double abs_two_sample_t(std::span<const double> column, std::span<const std::uint8_t> labels,
                        bool equal_variance) {
  if (column.size() != labels.size())
    throw std::invalid_argument("column and labels must have the same length");
  double sum[2] = {0.0, 0.0};
  std::size_t n[2] = {0, 0};
  for (std::size_t i = 0; i < column.size(); ++i) {
    const std::uint8_t lab = labels[i];
    if (lab > 1) throw std::invalid_argument("labels must be 0 or 1");
    sum[lab] += column[i];
    ++n[lab];
  }
  if (n[0] == 0 || n[1] == 0) throw std::invalid_argument("both groups must be nonempty");
  const double mean0 = sum[0] / static_cast<double>(n[0]);
  const double mean1 = sum[1] / static_cast<double>(n[1]);
  double dev2[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < column.size(); ++i) {
    const double d = column[i] - (labels[i] == 0 ? mean0 : mean1);
    dev2[labels[i]] += d * d;
  }
  double se2 = 0.0;
  if (equal_variance) {
    const std::size_t df = n[0] + n[1] - 2;
    const double pooled = df > 0 ? (dev2[0] + dev2[1]) / static_cast<double>(df) : 0.0;
    se2 = pooled * (1.0 / static_cast<double>(n[0]) + 1.0 / static_cast<double>(n[1]));
  } else {
    const double v0 = n[0] > 1 ? dev2[0] / static_cast<double>(n[0] - 1) : 0.0;
    const double v1 = n[1] > 1 ? dev2[1] / static_cast<double>(n[1] - 1) : 0.0;
    se2 = v0 / static_cast<double>(n[0]) + v1 / static_cast<double>(n[1]);
  }
  if (se2 <= 0.0) return mean0 == mean1 ? 0.0 : kInf;
  return std::fabs(mean0 - mean1) / std::sqrt(se2);
}

double abs_mean(std::span<const double> column) {
  if (column.empty()) throw std::invalid_argument("empty column");
  double sum = 0.0;
  for (double v : column) sum += v;
  return std::fabs(sum / static_cast<double>(column.size()));
}

double abs_pearson(std::span<const double> column, std::span<const double> y) {
  if (column.size() != y.size() || column.size() < 2)
    throw std::invalid_argument("correlation needs two equal-length vectors of size >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    mx += column[i];
    my += y[i];
  }
  mx /= static_cast<double>(column.size());
  my /= static_cast<double>(y.size());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    const double dx = column[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("degenerate correlation");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return std::fabs(r);
}

std::vector<double> negate_pvalues(std::span<const double> p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (double v : p) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("p-values must lie in (0,1]");
    out.push_back(-v);
  }
  return out;
}

}  // namespace fdx
