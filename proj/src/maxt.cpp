#include "fdx/maxt.hpp"

#include <algorithm>
#include <stdexcept>

#include "fdx/parallel.hpp"

namespace fdx {

namespace {

void resolution_warning(const StatMatrix& stats, double alpha, std::vector<std::string>& warnings) {
  const std::size_t need = min_transform_count(alpha);
  if (stats.rows() < need)
    warnings.push_back("only " + std::to_string(stats.rows()) + " transformations; at least " +
                       std::to_string(need) + " are needed for any rejection at alpha=" +
                       std::to_string(alpha));
}

std::vector<double> row_maxima(const StatMatrix& stats, std::span<const std::size_t> columns) {
  std::vector<double> maxima(stats.rows(), -kInf);
  parallel_for(stats.rows(), [&](std::size_t g) {
    const auto row = stats.row(g);
    double best = -kInf;
    for (std::size_t j : columns) best = std::max(best, row[j]);
    maxima[g] = best;
  });
  return maxima;
}

std::vector<std::size_t> all_columns(std::size_t m) {
  std::vector<std::size_t> cols(m);
  for (std::size_t j = 0; j < m; ++j) cols[j] = j;
  return cols;
}

}  // namespace

MaxTSingle maxt_single(const StatMatrix& stats, double alpha) {
  stats.validate();
  MaxTSingle res;
  res.maxima = row_maxima(stats, all_columns(stats.cols()));
  res.Q0 = upper_quantile(res.maxima, alpha);
  res.rejections = reject_above(stats.observed(), res.Q0);
  resolution_warning(stats, alpha, res.warnings);
  return res;
}

MaxTResult maxt_sequential(const StatMatrix& stats, double alpha) {
  MaxTSingle single = maxt_single(stats, alpha);
  MaxTResult res;
  res.Q0 = single.Q0;
  res.maxima = std::move(single.maxima);
  res.rejections_single = single.rejections;
  res.warnings = std::move(single.warnings);
  res.steps.push_back({0, res.Q0, res.rejections_single.size()});

  const std::size_t m = stats.cols();
  double q = res.Q0;
  RejectionSet rejected = res.rejections_single;
  for (std::size_t j = 1;; ++j) {
    if (rejected.size() == m) break;  // empty complement: keep the previous threshold
    std::vector<std::size_t> complement;
    complement.reserve(m - rejected.size());
    auto it = rejected.indices.begin();
    for (std::size_t col = 0; col < m; ++col) {
      if (it != rejected.indices.end() && *it == col + 1) {
        ++it;
        continue;
      }
      complement.push_back(col);
    }
    const auto maxima = row_maxima(stats, complement);
    const double q_j = upper_quantile(maxima, alpha);
    RejectionSet next = reject_above(stats.observed(), q_j);
    res.steps.push_back({j, q_j, next.size()});
    const bool stalled = next.indices == rejected.indices;
    q = q_j;
    rejected = std::move(next);
    if (stalled) break;
  }

  res.Q_lim = q;
  res.rejections_seq = rejected;
  res.rejections_seq.threshold = q;
  return res;
}

Coincidence coincidence_check(const RejectionSet& fdx, const RejectionSet& mx, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
  const bool differ = fdx.indices != mx.indices;
  const bool small_side =
      detail::below_inv_gamma(fdx.size(), gamma) || detail::below_inv_gamma(mx.size(), gamma);
  const bool one_empty = fdx.empty() != mx.empty();
  return ((small_side && differ) || one_empty) ? Coincidence::violation : Coincidence::consistent;
}

}  // namespace fdx
