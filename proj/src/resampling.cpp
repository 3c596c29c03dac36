#include "fdx/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fdx/parallel.hpp"
#include "fdx/rng.hpp"

namespace fdx {

void Dataset::validate() const {
  if (n == 0) throw std::invalid_argument("dataset needs at least one observation");
  if (m < 2) throw std::invalid_argument("dataset needs at least two variables");
  if (columns.size() != n * m) throw std::invalid_argument("dataset storage size mismatch");
  for (double v : columns)
    if (!std::isfinite(v)) throw std::invalid_argument("dataset entries must be finite");
  switch (design) {
    case DesignKind::two_group: {
      if (labels.size() != n) throw std::invalid_argument("labels must have one entry per observation");
      std::size_t ones = 0;
      for (std::uint8_t l : labels) {
        if (l > 1) throw std::invalid_argument("labels must be 0 or 1");
        ones += l;
      }
      if (ones == 0 || ones == n) throw std::invalid_argument("labels must contain both groups");
      break;
    }
    case DesignKind::one_sample:
      break;
    case DesignKind::response:
      if (response.size() != n)
        throw std::invalid_argument("response must have one entry per observation");
      for (double v : response)
        if (!std::isfinite(v)) throw std::invalid_argument("response entries must be finite");
      break;
  }
}

Dataset make_dataset(DesignKind design, std::span<const double> row_major, std::size_t n,
                     std::size_t m, std::vector<std::uint8_t> labels,
                     std::vector<double> response) {
  if (row_major.size() != n * m) throw std::invalid_argument("dataset storage size mismatch");
  Dataset ds;
  ds.n = n;
  ds.m = m;
  ds.design = design;
  ds.labels = std::move(labels);
  ds.response = std::move(response);
  ds.columns.resize(n * m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < m; ++j) ds.columns[j * n + r] = row_major[r * m + j];
  ds.validate();
  return ds;
}

namespace {

std::vector<std::uint32_t> identity_perm(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

// log |group|, to guard without-replacement draws on small groups
double log_group_size(ResampleEngine engine, std::size_t n) {
  if (engine == ResampleEngine::sign_flip) return static_cast<double>(n) * std::log(2.0);
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

TransformSet draw_transforms(const ResamplePlan& plan, std::size_t n) {
  if (n == 0) throw std::invalid_argument("dataset needs at least one observation");
  if (plan.count < 1) throw std::invalid_argument("resample count must be positive");
  if (!plan.with_replacement &&
      std::log(static_cast<double>(plan.count) + 1.0) > log_group_size(plan.engine, n) + 1e-12)
    throw std::invalid_argument("requested distinct transformations exceed the group size");

  TransformSet out;
  out.engine = plan.engine;
  out.n = n;

  const bool flips = plan.engine == ResampleEngine::sign_flip;
  std::set<std::vector<std::int8_t>> seen_signs;
  std::set<std::vector<std::uint32_t>> seen_perms;
  if (flips) {
    out.signs.push_back(std::vector<std::int8_t>(n, 1));
    seen_signs.insert(out.signs.front());
  } else {
    out.perms.push_back(identity_perm(n));
    seen_perms.insert(out.perms.front());
  }

  for (std::size_t b = 1; b <= plan.count; ++b) {
    auto rng = make_rng(plan.seed, static_cast<std::uint64_t>(plan.engine), b);
    for (;;) {
      if (flips) {
        std::vector<std::int8_t> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = (rng() & 1u) ? std::int8_t{1} : std::int8_t{-1};
        if (!plan.with_replacement && !seen_signs.insert(s).second) continue;
        out.signs.push_back(std::move(s));
      } else {
        auto p = identity_perm(n);
        shuffle_values(std::span<std::uint32_t>(p), rng);
        if (!plan.with_replacement && !seen_perms.insert(p).second) continue;
        out.perms.push_back(std::move(p));
      }
      break;
    }
  }
  return out;
}

namespace {

void check_compatibility(const Dataset& ds, const TransformSet& transforms,
                         const StatisticPlugin& statistic) {
  if (transforms.n != ds.n) throw std::invalid_argument("transformations sized for a different dataset");
  if (transforms.size() == 0) throw std::invalid_argument("transformation set is empty");
  switch (ds.design) {
    case DesignKind::two_group:
      if (transforms.engine != ResampleEngine::label_permutation ||
          statistic.kind != StatKind::abs_two_sample_t)
        throw std::invalid_argument("two-group data pairs with label permutations and |t|");
      break;
    case DesignKind::one_sample:
      if (transforms.engine != ResampleEngine::sign_flip || statistic.kind != StatKind::abs_mean)
        throw std::invalid_argument("one-sample data pairs with sign flips and |mean|");
      break;
    case DesignKind::response:
      if (transforms.engine != ResampleEngine::response_permutation ||
          statistic.kind != StatKind::abs_pearson)
        throw std::invalid_argument("response data pairs with response permutations and |r|");
      break;
  }
  if (transforms.engine == ResampleEngine::sign_flip) {
    for (std::int8_t s : transforms.signs.front())
      if (s != 1) throw std::invalid_argument("transformation 0 must be the identity");
  } else {
    const auto& p = transforms.perms.front();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != i) throw std::invalid_argument("transformation 0 must be the identity");
  }
}

}  // namespace

StatMatrix build_stat_matrix(const Dataset& ds, const TransformSet& transforms,
                             const StatisticPlugin& statistic) {
  ds.validate();
  check_compatibility(ds, transforms, statistic);
  const std::size_t d = transforms.size();
  StatMatrix out(d, ds.m);

  parallel_for(d, [&](std::size_t g) {
    auto row = out.row(g);
    switch (ds.design) {
      case DesignKind::two_group: {
        const auto& perm = transforms.perms[g];
        std::vector<std::uint8_t> labels_g(ds.n);
        for (std::size_t i = 0; i < ds.n; ++i) labels_g[i] = ds.labels[perm[i]];
        for (std::size_t j = 0; j < ds.m; ++j)
          row[j] = abs_two_sample_t(ds.column(j), labels_g, statistic.equal_variance);
        break;
      }
      case DesignKind::one_sample: {
        const auto& signs = transforms.signs[g];
        std::vector<double> flipped(ds.n);
        for (std::size_t j = 0; j < ds.m; ++j) {
          const auto col = ds.column(j);
          for (std::size_t i = 0; i < ds.n; ++i) flipped[i] = col[i] * signs[i];
          row[j] = abs_mean(flipped);
        }
        break;
      }
      case DesignKind::response: {
        const auto& perm = transforms.perms[g];
        std::vector<double> y_g(ds.n);
        for (std::size_t i = 0; i < ds.n; ++i) y_g[i] = ds.response[perm[i]];
        for (std::size_t j = 0; j < ds.m; ++j) row[j] = abs_pearson(ds.column(j), y_g);
        break;
      }
    }
  });

  out.validate();
  return out;
}

}  // namespace fdx
