#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fdx/core.hpp"
#include "fdx/stats.hpp"

namespace fdx {

enum class DesignKind { two_group, one_sample, response };

// Raw data: n observations x m variables, stored column-major so statistics
// stream each hypothesis column.
struct Dataset {
  std::size_t n = 0, m = 0;
  DesignKind design = DesignKind::two_group;
  std::vector<double> columns;       // n*m, column-major
  std::vector<std::uint8_t> labels;  // two_group: 0/1 per observation
  std::vector<double> response;      // response design: length n

  std::span<const double> column(std::size_t j) const { return {columns.data() + j * n, n}; }
  void validate() const;  // throws std::invalid_argument
};

// Builds a Dataset from row-major values (as read from CSV) and validates it.
Dataset make_dataset(DesignKind design, std::span<const double> row_major, std::size_t n,
                     std::size_t m, std::vector<std::uint8_t> labels = {},
                     std::vector<double> response = {});

enum class ResampleEngine { label_permutation, sign_flip, response_permutation };

struct ResamplePlan {
  ResampleEngine engine = ResampleEngine::label_permutation;
  std::size_t count = 50;  // number of random (non-identity) draws
  bool with_replacement = true;
  std::uint64_t seed = 0;
};

// Identity transformation plus `count` random group elements, homogeneous per
// engine. Element 0 is always the identity.
struct TransformSet {
  ResampleEngine engine = ResampleEngine::label_permutation;
  std::size_t n = 0;
  std::vector<std::vector<std::uint32_t>> perms;  // permutation engines
  std::vector<std::vector<std::int8_t>> signs;    // sign_flip engine

  std::size_t size() const noexcept {
    return engine == ResampleEngine::sign_flip ? signs.size() : perms.size();
  }
};

// Draws are i.i.d. uniform over the group, derived from (seed, draw index);
// with_replacement=false additionally rejects duplicates (and the identity).
TransformSet draw_transforms(const ResamplePlan& plan, std::size_t n);

// Evaluates the statistic on every transformed dataset column: row g, column j
// is the statistic of column j under transformation g. Row 0 reproduces the
// observed statistics bit for bit.
StatMatrix build_stat_matrix(const Dataset& ds, const TransformSet& transforms,
                             const StatisticPlugin& statistic);

}  // namespace fdx
