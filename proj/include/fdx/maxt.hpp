#pragma once

#include <string>
#include <vector>

#include "fdx/core.hpp"

namespace fdx {

struct MaxTStep {
  std::size_t index = 0;  // 0 = single step
  double Q = kInf;
  std::size_t rejected = 0;  // rejections after this step

  friend bool operator==(const MaxTStep&, const MaxTStep&) = default;
};

struct MaxTSingle {
  double Q0 = kInf;
  RejectionSet rejections;
  std::vector<double> maxima;  // per-transformation maximum over all hypotheses
  std::vector<std::string> warnings;
};

struct MaxTResult {
  double Q0 = kInf;
  double Q_lim = kInf;
  std::vector<MaxTStep> steps;
  RejectionSet rejections_single;
  RejectionSet rejections_seq;
  std::vector<double> maxima;
  std::vector<std::string> warnings;
};

// Single-step procedure: Q0 is the (1-alpha)-quantile of the per-transformation
// maxima; rejects {i : T_i(X) > Q0}.
MaxTSingle maxt_single(const StatMatrix& stats, double alpha);

// Step-down iteration on the complement of the current rejections; when the
// complement empties (everything rejected), Q_lim keeps the previous value.
MaxTResult maxt_sequential(const StatMatrix& stats, double alpha);

enum class Coincidence { consistent, violation };

// Whenever either method rejects fewer than 1/gamma hypotheses, both reject
// the same set; one-sided emptiness is likewise flagged.
Coincidence coincidence_check(const RejectionSet& fdx, const RejectionSet& mx, double gamma);

}  // namespace fdx
