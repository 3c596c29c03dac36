#pragma once

#include <span>
#include <string>
#include <vector>

#include "fdx/core.hpp"
#include "fdx/fdx_seq.hpp"
#include "fdx/fdx_single.hpp"
#include "fdx/maxt.hpp"

namespace fdx {

struct ZoomRow {
  std::size_t k = 0;          // zoom depth: the k hypotheses with the largest statistics
  double stat = 0.0;          // k-th largest observed statistic
  std::size_t v_bound = 0;    // at most this many of the top k are true: floor(gamma*k)
  bool all_false = false;     // v_bound == 0

  friend bool operator==(const ZoomRow&, const ZoomRow&) = default;
};

// Simultaneous top-k statements implied by one threshold: every achievable
// rejection count k <= R(q) gets the bound floor(gamma*k). With ties, k values
// no threshold can realize are omitted.
struct ZoomTable {
  double gamma = 0.0;
  double alpha = 0.0;
  double q = kInf;
  std::vector<ZoomRow> rows;  // sorted by k descending
};

ZoomTable zoom_table(std::span<const double> stats_obs, double q, double gamma, double alpha);

// JSON report; byte-stable for identical inputs. Infinite thresholds and
// statistics are serialized as the strings "inf" / "-inf".
std::string render_report(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                          std::size_t m, const SingleStepResult& result, const ZoomTable& table);
std::string render_report(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                          std::size_t m, const SequentialResult& result, const ZoomTable& table);
std::string render_report(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                          std::size_t m, const MaxTResult& result, bool sequential,
                          const ZoomTable& table, bool pvalue_scale = false);

}  // namespace fdx
