#include "fdx/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace fdx {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json json_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json zoom_to_json(const ZoomTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r;
    r["k"] = row.k;
    r["stat"] = json_real(row.stat);
    r["v_bound"] = row.v_bound;
    r["all_false"] = row.all_false;
    rows.push_back(std::move(r));
  }
  return rows;
}

ordered_json spread_summary(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  ordered_json j;
  if (sorted.empty()) return j;
  const std::size_t n = sorted.size();
  const double median =
      n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  j["min"] = json_real(sorted.front());
  j["median"] = json_real(median);
  j["max"] = json_real(sorted.back());
  return j;
}

ordered_json report_header(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                           std::size_t m, double q, const RejectionSet& rejections,
                           bool pvalue_scale) {
  ordered_json j;
  j["schema_version"] = 1;
  j["method"] = method;
  j["alpha"] = cfg.alpha;
  j["gamma"] = cfg.gamma;
  j["seed"] = cfg.seed;
  j["d"] = d;
  j["m"] = m;
  j["q"] = json_real(q);
  j["pvalue_scale"] = pvalue_scale;
  j["no_rejections"] = rejections.empty();
  j["rejected"] = rejections.indices;
  return j;
}

std::string finish(ordered_json j, const ZoomTable& table, std::span<const double> spread) {
  j["zoom"] = zoom_to_json(table);
  j["s_quantiles"] = spread_summary(spread);
  return j.dump(2) + "\n";
}

}  // namespace

ZoomTable zoom_table(std::span<const double> stats_obs, double q, double gamma, double alpha) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  ZoomTable table;
  table.gamma = gamma;
  table.alpha = alpha;
  table.q = q;

  std::vector<double> sorted(stats_obs.begin(), stats_obs.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::size_t cum = 0;
  std::size_t pos = 0;
  while (pos < sorted.size() && sorted[pos] > q) {
    const double value = sorted[pos];
    while (pos < sorted.size() && sorted[pos] == value) {
      ++cum;
      ++pos;
    }
    const std::size_t v = detail::floor_scaled(gamma, cum);
    table.rows.push_back({cum, value, v, v == 0});
  }
  std::reverse(table.rows.begin(), table.rows.end());
  return table;
}

std::string render_report(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                          std::size_t m, const SingleStepResult& result, const ZoomTable& table) {
  ordered_json j =
      report_header(method, cfg, d, m, result.q, result.rejections, result.pvalue_scale);
  return finish(std::move(j), table, result.s_values);
}

std::string render_report(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                          std::size_t m, const SequentialResult& result, const ZoomTable& table) {
  ordered_json j =
      report_header(method, cfg, d, m, result.q_lim, result.rejections, result.pvalue_scale);
  j["mode"] = result.mode == SequentialMode::exact ? "exact" : "approximate";
  j["q_single"] = json_real(result.pvalue_scale ? -result.first_step.q : result.first_step.q);
  ordered_json steps = ordered_json::array();
  for (const auto& s : result.steps) {
    ordered_json st;
    st["step"] = s.index;
    st["B"] = s.subset_size;
    st["q"] = json_real(result.pvalue_scale ? -s.q : s.q);
    st["combos"] = s.combos;
    steps.push_back(std::move(st));
  }
  j["steps"] = std::move(steps);
  return finish(std::move(j), table, result.first_step.s_values);
}

std::string render_report(const std::string& method, const AnalysisConfig& cfg, std::size_t d,
                          std::size_t m, const MaxTResult& result, bool sequential,
                          const ZoomTable& table, bool pvalue_scale) {
  const double q = sequential ? result.Q_lim : result.Q0;
  const RejectionSet& rej = sequential ? result.rejections_seq : result.rejections_single;
  ordered_json j = report_header(method, cfg, d, m, pvalue_scale ? -q : q, rej, pvalue_scale);
  j["Q0"] = json_real(pvalue_scale ? -result.Q0 : result.Q0);
  j["Q_lim"] = json_real(pvalue_scale ? -result.Q_lim : result.Q_lim);
  ordered_json steps = ordered_json::array();
  for (const auto& s : result.steps) {
    ordered_json st;
    st["step"] = s.index;
    st["Q"] = json_real(pvalue_scale ? -s.Q : s.Q);
    st["rejected"] = s.rejected;
    steps.push_back(std::move(st));
  }
  j["steps"] = std::move(steps);
  std::vector<double> maxima = result.maxima;
  if (pvalue_scale)
    for (double& v : maxima) v = -v;
  return finish(std::move(j), table, maxima);
}

}  // namespace fdx
