#include "fdx/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fdx/csv.hpp"
#include "fdx/fdx_seq.hpp"
#include "fdx/fdx_single.hpp"
#include "fdx/maxt.hpp"
#include "fdx/parallel.hpp"
#include "fdx/rng.hpp"

namespace fdx {

void SimDesign::validate() const {
  if (n_per_group < 1) throw std::invalid_argument("n_per_group must be positive");
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in [0,1)");
  if (!(pi0 > 0.0 && pi0 <= 1.0)) throw std::invalid_argument("pi0 must be in (0,1]");
  if (d_signal < 0.0) throw std::invalid_argument("d_signal must be nonnegative");
  if (replicates < 1) throw std::invalid_argument("replicates must be positive");
  if (permutations < 1) throw std::invalid_argument("permutations must be positive");
  AnalysisConfig cfg;
  cfg.alpha = alpha;
  cfg.gamma = gamma;
  cfg.combos_per_step = combos_per_step;
  cfg.validate();
}

std::size_t SimDesign::false_count() const {
  return static_cast<std::size_t>(std::llround((1.0 - pi0) * static_cast<double>(m)));
}

std::vector<std::size_t> SimDesign::truth() const {
  std::vector<std::size_t> t;
  for (std::size_t i = false_count() + 1; i <= m; ++i) t.push_back(i);
  return t;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::fdx_single: return "fdx_single";
    case Method::fdx_seq_exact: return "fdx_seq_exact";
    case Method::fdx_seq_approx: return "fdx_seq_approx";
    case Method::maxt_single: return "maxt_single";
    case Method::maxt_seq: return "maxt_seq";
  }
  return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) {
  for (Method m : {Method::fdx_single, Method::fdx_seq_exact, Method::fdx_seq_approx,
                   Method::maxt_single, Method::maxt_seq})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::pair<Dataset, std::vector<std::size_t>> gen_two_group(const SimDesign& design,
                                                           std::size_t replicate_index) {
  design.validate();
  const std::size_t n2 = 2 * design.n_per_group;
  const std::size_t mf = design.false_count();
  auto rng = make_rng(design.seed, 0xDA7Au, replicate_index);

  Dataset ds;
  ds.n = n2;
  ds.m = design.m;
  ds.design = DesignKind::two_group;
  ds.columns.resize(n2 * design.m);
  const double shared_load = std::sqrt(design.rho);
  const double own_load = std::sqrt(1.0 - design.rho);
  for (std::size_t r = 0; r < n2; ++r) {
    const double shared = normal_draw(rng);
    for (std::size_t j = 0; j < design.m; ++j) {
      double x = shared_load * shared + own_load * normal_draw(rng);
      if (r < design.n_per_group && j < mf) x += design.d_signal;
      ds.columns[j * n2 + r] = x;
    }
  }
  ds.labels.assign(n2, 0);
  for (std::size_t r = design.n_per_group; r < n2; ++r) ds.labels[r] = 1;
  ds.validate();
  return {std::move(ds), design.truth()};
}

bool simultaneous_violation(std::span<const double> observed,
                            std::span<const std::size_t> truth_sorted, double q, double gamma) {
  // FDP(t) is constant between observed values, so checking every observed
  // value >= q plus q itself covers all t >= q.
  std::vector<std::pair<double, bool>> marked(observed.size());
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const bool is_true = std::binary_search(truth_sorted.begin(), truth_sorted.end(), j + 1);
    marked[j] = {observed[j], is_true};
  }
  std::sort(marked.begin(), marked.end(), std::greater<>());

  std::size_t r_above = 0, v_above = 0;
  std::size_t pos = 0;
  while (pos < marked.size() && marked[pos].first >= q) {
    const double value = marked[pos].first;
    if (detail::fraction_exceeds(v_above, r_above, gamma)) return true;  // t = value
    if (value == q) return false;  // t = value coincides with the final t = q check
    while (pos < marked.size() && marked[pos].first == value) {
      ++r_above;
      v_above += marked[pos].second ? 1 : 0;
      ++pos;
    }
  }
  return detail::fraction_exceeds(v_above, r_above, gamma);  // t = q
}

namespace {

ReplicateRecord make_record(const RejectionSet& rejections, std::span<const double> observed,
                            std::span<const std::size_t> truth, double q, double gamma_eff) {
  ReplicateRecord rec;
  rec.q = q;
  rec.rejections = rejections.size();
  std::size_t v = 0;
  for (std::size_t i : rejections.indices)
    v += std::binary_search(truth.begin(), truth.end(), i) ? 1 : 0;
  rec.false_positives = v;
  rec.fdp = fdp_of(rejections, truth);
  rec.simultaneous_violation = simultaneous_violation(observed, truth, q, gamma_eff);
  return rec;
}

MethodSummary summarize(Method method, std::span<const ReplicateRecord> records,
                        std::size_t false_count, double gamma_eff) {
  MethodSummary s;
  s.method = method;
  const double n = static_cast<double>(records.size());
  double fdx_hits = 0.0, simul_hits = 0.0;
  double power_sum = 0.0, power_sq = 0.0;
  for (const auto& r : records) {
    if (detail::fraction_exceeds(r.false_positives, r.rejections, gamma_eff)) fdx_hits += 1.0;
    if (r.simultaneous_violation) simul_hits += 1.0;
    if (false_count > 0) {
      const double frac = static_cast<double>(r.rejections - r.false_positives) /
                          static_cast<double>(false_count);
      power_sum += frac;
      power_sq += frac * frac;
    }
  }
  s.fdx_rate = fdx_hits / n;
  s.simul_fdx_rate = simul_hits / n;
  s.se_fdx = std::sqrt(s.fdx_rate * (1.0 - s.fdx_rate) / n);
  if (false_count > 0) {
    s.power = power_sum / n;
    const double var = records.size() > 1 ? std::max(0.0, (power_sq - n * s.power * s.power) / (n - 1.0)) : 0.0;
    s.se_power = std::sqrt(var / n);
  } else {
    s.power = std::numeric_limits<double>::quiet_NaN();
    s.se_power = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace

SimOutcome run_study(const SimDesign& design, std::span<const Method> methods) {
  design.validate();
  if (methods.empty()) throw std::invalid_argument("at least one method required");

  SimOutcome out;
  out.design = design;
  out.methods.assign(methods.begin(), methods.end());
  out.records.assign(methods.size(), std::vector<ReplicateRecord>(design.replicates));

  parallel_for(design.replicates, [&](std::size_t rep) {
    auto [ds, truth] = gen_two_group(design, rep);

    ResamplePlan plan;
    plan.engine = ResampleEngine::label_permutation;
    plan.count = design.permutations;
    plan.seed = mix_seed(design.seed, 0x7E57u, rep);
    const auto transforms = draw_transforms(plan, ds.n);
    const StatMatrix stats = build_stat_matrix(ds, transforms, StatisticPlugin{});

    AnalysisConfig cfg;
    cfg.alpha = design.alpha;
    cfg.gamma = design.gamma;
    cfg.combos_per_step = design.combos_per_step;
    cfg.seed = mix_seed(design.seed, 0xC0B0u, rep);

    const auto observed = stats.observed();
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      ReplicateRecord rec;
      switch (methods[mi]) {
        case Method::fdx_single: {
          const auto res = single_step(stats, cfg);
          rec = make_record(res.rejections, observed, truth, res.q, design.gamma);
          break;
        }
        case Method::fdx_seq_exact: {
          const auto res = sequential_exact(stats, cfg);
          rec = make_record(res.rejections, observed, truth, res.q_lim, design.gamma);
          break;
        }
        case Method::fdx_seq_approx: {
          const auto res = sequential_approx(stats, cfg);
          rec = make_record(res.rejections, observed, truth, res.q_lim, design.gamma);
          break;
        }
        case Method::maxt_single: {
          const auto res = maxt_single(stats, design.alpha);
          rec = make_record(res.rejections, observed, truth, res.Q0, 0.0);
          break;
        }
        case Method::maxt_seq: {
          const auto res = maxt_sequential(stats, design.alpha);
          rec = make_record(res.rejections_seq, observed, truth, res.Q_lim, 0.0);
          break;
        }
      }
      out.records[mi][rep] = rec;
    }
  });

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const double gamma_eff =
        (methods[mi] == Method::maxt_single || methods[mi] == Method::maxt_seq) ? 0.0
                                                                                : design.gamma;
    out.summaries.push_back(
        summarize(methods[mi], out.records[mi], design.false_count(), gamma_eff));
  }
  return out;
}

void emit_plot_data(std::span<const SimOutcome> outcomes, const std::filesystem::path& path) {
  if (outcomes.empty()) throw std::invalid_argument("no simulation outcomes to write");
  std::string csv =
      "m,n_per_group,rho,pi0,d_signal,alpha,gamma,replicates,permutations,method,"
      "power,fdx_rate,simul_fdx_rate,se_power,se_fdx\n";
  for (const auto& outcome : outcomes) {
    const auto& d = outcome.design;
    for (const auto& s : outcome.summaries) {
      csv += std::to_string(d.m) + ',' + std::to_string(d.n_per_group) + ',';
      csv += format_double(d.rho) + ',' + format_double(d.pi0) + ',' + format_double(d.d_signal);
      csv += ',' + format_double(d.alpha) + ',' + format_double(d.gamma) + ',';
      csv += std::to_string(d.replicates) + ',' + std::to_string(d.permutations) + ',';
      csv += to_string(s.method) + ',';
      csv += format_double(s.power) + ',' + format_double(s.fdx_rate) + ',';
      csv += format_double(s.simul_fdx_rate) + ',' + format_double(s.se_power) + ',';
      csv += format_double(s.se_fdx) + '\n';
    }
  }
  write_text_file(path, csv);
}

}  // namespace fdx
