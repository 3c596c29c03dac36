#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdx/core.hpp"
#include "fdx/resampling.hpp"

namespace fdx {

// One factorial cell of the two-group study: equicorrelated normal data, a
// location shift d_signal on the false-hypothesis columns of group one, |t|
// statistics over random label permutations.
struct SimDesign {
  std::size_t n_per_group = 10;
  std::size_t m = 50;
  double rho = 0.0;     // homogeneous correlation between variables within an observation
  double pi0 = 0.8;     // fraction of true hypotheses
  double d_signal = 1.0;
  std::size_t replicates = 100;
  std::size_t permutations = 50;  // random label permutations per replicate (identity extra)
  double alpha = 0.1;
  double gamma = 0.1;
  std::uint64_t seed = 0;
  std::size_t combos_per_step = 25;

  void validate() const;
  std::size_t false_count() const;              // round((1-pi0)*m)
  std::vector<std::size_t> truth() const;       // true hypotheses, sorted 1-based
};

enum class Method { fdx_single, fdx_seq_exact, fdx_seq_approx, maxt_single, maxt_seq };

std::string to_string(Method method);
std::optional<Method> method_from_string(std::string_view name);

struct ReplicateRecord {
  double q = kInf;
  std::size_t rejections = 0;       // R
  std::size_t false_positives = 0;  // V
  double fdp = 0.0;
  bool simultaneous_violation = false;  // exists grid t >= q with FDP(t) > gamma
};

struct MethodSummary {
  Method method = Method::fdx_single;
  double power = 0.0;  // mean fraction of false hypotheses rejected; NaN when none exist
  double fdx_rate = 0.0;
  double simul_fdx_rate = 0.0;
  double se_power = 0.0;
  double se_fdx = 0.0;
};

struct SimOutcome {
  SimDesign design;
  std::vector<Method> methods;
  std::vector<std::vector<ReplicateRecord>> records;  // [method][replicate]
  std::vector<MethodSummary> summaries;
};

// Replicate data: 2n x m two-group dataset plus the set of true hypotheses.
// Deterministic given (design.seed, replicate_index).
std::pair<Dataset, std::vector<std::size_t>> gen_two_group(const SimDesign& design,
                                                           std::size_t replicate_index);

// Runs every method on shared per-replicate data and permutations, so methods
// and gamma sweeps compare on paired replicates.
SimOutcome run_study(const SimDesign& design, std::span<const Method> methods);

// Plot-ready CSV, one row per (design cell, method); byte-stable per seed.
void emit_plot_data(std::span<const SimOutcome> outcomes, const std::filesystem::path& path);

// True if some threshold t >= q on the observed grid has FDP(t) > gamma.
bool simultaneous_violation(std::span<const double> observed,
                            std::span<const std::size_t> truth_sorted, double q, double gamma);

}  // namespace fdx
