#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdx/csv.hpp"
#include "fdx/fdx_seq.hpp"
#include "fdx/fdx_single.hpp"
#include "fdx/maxt.hpp"
#include "fdx/report.hpp"
#include "fdx/resampling.hpp"
#include "fdx/selftest.hpp"
#include "fdx/simlab.hpp"

namespace {

using nlohmann::json;

struct AnalyzeOptions {
  std::string input;
  std::string input_kind;
  std::string method = "fdx-single";
  double alpha = 0.05;
  double gamma = 0.1;
  std::size_t permutations = 50;
  std::size_t combos = 25;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool entropy = false;
  bool welch = false;
  bool without_replacement = false;
  std::size_t max_steps = 0;
  std::size_t exact_limit = 100000;
  std::string output;
  std::string labels;
  std::string response;
};

struct SimulateOptions {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool entropy = false;
};

std::uint64_t entropy_seed() {
  std::random_device rd;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::cerr << "entropy seed: " << seed << "\n";
  return seed;
}

fdx::StatMatrix matrix_from_csv(const std::string& path) {
  const auto csv = fdx::read_matrix_csv(path);
  std::vector<std::vector<double>> rows(csv.rows, std::vector<double>(csv.cols));
  for (std::size_t r = 0; r < csv.rows; ++r)
    for (std::size_t c = 0; c < csv.cols; ++c) rows[r][c] = csv.values[r * csv.cols + c];
  return fdx::StatMatrix::from_rows(rows);
}

fdx::StatMatrix negated_matrix(const fdx::StatMatrix& pvalues) {
  std::vector<std::vector<double>> rows(pvalues.rows());
  for (std::size_t g = 0; g < pvalues.rows(); ++g) {
    const auto row = pvalues.row(g);
    rows[g] = fdx::negate_pvalues(row);
  }
  return fdx::StatMatrix::from_rows(rows);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void deliver(const std::string& report, const std::string& output, double q,
             std::size_t rejections) {
  std::cout << "q=" << fdx::format_double(q) << " rejections=" << rejections << "\n";
  if (output.empty()) {
    std::cout << report;
  } else {
    fdx::write_text_file(output, report);
  }
}

int run_analyze(const AnalyzeOptions& opt) {
  fdx::AnalysisConfig cfg;
  cfg.alpha = opt.alpha;
  cfg.gamma = opt.gamma;
  cfg.combos_per_step = opt.combos;
  cfg.seed = opt.seed;
  cfg.max_steps = opt.max_steps;
  cfg.exact_combo_limit = opt.exact_limit;
  cfg.validate();

  const bool data_input = opt.input_kind.rfind("data_", 0) == 0;
  const bool pvalue_input = opt.input_kind == "pvalue_matrix";
  const bool needs_rng = data_input || opt.method == "fdx-seq";
  if (needs_rng && !opt.seed_set && !opt.entropy)
    throw std::invalid_argument("this command consumes randomness; pass --seed or --entropy");
  if (opt.entropy && !opt.seed_set) cfg.seed = entropy_seed();

  fdx::StatMatrix stats(1, 2);
  if (data_input) {
    const auto csv = fdx::read_matrix_csv(opt.input);
    fdx::Dataset ds;
    fdx::ResamplePlan plan;
    plan.count = opt.permutations;
    plan.with_replacement = !opt.without_replacement;
    plan.seed = cfg.seed;
    fdx::StatisticPlugin plugin;
    if (opt.input_kind == "data_two_group") {
      if (opt.labels.empty()) throw std::invalid_argument("data_two_group requires --labels");
      ds = fdx::make_dataset(fdx::DesignKind::two_group, csv.values, csv.rows, csv.cols,
                             fdx::parse_labels(fdx::read_value_tokens(opt.labels)));
      plan.engine = fdx::ResampleEngine::label_permutation;
      plugin.kind = fdx::StatKind::abs_two_sample_t;
      plugin.equal_variance = !opt.welch;
    } else if (opt.input_kind == "data_one_sample") {
      ds = fdx::make_dataset(fdx::DesignKind::one_sample, csv.values, csv.rows, csv.cols);
      plan.engine = fdx::ResampleEngine::sign_flip;
      plugin.kind = fdx::StatKind::abs_mean;
    } else {
      if (opt.response.empty()) throw std::invalid_argument("data_response requires --response");
      ds = fdx::make_dataset(fdx::DesignKind::response, csv.values, csv.rows, csv.cols, {},
                             fdx::parse_doubles(fdx::read_value_tokens(opt.response)));
      plan.engine = fdx::ResampleEngine::response_permutation;
      plugin.kind = fdx::StatKind::abs_pearson;
    }
    stats = fdx::build_stat_matrix(ds, fdx::draw_transforms(plan, ds.n), plugin);
  } else {
    stats = matrix_from_csv(opt.input);
  }

  const std::size_t d = stats.rows();
  const std::size_t m = stats.cols();

  // p-value matrices run through entrywise negation; thresholds are mirrored
  // back to the p-value scale in the report.
  if (opt.method == "fdx-single") {
    fdx::SingleStepResult res =
        pvalue_input ? fdx::single_step_pvalues(stats, cfg) : fdx::single_step(stats, cfg);
    print_warnings(res.warnings);
    const auto work = pvalue_input ? negated_matrix(stats) : std::move(stats);
    auto table = fdx::zoom_table(work.observed(), pvalue_input ? -res.q : res.q, cfg.gamma, cfg.alpha);
    if (pvalue_input)
      for (auto& row : table.rows) row.stat = -row.stat;
    const auto report = fdx::render_report(opt.method, cfg, d, m, res, table);
    deliver(report, opt.output, res.q, res.rejections.size());
    return 0;
  }

  const fdx::StatMatrix work = pvalue_input ? negated_matrix(stats) : std::move(stats);

  if (opt.method == "fdx-seq" || opt.method == "fdx-seq-exact") {
    fdx::SequentialResult res = opt.method == "fdx-seq-exact" ? fdx::sequential_exact(work, cfg)
                                                              : fdx::sequential_approx(work, cfg);
    print_warnings(res.first_step.warnings);
    auto table = fdx::zoom_table(work.observed(), res.q_lim, cfg.gamma, cfg.alpha);
    double q_out = res.q_lim;
    if (pvalue_input) {
      res.pvalue_scale = true;
      res.q_lim = -res.q_lim;
      res.rejections.threshold = res.q_lim;
      q_out = res.q_lim;
      for (auto& row : table.rows) row.stat = -row.stat;
    }
    const auto report = fdx::render_report(opt.method, cfg, d, m, res, table);
    deliver(report, opt.output, q_out, res.rejections.size());
    return 0;
  }

  // maxt / maxt-seq: FWER-style zoom (gamma = 0)
  const bool sequential = opt.method == "maxt-seq";
  const auto res = fdx::maxt_sequential(work, cfg.alpha);
  print_warnings(res.warnings);
  const double q = sequential ? res.Q_lim : res.Q0;
  const auto& rej = sequential ? res.rejections_seq : res.rejections_single;
  auto table = fdx::zoom_table(work.observed(), q, 0.0, cfg.alpha);
  if (pvalue_input)
    for (auto& row : table.rows) row.stat = -row.stat;
  const auto report = fdx::render_report(opt.method, cfg, d, m, res, sequential, table, pvalue_input);
  deliver(report, opt.output, pvalue_input ? -q : q, rej.size());
  return 0;
}

void apply_design_field(fdx::SimDesign& design, const std::string& key, const json& value) {
  if (key == "m") design.m = value.get<std::size_t>();
  else if (key == "n_per_group") design.n_per_group = value.get<std::size_t>();
  else if (key == "rho") design.rho = value.get<double>();
  else if (key == "pi0") design.pi0 = value.get<double>();
  else if (key == "d_signal") design.d_signal = value.get<double>();
  else if (key == "replicates") design.replicates = value.get<std::size_t>();
  else if (key == "permutations") design.permutations = value.get<std::size_t>();
  else if (key == "alpha") design.alpha = value.get<double>();
  else if (key == "gamma") design.gamma = value.get<double>();
  else throw std::invalid_argument("unknown design field '" + key + "'");
}

int run_simulate(const SimulateOptions& opt) {
  std::ifstream file(opt.input);
  if (!file) throw fdx::IoError("cannot open " + opt.input);
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("design file: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("design file must hold a JSON object");

  fdx::SimDesign base;
  std::vector<fdx::Method> methods;
  bool seed_in_file = false;

  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      base.seed = value.get<std::uint64_t>();
      seed_in_file = true;
    } else if (key == "combos_per_step") {
      base.combos_per_step = value.get<std::size_t>();
    } else if (key == "methods") {
      for (const auto& name : value) {
        const auto method = fdx::method_from_string(name.get<std::string>());
        if (!method)
          throw std::invalid_argument("unknown method '" + name.get<std::string>() + "'");
        methods.push_back(*method);
      }
    } else if (key == "defaults") {
      for (const auto& [k, v] : value.items()) apply_design_field(base, k, v);
    } else if (key != "cells") {
      throw std::invalid_argument("unknown design field '" + key + "'");
    }
  }
  if (methods.empty()) methods.push_back(fdx::Method::fdx_single);

  if (opt.seed_set) {
    base.seed = opt.seed;
  } else if (!seed_in_file) {
    if (!opt.entropy)
      throw std::invalid_argument("design file has no seed; pass --seed or --entropy");
    base.seed = entropy_seed();
  }

  std::vector<fdx::SimDesign> cells;
  if (doc.contains("cells")) {
    for (const auto& cell : doc.at("cells")) {
      fdx::SimDesign design = base;
      for (const auto& [k, v] : cell.items()) apply_design_field(design, k, v);
      cells.push_back(design);
    }
  }
  if (cells.empty()) cells.push_back(base);

  std::vector<fdx::SimOutcome> outcomes;
  outcomes.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    outcomes.push_back(fdx::run_study(cells[i], methods));
    std::cout << "cell " << i + 1 << "/" << cells.size() << " done (" << cells[i].replicates
              << " replicates)\n";
  }
  fdx::emit_plot_data(outcomes, opt.output);
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resampling-based multiple testing: multi-resolution FDX control and maxT"};
  app.require_subcommand(1);

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Analyze a dataset or statistic/p-value matrix");
  analyze->add_option("--input", an.input, "CSV input file")->required();
  analyze
      ->add_option("--input-kind", an.input_kind,
                   "data_two_group | data_one_sample | data_response | stats_matrix | pvalue_matrix")
      ->required()
      ->check(CLI::IsMember({"data_two_group", "data_one_sample", "data_response", "stats_matrix",
                             "pvalue_matrix"}));
  analyze->add_option("--method", an.method, "fdx-single | fdx-seq | fdx-seq-exact | maxt | maxt-seq")
      ->check(CLI::IsMember({"fdx-single", "fdx-seq", "fdx-seq-exact", "maxt", "maxt-seq"}));
  analyze->add_option("--alpha", an.alpha, "confidence parameter in (0,1)");
  analyze->add_option("--gamma", an.gamma, "FDP tolerance in [0,1)");
  analyze->add_option("--permutations", an.permutations, "random transformations for data inputs");
  analyze->add_option("--combos", an.combos, "subset draws per step (fdx-seq)");
  auto* seed_opt = analyze->add_option("--seed", an.seed, "RNG seed (required when randomness is used)");
  analyze->add_flag("--entropy", an.entropy, "draw a seed from the OS and report it");
  analyze->add_flag("--welch", an.welch, "Welch t instead of pooled variance");
  analyze->add_flag("--without-replacement", an.without_replacement,
                    "draw distinct transformations");
  analyze->add_option("--max-steps", an.max_steps, "cap sequential refinement steps (0 = none)");
  analyze->add_option("--exact-limit", an.exact_limit, "subset cap per step for fdx-seq-exact");
  analyze->add_option("--output", an.output, "report file (stdout when omitted)");
  analyze->add_option("--labels", an.labels, "group labels: file or inline comma list");
  analyze->add_option("--response", an.response, "response vector: file or inline comma list");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation study from a design file");
  simulate->add_option("--input", sim.input, "JSON design file")->required();
  simulate->add_option("--output", sim.output, "plot-data CSV file")->required();
  auto* sim_seed_opt = simulate->add_option("--seed", sim.seed, "override the design seed");
  simulate->add_flag("--entropy", sim.entropy, "draw a seed from the OS and report it");

  bool corrupt_quantile = false;
  auto* selftest = app.add_subcommand("selftest", "Run the embedded fixture suite");
  selftest->add_flag("--corrupt-quantile", corrupt_quantile)->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  an.seed_set = seed_opt->count() > 0;
  sim.seed_set = sim_seed_opt->count() > 0;

  try {
    if (analyze->parsed()) return run_analyze(an);
    if (simulate->parsed()) return run_simulate(sim);
    if (selftest->parsed()) {
      if (corrupt_quantile) fdx::set_quantile_bias_hook(1);
      return fdx::run_selftest(std::cout) > 0 ? 1 : 0;
    }
  } catch (const fdx::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fdx::CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
