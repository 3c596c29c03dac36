#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fdx/core.hpp"
#include "fdx/fdx_single.hpp"

#ifndef FDX_CLI_PATH
#error "FDX_CLI_PATH must point at the fdx binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "fdx_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = env_prefix + " \"" + FDX_CLI_PATH + "\" " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  std::ofstream f(p);
  f << content;
  return p;
}

}  // namespace

TEST_CASE("analyze stats_matrix matches the library bit for bit") {
  const auto csv = write_file("mat.csv", "5,3\n1,2\n");
  const auto report_path = work_dir() / "report.json";
  const auto res = run_cli("analyze --input " + csv.string() +
                           " --input-kind stats_matrix --method fdx-single --alpha 0.5 "
                           "--gamma 0.4 --output " +
                           report_path.string());
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("q=2 rejections=2") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(report_path));
  fdx::AnalysisConfig cfg;
  cfg.alpha = 0.5;
  cfg.gamma = 0.4;
  const auto lib = fdx::single_step(fdx::StatMatrix::from_rows({{5, 3}, {1, 2}}), cfg);
  CHECK(report.at("q").get<double>() == lib.q);
  CHECK(report.at("rejected").get<std::vector<std::size_t>>() == lib.rejections.indices);
  CHECK(report.at("method") == "fdx-single");

  const auto mx = run_cli("analyze --input " + csv.string() +
                          " --input-kind stats_matrix --method maxt --alpha 0.5");
  REQUIRE(mx.exit_code == 0);
  CHECK(mx.out.find("q=2 rejections=2") != std::string::npos);
}

TEST_CASE("usage and validation failures exit 2") {
  const auto csv = write_file("mat2.csv", "5,3\n1,2\n");
  const auto bad_gamma = run_cli("analyze --input " + csv.string() +
                                 " --input-kind stats_matrix --gamma 1.0");
  CHECK(bad_gamma.exit_code == 2);
  CHECK(bad_gamma.err.find("gamma must be in [0,1)") != std::string::npos);

  const auto malformed = write_file("broken.csv", "5,3\n1,oops\n");
  const auto bad_csv = run_cli("analyze --input " + malformed.string() +
                               " --input-kind stats_matrix");
  CHECK(bad_csv.exit_code == 2);
  CHECK(bad_csv.err.find("line 2") != std::string::npos);

  const auto ragged = write_file("ragged.csv", "5,3\n1\n");
  CHECK(run_cli("analyze --input " + ragged.string() + " --input-kind stats_matrix").exit_code ==
        2);

  const auto missing = run_cli("analyze --input /nonexistent.csv --input-kind stats_matrix");
  CHECK(missing.exit_code == 3);

  const auto no_sub = run_cli("");
  CHECK(no_sub.exit_code == 2);
}

TEST_CASE("data inputs refuse silently nondeterministic runs") {
  std::string rows;
  for (int r = 0; r < 8; ++r) rows += std::to_string(r) + "," + std::to_string(7 - r) + "\n";
  const auto csv = write_file("data.csv", rows);
  const auto labels = write_file("labels.txt", "a\na\na\na\nb\nb\nb\nb\n");
  const auto res = run_cli("analyze --input " + csv.string() +
                           " --input-kind data_two_group --labels " + labels.string());
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("--seed or --entropy") != std::string::npos);
}

TEST_CASE("pvalue matrices work through every method") {
  const auto csv = write_file("p.csv", "0.01,0.2,0.6\n0.9,0.5,0.7\n0.8,0.4,0.9\n0.7,0.6,0.5\n");
  for (const std::string method : {"fdx-single", "fdx-seq", "fdx-seq-exact", "maxt", "maxt-seq"}) {
    const auto res = run_cli("analyze --input " + csv.string() +
                             " --input-kind pvalue_matrix --method " + method +
                             " --alpha 0.5 --gamma 0.25 --seed 4");
    REQUIRE(res.exit_code == 0);
  }
  const auto bad = write_file("badp.csv", "0.5,1.5\n0.2,0.3\n");
  CHECK(run_cli("analyze --input " + bad.string() + " --input-kind pvalue_matrix").exit_code == 2);
}

TEST_CASE("reports and plot data are byte-identical across reruns and thread counts") {
  std::string rows;
  unsigned state = 12345;
  for (int r = 0; r < 12; ++r) {
    std::string line;
    for (int c = 0; c < 6; ++c) {
      state = state * 1664525u + 1013904223u;
      line += (c ? "," : "") + std::to_string((state >> 8) % 1000);
    }
    rows += line + "\n";
  }
  const auto csv = write_file("det.csv", rows);
  const auto labels = write_file("det_labels.txt", "0\n0\n0\n0\n0\n0\n1\n1\n1\n1\n1\n1\n");
  const auto out1 = work_dir() / "det1.json";
  const auto out2 = work_dir() / "det2.json";
  const std::string common = "analyze --input " + csv.string() +
                             " --input-kind data_two_group --labels " + labels.string() +
                             " --method fdx-seq --alpha 0.3 --gamma 0.2 --permutations 20 "
                             "--seed 777 --output ";
  REQUIRE(run_cli(common + out1.string(), "FDX_THREADS=1").exit_code == 0);
  REQUIRE(run_cli(common + out2.string(), "FDX_THREADS=4").exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));

  const auto design = write_file("design.json", R"({
    "seed": 11,
    "methods": ["fdx_single", "maxt_single"],
    "defaults": {"m": 8, "n_per_group": 5, "replicates": 10, "permutations": 12,
                  "alpha": 0.2, "gamma": 0.1, "pi0": 0.75, "d_signal": 1.0},
    "cells": [{"rho": 0.0}, {"rho": 0.5}]
  })");
  const auto csv1 = work_dir() / "sim1.csv";
  const auto csv2 = work_dir() / "sim2.csv";
  REQUIRE(run_cli("simulate --input " + design.string() + " --output " + csv1.string(),
                  "FDX_THREADS=2").exit_code == 0);
  REQUIRE(run_cli("simulate --input " + design.string() + " --output " + csv2.string(),
                  "FDX_THREADS=1").exit_code == 0);
  const auto sim1 = slurp(csv1);
  CHECK(sim1 == slurp(csv2));

  std::size_t lines = 0;
  for (char ch : sim1) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == 5);  // header + 2 cells x 2 methods
}

TEST_CASE("simulate validates its design file") {
  const auto bad_field = write_file("bad_design.json", R"({"seed": 1, "defaults": {"bogus": 3}})");
  const auto res = run_cli("simulate --input " + bad_field.string() + " --output /tmp/x.csv");
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("bogus") != std::string::npos);

  const auto no_seed = write_file("no_seed.json", R"({"defaults": {"m": 8}})");
  CHECK(run_cli("simulate --input " + no_seed.string() + " --output /tmp/x.csv").exit_code == 2);

  const auto not_json = write_file("notjson.json", "hello");
  CHECK(run_cli("simulate --input " + not_json.string() + " --output /tmp/x.csv").exit_code == 2);
}

TEST_CASE("selftest passes and the corrupted hook fails loudly") {
  const auto ok = run_cli("selftest");
  CHECK(ok.exit_code == 0);
  std::size_t checks = 0;
  std::istringstream lines(ok.out);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind("ok - ", 0) == 0) ++checks;
  CHECK(checks >= 6);

  const auto bad = run_cli("selftest --corrupt-quantile");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}
