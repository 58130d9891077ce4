// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end smoke tests of the rlvrkit binary: subcommands, file outputs,
// exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "rlvr/harness.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/task_forge.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = RLVRKIT_BIN;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rlvrkit_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static inline int counter = 0;
};

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path write_config(const fs::path& dir) {
  rlvr::RunConfig c;
  c.seed = 5;
  c.tasks.count = 12;
  c.tasks.modulus = 10;
  c.tasks.context_count = 6;
  c.tasks.ablation_fraction = 0.5;
  c.tasks.leaky_fraction = 0.5;
  c.tasks.probe_count = 2;
  c.policy.hash_dim = 256;
  c.rollout.n_rollout = 4;
  c.rollout.max_len = 12;
  c.rewards.k = 1;
  c.screening.enabled = true;
  c.stage1.iterations = 3;
  c.stage1.groups_per_batch = 4;
  c.stage2.epochs = 2;
  c.stage2.batch_size = 8;
  c.eval.probe_samples = 3;
  const fs::path path = dir / "config.json";
  std::ofstream out(path);
  out << rlvr::run_config_to_json(c) << "\n";
  return path;
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("full CLI pipeline: gen-tasks, screen, train, eval, report") {
  TempDir tmp;
  const fs::path cfg = write_config(tmp.path);
  const std::string base =
      "--config " + cfg.string() + " --out-dir " + tmp.path.string();

  REQUIRE(run("gen-tasks " + base) == 0);
  CHECK(fs::exists(tmp.path / "tasks.jsonl"));
  CHECK(fs::exists(tmp.path / "probes.jsonl"));
  CHECK(fs::exists(tmp.path / "ablated.jsonl"));
  CHECK(fs::exists(tmp.path / "pairs.jsonl"));
  const auto tasks = rlvr::load_tasks_ndjson((tmp.path / "tasks.jsonl").string());
  CHECK(tasks.size() >= 12);

  REQUIRE(run("screen " + base) == 0);
  CHECK(count_lines(tmp.path / "screen_report.jsonl") == 6);

  REQUIRE(run("train-stage1 " + base) == 0);
  CHECK(fs::exists(tmp.path / "metrics_stage1.jsonl"));
  CHECK(fs::exists(tmp.path / "timings_stage1.jsonl"));
  CHECK(count_lines(tmp.path / "metrics_stage1.jsonl") == 3);
  const fs::path ckpt = tmp.path / "checkpoint_stage1.bin";
  REQUIRE(fs::exists(ckpt));
  CHECK_NOTHROW(rlvr::load_checkpoint(ckpt.string()));

  REQUIRE(run("train-stage2 " + base + " --checkpoint " + ckpt.string() +
              " --pairs " + (tmp.path / "pairs.jsonl").string()) == 0);
  CHECK(count_lines(tmp.path / "metrics_stage2.jsonl") == 2);
  CHECK(fs::exists(tmp.path / "checkpoint_stage2.bin"));

  REQUIRE(run("eval " + base + " --checkpoint " + ckpt.string()) == 0);
  REQUIRE(fs::exists(tmp.path / "eval_report.json"));
  std::ifstream in(tmp.path / "eval_report.json");
  json report;
  in >> report;
  CHECK(report.contains("greedy_accuracy"));
  CHECK(report.contains("abstention_rate"));
  CHECK(report.contains("mean_distinct"));

  REQUIRE(run("report --out-dir " + tmp.path.string()) == 0);
  CHECK(fs::exists(tmp.path / "summary_stage1.csv"));
  CHECK(fs::exists(tmp.path / "summary_stage2.csv"));
  std::ifstream csv(tmp.path / "summary_stage1.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("iteration,greedy_accuracy,loss") == 0);
  CHECK(count_lines(tmp.path / "summary_stage1.csv") == 4);  // header + 3 rows
}

TEST_CASE("exit code 2 on config errors") {
  TempDir tmp;
  const fs::path bad = tmp.path / "bad.json";
  {
    std::ofstream out(bad);
    out << R"({"unknown_key": 1})" << "\n";
  }
  CHECK(run("train-stage1 --config " + bad.string() + " --out-dir " +
            tmp.path.string()) == 2);

  const fs::path invalid = tmp.path / "invalid.json";
  {
    std::ofstream out(invalid);
    out << R"({"rollout": {"n_rollout": 1}})" << "\n";
  }
  CHECK(run("gen-tasks --config " + invalid.string() + " --out-dir " +
            tmp.path.string()) == 2);

  CHECK(run("eval --config " + bad.string() + " --checkpoint missing.bin") == 2);
}

TEST_CASE("seed override changes generated tasks deterministically") {
  TempDir tmp;
  const fs::path cfg = write_config(tmp.path);
  const fs::path dir_a = tmp.path / "a";
  const fs::path dir_b = tmp.path / "b";
  const fs::path dir_c = tmp.path / "c";
  REQUIRE(run("gen-tasks --config " + cfg.string() + " --seed 7 --out-dir " +
              dir_a.string()) == 0);
  REQUIRE(run("gen-tasks --config " + cfg.string() + " --seed 7 --out-dir " +
              dir_b.string()) == 0);
  REQUIRE(run("gen-tasks --config " + cfg.string() + " --seed 8 --out-dir " +
              dir_c.string()) == 0);
  const auto a = rlvr::load_tasks_ndjson((dir_a / "tasks.jsonl").string());
  const auto b = rlvr::load_tasks_ndjson((dir_b / "tasks.jsonl").string());
  const auto c = rlvr::load_tasks_ndjson((dir_c / "tasks.jsonl").string());
  CHECK(a == b);
  CHECK(a != c);
}
