// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: task generation, leakage screening, the two
// training stages, evaluation, and CSV report rendering.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime numeric error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlvr/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path,
                              "Path to the JSON configuration document");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed_override,
                  "Override the configuration seed");
  cmd->add_option("--out-dir", args.out_dir, "Output directory");
}

rlvr::RunConfig resolve_config(const CommonArgs& args) {
  rlvr::RunConfig config = rlvr::load_run_config(args.config_path);
  if (args.seed_override) config.seed = *args.seed_override;
  return config;
}

fs::path ensure_out_dir(const CommonArgs& args) {
  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

int cmd_gen_tasks(const CommonArgs& args) {
  const auto config = resolve_config(args);
  const auto dir = ensure_out_dir(args);
  const rlvr::TaskSuite suite = rlvr::build_task_suite(config);
  rlvr::save_tasks_ndjson(suite.train, (dir / "tasks.jsonl").string());
  rlvr::save_tasks_ndjson(suite.probes, (dir / "probes.jsonl").string());
  rlvr::save_tasks_ndjson(suite.ablated, (dir / "ablated.jsonl").string());
  std::vector<rlvr::Task> pair_tasks = suite.train;
  pair_tasks.insert(pair_tasks.end(), suite.ablated.begin(), suite.ablated.end());
  const auto pairs = rlvr::make_preference_pairs(pair_tasks, config.seed);
  rlvr::save_pairs_ndjson(pairs, (dir / "pairs.jsonl").string());
  std::cout << "wrote " << suite.train.size() << " tasks, " << suite.probes.size()
            << " probes, " << suite.ablated.size() << " ablated variants, "
            << pairs.size() << " preference pairs to " << dir << "\n";
  return 0;
}

int cmd_screen(const CommonArgs& args) {
  auto config = resolve_config(args);
  config.screening.enabled = true;
  const auto dir = ensure_out_dir(args);
  const rlvr::TaskSuite suite = rlvr::build_task_suite(config);
  rlvr::save_screen_reports_ndjson(suite.screen_reports,
                                   (dir / "screen_report.jsonl").string());
  std::cout << "screened " << suite.screen_reports.size() << " context tasks, "
            << suite.leaked_task_ids.size() << " leaked\n";
  return 0;
}

int cmd_train_stage1(const CommonArgs& args) {
  const auto config = resolve_config(args);
  const auto dir = ensure_out_dir(args);
  const rlvr::Stage1Result result = rlvr::run_stage1(config);
  rlvr::save_metrics_ndjson(result.metrics, (dir / "metrics_stage1.jsonl").string());
  rlvr::save_timings_ndjson(result.wall_clock_ms,
                            (dir / "timings_stage1.jsonl").string());
  rlvr::save_checkpoint(result.params, (dir / "checkpoint_stage1.bin").string());
  if (!result.suite.screen_reports.empty())
    rlvr::save_screen_reports_ndjson(result.suite.screen_reports,
                                     (dir / "screen_report.jsonl").string());
  const double final_acc =
      result.metrics.empty() ? 0.0 : result.metrics.back().greedy_accuracy;
  std::cout << "stage1 done: " << result.metrics.size()
            << " iterations, final greedy accuracy " << final_acc << "\n";
  return 0;
}

int cmd_train_stage2(const CommonArgs& args, const std::string& checkpoint,
                     const std::string& pairs_path) {
  const auto config = resolve_config(args);
  const auto dir = ensure_out_dir(args);
  const rlvr::TaskSuite suite = rlvr::build_task_suite(config);

  rlvr::PolicyParams initial;
  if (!checkpoint.empty()) {
    initial = rlvr::load_checkpoint(checkpoint);
  } else {
    const rlvr::Vocab vocab = rlvr::make_vocab(config);
    const rlvr::FeatureLayout layout = rlvr::make_layout(config);
    initial = rlvr::init_policy(vocab.size(), layout.feature_dim(), config.seed);
  }

  std::vector<rlvr::PreferencePair> pairs;
  if (!pairs_path.empty()) {
    pairs = rlvr::load_pairs_ndjson(pairs_path);
  } else {
    std::vector<rlvr::Task> pair_tasks = suite.train;
    pair_tasks.insert(pair_tasks.end(), suite.ablated.begin(),
                      suite.ablated.end());
    pairs = rlvr::make_preference_pairs(pair_tasks, config.seed);
  }

  const rlvr::Stage2Result result =
      rlvr::run_stage2(config, initial, pairs, suite);
  rlvr::save_stage2_metrics_ndjson(result.metrics,
                                   (dir / "metrics_stage2.jsonl").string());
  rlvr::save_timings_ndjson(result.wall_clock_ms,
                            (dir / "timings_stage2.jsonl").string());
  rlvr::save_checkpoint(result.params, (dir / "checkpoint_stage2.bin").string());
  const double final_acc =
      result.metrics.empty() ? 0.0 : result.metrics.back().preference_accuracy;
  std::cout << "stage2 done: " << result.metrics.size()
            << " epochs, final preference accuracy " << final_acc << "\n";
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint) {
  const auto config = resolve_config(args);
  const auto dir = ensure_out_dir(args);
  const rlvr::TaskSuite suite = rlvr::build_task_suite(config);
  rlvr::PolicyParams params = rlvr::load_checkpoint(checkpoint);
  const rlvr::EvalReport report = rlvr::evaluate(config, params, suite);
  const std::string text = rlvr::eval_report_to_json(report);
  std::ofstream out((dir / "eval_report.json").string(), std::ios::binary);
  out << text << "\n";
  std::cout << text << "\n";
  return 0;
}

int cmd_report(const CommonArgs& args) {
  const auto dir = fs::path(args.out_dir);
  int rendered = 0;
  const auto render = [&](const std::string& jsonl, const std::string& csv,
                          const std::vector<std::string>& columns) {
    std::ifstream in((dir / jsonl).string());
    if (!in) return;
    std::ofstream out((dir / csv).string(), std::ios::binary);
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      for (std::size_t i = 0; i < columns.size(); ++i) {
        const auto& v = j.at(columns[i]);
        if (v.is_string())
          out << v.get<std::string>();
        else
          out << v.dump();
        out << (i + 1 < columns.size() ? "," : "\n");
      }
    }
    ++rendered;
  };
  render("metrics_stage1.jsonl", "summary_stage1.csv",
         {"iteration", "greedy_accuracy", "loss", "mean_length", "p95_length",
          "informative_fraction", "rho", "mean_abs_advantage", "distinct_count",
          "groups_in_batch"});
  render("metrics_stage2.jsonl", "summary_stage2.csv",
         {"epoch", "loss", "preference_accuracy",
          "holdout_preference_accuracy"});
  if (rendered == 0) {
    std::cerr << "report: no metrics files found in " << dir << "\n";
    return 2;
  }
  std::cout << "rendered " << rendered << " CSV summaries in " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale hybrid-reward RLVR post-training engine"};
  app.require_subcommand(1);

  CommonArgs gen_args, screen_args, s1_args, s2_args, eval_args, report_args;
  std::string s2_checkpoint, s2_pairs, eval_checkpoint;

  add_common(app.add_subcommand("gen-tasks", "Generate the task suite"), gen_args);
  add_common(app.add_subcommand("screen", "Leakage-screen context tasks"),
             screen_args);
  add_common(app.add_subcommand("train-stage1", "Online RL (GSPO) training"),
             s1_args);
  auto* s2 = app.add_subcommand("train-stage2", "Offline preference training");
  add_common(s2, s2_args);
  s2->add_option("--checkpoint", s2_checkpoint,
                 "Stage-1 checkpoint to start from (default: fresh policy)");
  s2->add_option("--pairs", s2_pairs,
                 "Preference pairs NDJSON (default: generated from the suite)");
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint");
  add_common(ev, eval_args);
  ev->add_option("--checkpoint", eval_checkpoint, "Checkpoint to evaluate")
      ->required();
  auto* rep = app.add_subcommand("report", "Render CSV summaries from metrics");
  rep->add_option("--out-dir", report_args.out_dir,
                  "Directory holding metrics files")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("gen-tasks")) return cmd_gen_tasks(gen_args);
    if (app.got_subcommand("screen")) return cmd_screen(screen_args);
    if (app.got_subcommand("train-stage1")) return cmd_train_stage1(s1_args);
    if (app.got_subcommand("train-stage2"))
      return cmd_train_stage2(s2_args, s2_checkpoint, s2_pairs);
    if (app.got_subcommand("eval")) return cmd_eval(eval_args, eval_checkpoint);
    if (app.got_subcommand("report")) return cmd_report(report_args);
  } catch (const rlvr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rlvr::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
