// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Orchestration of the two-stage pipeline: Stage-1 online RL with
// phase-switched hybrid rewards and adaptive oversampling, Stage-2 offline
// preference optimization, plus evaluation and metrics emission.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rlvr/curation.hpp"
#include "rlvr/optim.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/reward_engine.hpp"
#include "rlvr/task_forge.hpp"

namespace rlvr {

// ---------------------------------------------------------------------------
// Configuration. Parsed from a strict JSON document: unknown keys anywhere
// are a ConfigError.
// ---------------------------------------------------------------------------

struct TaskSuiteConfig {
  int count = 200;                 // arithmetic tasks
  int modulus = 10;
  double text_only_fraction = 0.0; // extra text-only logic tasks mixed in
  int context_count = 0;           // evidence-dependent tasks
  double ablation_fraction = 0.0;  // fraction of context tasks also ablated
  double leaky_fraction = 0.0;     // fraction of context tasks with leaky prompts
  int probe_count = 0;             // multi-answer probe tasks
  int probe_divisor = 3;
};

struct VocabConfig {
  std::vector<std::string> filler_words = default_filler_words();
};

struct PolicyConfig {
  int hash_dim = 4096;
};

struct RolloutConfig {
  int n_rollout = 8;
  int max_len = 64;
  double temperature = 1.0;
  double eos_logit_bias = 0.0;
  RedundancyConfig redundancy;
};

struct RewardConfig {
  int k = 4;
  double phase_switch_fraction = 0.4;  // early_passk before, late_diversity after
  double w_len = 0.5;
  DiversityConfig diversity;
  LengthConfig length;
};

struct ScreeningConfig {
  bool enabled = false;
  int n_trials = 8;
  double threshold = 0.5;
};

struct Stage1Config {
  int iterations = 500;
  int groups_per_batch = 8;  // G
  int snapshot_interval = 1;
  std::vector<std::string> freeze_blocks;  // subset of {"prompt_hash"}
};

struct Stage2Config {
  int epochs = 20;
  int batch_size = 16;
  double holdout_fraction = 0.2;
  std::vector<std::string> freeze_blocks = {"prompt_hash"};
};

struct EvalConfig {
  int probe_samples = 8;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  TaskSuiteConfig tasks;
  VocabConfig vocab;
  PolicyConfig policy;
  RolloutConfig rollout;
  RewardConfig rewards;
  ClipConfig clip;
  OptimConfig optim;
  RatioEmaState ratio_ema;
  ScreeningConfig screening;
  Stage1Config stage1;
  Stage2Config stage2;
  EvalConfig eval;

  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

// ---------------------------------------------------------------------------
// Task suite assembled from the config.
// ---------------------------------------------------------------------------

struct TaskSuite {
  std::vector<Task> train;    // stage-1 training pool (leaked tasks removed)
  std::vector<Task> eval;     // greedy-accuracy evaluation set
  std::vector<Task> probes;   // fixed ambiguous probe set for distinct_count
  std::vector<Task> ablated;  // evidence-ablated variants (stage-2 / eval)
  std::vector<ScreenReport> screen_reports;
  std::vector<std::string> leaked_task_ids;
};

TaskSuite build_task_suite(const RunConfig& config);

Vocab make_vocab(const RunConfig& config);
FeatureLayout make_layout(const RunConfig& config);

/// Prompt-reading oracle responder used for leakage screening: answers
/// "v mod modulus" whenever the visible text itself reveals v, refuses
/// otherwise. Stands in for a language-prior answer without the evidence.
Responder make_prompt_reading_responder(int modulus);

// ---------------------------------------------------------------------------
// Metrics.
// ---------------------------------------------------------------------------

struct MetricsRecord {
  std::string stage = "stage1";
  int iteration = 0;
  double greedy_accuracy = 0.0;
  double mean_length = 0.0;
  double p95_length = 0.0;
  double informative_fraction = 0.0;
  double rho = 0.0;
  double mean_abs_advantage = 0.0;
  double loss = 0.0;
  double distinct_count = 0.0;  // mean over the fixed probe set
  int groups_in_batch = 0;
};

struct Stage2Record {
  std::string stage = "stage2";
  int epoch = 0;
  double loss = 0.0;
  double preference_accuracy = 0.0;
  double holdout_preference_accuracy = 0.0;
};

std::string metrics_to_json(const MetricsRecord& r);
std::string stage2_record_to_json(const Stage2Record& r);
void save_metrics_ndjson(const std::vector<MetricsRecord>& records,
                         const std::string& path);
void save_stage2_metrics_ndjson(const std::vector<Stage2Record>& records,
                                const std::string& path);
/// Wall-clock timings per iteration live in a sidecar so that metrics files
/// stay byte-identical across reruns of the same (config, seed).
void save_timings_ndjson(const std::vector<double>& wall_clock_ms,
                         const std::string& path);

// ---------------------------------------------------------------------------
// Stages.
// ---------------------------------------------------------------------------

struct Stage1Result {
  PolicyParams params;
  std::vector<MetricsRecord> metrics;
  std::vector<double> wall_clock_ms;
  TaskSuite suite;
  std::set<std::string> multimodal_batch_task_ids;  // context tasks ever batched
};

struct Stage2Result {
  PolicyParams params;
  std::vector<Stage2Record> metrics;
  std::vector<double> wall_clock_ms;
};

struct EvalReport {
  double greedy_accuracy = 0.0;
  double abstention_rate = 0.0;   // greedy abstentions on the ablated set
  double mean_distinct = 0.0;     // distinct_count averaged over probes
  double mean_length = 0.0;
  double p95_length = 0.0;
  int n_eval_tasks = 0;
  int n_ablated = 0;
  int n_probes = 0;
};

std::string eval_report_to_json(const EvalReport& report);

/// Online GSPO with Ratio-EMA oversampling, rejection filtering, tier
/// resampling and the phase-switched hybrid advantage.
Stage1Result run_stage1(const RunConfig& config);

/// Offline preference optimization over the given pairs, starting from
/// `initial` (typically a Stage-1 checkpoint).
Stage2Result run_stage2(const RunConfig& config, const PolicyParams& initial,
                        const std::vector<PreferencePair>& pairs,
                        const TaskSuite& suite);

EvalReport evaluate(const RunConfig& config, const PolicyParams& params,
                    const TaskSuite& suite);

/// Greedy-decoding accuracy of `params` over `tasks` (accept-set aware).
double greedy_accuracy(const RunConfig& config, const PolicyParams& params,
                       const Vocab& vocab, const FeatureLayout& layout,
                       const std::vector<Task>& tasks);

/// Verifies a response against the task's full accepted-answer set.
int task_reward(const Task& task, const std::string& response);

}  // namespace rlvr
