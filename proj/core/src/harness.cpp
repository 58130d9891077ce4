// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "rlvr/verifier.hpp"

namespace rlvr {

namespace {

using nlohmann::json;

// Seed-stream tags so the independent random decisions never collide.
constexpr std::uint64_t kStreamTaskPick = 0x5E1EC7ULL;
constexpr std::uint64_t kStreamRollout = 0x9011ULL;
constexpr std::uint64_t kStreamProbe = 0xD157ULL;
constexpr std::uint64_t kStreamStage2 = 0xD90ULL;

double percentile95(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(values.size()))) - 1;
  return values[std::min(idx, values.size() - 1)];
}

void apply_freeze_blocks(PolicyParams& params, const FeatureLayout& layout,
                         const std::vector<std::string>& blocks) {
  for (const auto& block : blocks) {
    if (block == "prompt_hash") freeze_prompt_hash_block(params, layout);
  }
}

/// Runs fn(i) for i in [0, n) across `workers` threads. Output slots are
/// pre-allocated by the caller and indexed by i, so scheduling never
/// affects results.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  if (n <= 0) return;
  const int used = std::max(1, std::min(workers, n));
  if (used == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(used));
  for (int w = 0; w < used; ++w) {
    threads.emplace_back([&fn, w, n, used] {
      for (int i = w; i < n; i += used) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

struct IterationRollouts {
  std::vector<RolloutGroup> groups;            // one per drawn task
  std::vector<const Task*> tasks;              // aligned with groups
  std::vector<double> lengths;                 // all rollout lengths
};

IterationRollouts roll_out_tasks(const RunConfig& config,
                                 const PolicyParams& params,
                                 const PolicyParams& old_params,
                                 const Vocab& vocab,
                                 const FeatureLayout& layout,
                                 const std::vector<const Task*>& picked,
                                 std::uint64_t iteration_tag) {
  IterationRollouts out;
  const int n = static_cast<int>(picked.size());
  out.groups.resize(static_cast<std::size_t>(n));
  out.tasks = picked;
  const GenerationConfig gen{config.rollout.temperature,
                             config.rollout.eos_logit_bias};
  parallel_for(n, config.workers, [&](int i) {
    const Task& task = *picked[static_cast<std::size_t>(i)];
    RolloutGroup group;
    group.task_id = task.id;
    group.rollouts.reserve(static_cast<std::size_t>(config.rollout.n_rollout));
    for (int j = 0; j < config.rollout.n_rollout; ++j) {
      const std::uint64_t seed =
          mix_seed(config.seed, kStreamRollout, fnv1a(task.id), iteration_tag,
                   static_cast<std::uint64_t>(j));
      Rollout r = sample(params, vocab, layout, task, config.rollout.max_len,
                         config.rollout.temperature, seed,
                         config.rollout.redundancy,
                         config.rollout.eos_logit_bias);
      r.logprob_old =
          old_params.version == params.version
              ? r.logprob_cur
              : logprob(old_params, vocab, layout, task, r.tokens, gen).total;
      group.correctness.push_back(task_reward(task, r.text));
      group.rollouts.push_back(std::move(r));
    }
    out.groups[static_cast<std::size_t>(i)] = std::move(group);
  });
  for (const auto& g : out.groups)
    for (const auto& r : g.rollouts)
      out.lengths.push_back(static_cast<double>(r.length));
  return out;
}

double probe_distinct_count(const RunConfig& config, const PolicyParams& params,
                            const Vocab& vocab, const FeatureLayout& layout,
                            const std::vector<Task>& probes,
                            std::uint64_t iteration_tag) {
  if (probes.empty()) return 0.0;
  std::vector<double> counts(probes.size(), 0.0);
  parallel_for(static_cast<int>(probes.size()), config.workers, [&](int p) {
    const Task& probe = probes[static_cast<std::size_t>(p)];
    std::vector<std::string> responses;
    responses.reserve(static_cast<std::size_t>(config.eval.probe_samples));
    for (int s = 0; s < config.eval.probe_samples; ++s) {
      const std::uint64_t seed =
          mix_seed(config.seed, kStreamProbe, fnv1a(probe.id), iteration_tag,
                   static_cast<std::uint64_t>(s));
      responses.push_back(sample(params, vocab, layout, probe,
                                 config.rollout.max_len,
                                 config.rollout.temperature, seed,
                                 config.rollout.redundancy,
                                 config.rollout.eos_logit_bias)
                              .text);
    }
    counts[static_cast<std::size_t>(p)] =
        static_cast<double>(distinct_count(responses, config.rewards.diversity));
  });
  double total = 0.0;
  for (double c : counts) total += c;
  return total / static_cast<double>(probes.size());
}

}  // namespace

int task_reward(const Task& task, const std::string& response) {
  for (const auto& answer : accepted_answers(task)) {
    if (verify(response, answer).reward == 1) return 1;
  }
  return 0;
}

Vocab make_vocab(const RunConfig& config) {
  return Vocab(config.tasks.modulus, config.vocab.filler_words);
}

FeatureLayout make_layout(const RunConfig& config) {
  FeatureLayout layout;
  layout.hash_dim = config.policy.hash_dim;
  layout.vocab_size = make_vocab(config).size();
  return layout;
}

Responder make_prompt_reading_responder(int modulus) {
  return [modulus](const Task& task, int trial) -> std::string {
    std::string visible = task.prompt;
    if (task.context) visible += " " + *task.context;
    const std::size_t pos = visible.find("v = ");
    if (pos == std::string::npos)
      return "I cannot answer without the missing evidence.";
    std::size_t i = pos + 4;
    long long value = 0;
    bool any = false;
    while (i < visible.size() &&
           std::isdigit(static_cast<unsigned char>(visible[i]))) {
      value = value * 10 + (visible[i] - '0');
      any = true;
      ++i;
    }
    if (!any) return "I cannot answer without the missing evidence.";
    (void)trial;  // the oracle is deterministic across trials
    return "\\boxed{" + std::to_string(value % modulus) + "}";
  };
}

TaskSuite build_task_suite(const RunConfig& config) {
  TaskSuite suite;
  std::vector<Task> pool;
  if (config.tasks.count > 0) {
    auto arith = gen_arith_tasks(config.tasks.count, config.tasks.modulus,
                                 config.seed);
    pool.insert(pool.end(), arith.begin(), arith.end());
  }

  std::vector<Task> context_tasks;
  if (config.tasks.context_count > 0) {
    context_tasks =
        gen_context_tasks(config.tasks.context_count, config.tasks.modulus,
                          config.seed, config.tasks.leaky_fraction);
    const int n_ablate = static_cast<int>(config.tasks.ablation_fraction *
                                          static_cast<double>(context_tasks.size()));
    for (int i = 0; i < n_ablate; ++i)
      suite.ablated.push_back(ablate_context(context_tasks[static_cast<std::size_t>(i)]));
  }

  if (config.screening.enabled && !context_tasks.empty()) {
    const Responder responder =
        make_prompt_reading_responder(config.tasks.modulus);
    std::vector<Task> clean;
    for (const auto& task : context_tasks) {
      const ScreenReport report = leakage_screen(
          task, responder, config.screening.n_trials, config.screening.threshold);
      suite.screen_reports.push_back(report);
      if (report.decision == ScreenDecision::kLeaked) {
        suite.leaked_task_ids.push_back(task.id);
      } else {
        clean.push_back(task);
      }
    }
    context_tasks = std::move(clean);
  }
  pool.insert(pool.end(), context_tasks.begin(), context_tasks.end());

  if (config.tasks.probe_count > 0) {
    suite.probes =
        gen_probe_tasks(config.tasks.probe_count, config.tasks.modulus,
                        config.tasks.probe_divisor, config.seed);
    pool.insert(pool.end(), suite.probes.begin(), suite.probes.end());
  }

  suite.train = mix_text_only(pool, config.tasks.text_only_fraction, config.seed);
  suite.eval = suite.train;
  return suite;
}

double greedy_accuracy(const RunConfig& config, const PolicyParams& params,
                       const Vocab& vocab, const FeatureLayout& layout,
                       const std::vector<Task>& tasks) {
  if (tasks.empty()) return 0.0;
  std::vector<int> hits(tasks.size(), 0);
  parallel_for(static_cast<int>(tasks.size()), config.workers, [&](int i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    const Rollout r =
        greedy_decode(params, vocab, layout, task, config.rollout.max_len,
                      config.rollout.redundancy, config.rollout.eos_logit_bias);
    hits[static_cast<std::size_t>(i)] = task_reward(task, r.text);
  });
  double total = 0.0;
  for (int h : hits) total += h;
  return total / static_cast<double>(tasks.size());
}

Stage1Result run_stage1(const RunConfig& config) {
  config.validate();
  const Vocab vocab = make_vocab(config);
  FeatureLayout layout;
  layout.hash_dim = config.policy.hash_dim;
  layout.vocab_size = vocab.size();

  Stage1Result result;
  result.suite = build_task_suite(config);
  const auto& train = result.suite.train;
  if (train.empty()) throw ConfigError("stage1: training pool is empty");

  PolicyParams params = init_policy(vocab.size(), layout.feature_dim(), config.seed);
  apply_freeze_blocks(params, layout, config.stage1.freeze_blocks);

  RatioEmaState ema = config.ratio_ema;
  ema.rho = ema.rho_min;  // pessimistic start: oversample hard until measured
  SgdMomentum optimizer;
  std::unordered_map<std::string, Tier> tiers;
  for (const auto& t : train) tiers[t.id] = Tier::kUnknown;

  PolicyParams old_params = snapshot(params);
  const int iterations = config.stage1.iterations;
  const int switch_at = static_cast<int>(config.rewards.phase_switch_fraction *
                                         static_cast<double>(iterations));
  const GenerationConfig gen{config.rollout.temperature,
                             config.rollout.eos_logit_bias};

  for (int iter = 0; iter < iterations; ++iter) {
    const auto t_start = std::chrono::steady_clock::now();
    if (iter % config.stage1.snapshot_interval == 0) old_params = snapshot(params);
    // logprob_old must come from parameters at least as old as the sampler's
    if (old_params.version > params.version)
      throw NumericError("stage1: snapshot newer than live parameters");

    const RewardPhase phase = iter < switch_at ? RewardPhase::kEarlyPassK
                                               : RewardPhase::kLateDiversity;

    // Adaptive oversampling with tier-weighted task selection.
    const int target = config.stage1.groups_per_batch;
    const int n_over = oversample_count(ema, target);
    TierReport report;
    report.assignments.reserve(train.size());
    for (const auto& t : train)
      report.assignments.push_back({t.id, tiers.at(t.id)});
    const auto weights = resample_weights(report, TierWeights{});
    Rng pick_rng(mix_seed(config.seed, kStreamTaskPick,
                          static_cast<std::uint64_t>(iter)));
    std::vector<const Task*> picked;
    picked.reserve(static_cast<std::size_t>(n_over));
    for (int i = 0; i < n_over; ++i)
      picked.push_back(&train[pick_rng.categorical(weights)]);

    auto rolled = roll_out_tasks(config, params, old_params, vocab, layout,
                                 picked, static_cast<std::uint64_t>(iter));

    // Difficulty re-tiering from the fresh group accuracies.
    for (std::size_t g = 0; g < rolled.groups.size(); ++g) {
      const auto& group = rolled.groups[g];
      const double acc =
          1.0 - static_cast<double>(group.n_neg()) /
                    static_cast<double>(group.n_rollout());
      tiers[group.task_id] = tier_classify(acc);
    }

    auto filtered = rejection_filter(rolled.groups);
    const int kept = static_cast<int>(filtered.kept.size());
    const double informative_fraction =
        n_over > 0 ? static_cast<double>(kept) / static_cast<double>(n_over) : 0.0;
    // Feed the EMA the usable fraction (shortfalls count fully, surplus does
    // not), which keeps the oversample estimate conservative.
    const double observed =
        n_over > 0
            ? static_cast<double>(std::min(kept, target)) / static_cast<double>(n_over)
            : 0.0;
    ema = ratio_ema_update(ema, observed);

    const int batch_size = std::min(kept, target);
    std::vector<AdvantagedGroup> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    std::unordered_map<std::string, const Task*> by_id;
    for (const auto* t : rolled.tasks) by_id[t->id] = t;
    double abs_advantage_sum = 0.0;
    int advantage_count = 0;
    for (int b = 0; b < batch_size; ++b) {
      const RolloutGroup& group = filtered.kept[static_cast<std::size_t>(b)];
      AdvantagedGroup ag;
      ag.task = by_id.at(group.task_id);
      ag.group = &filtered.kept[static_cast<std::size_t>(b)];
      const AdvantageVector adv =
          hybrid_advantage(group, phase, config.rewards.k,
                           config.rewards.diversity, config.rewards.length,
                           config.rewards.w_len);
      ag.advantages = adv.values;
      for (double a : ag.advantages) {
        abs_advantage_sum += std::abs(a);
        ++advantage_count;
      }
      if (ag.task->requires_context)
        result.multimodal_batch_task_ids.insert(group.task_id);
      batch.push_back(std::move(ag));
    }

    double loss = 0.0;
    if (!batch.empty()) {
      LossGrad lg = gspo_loss_grad(params, vocab, layout, batch, config.clip, gen);
      loss = lg.loss;
      optimizer.apply(params, lg.grad, config.optim);
    }

    MetricsRecord rec;
    rec.stage = "stage1";
    rec.iteration = iter;
    rec.greedy_accuracy =
        greedy_accuracy(config, params, vocab, layout, result.suite.eval);
    double len_sum = 0.0;
    for (double l : rolled.lengths) len_sum += l;
    rec.mean_length =
        rolled.lengths.empty() ? 0.0 : len_sum / static_cast<double>(rolled.lengths.size());
    rec.p95_length = percentile95(rolled.lengths);
    rec.informative_fraction = informative_fraction;
    rec.rho = ema.rho;
    rec.mean_abs_advantage =
        advantage_count > 0 ? abs_advantage_sum / advantage_count : 0.0;
    rec.loss = loss;
    rec.distinct_count =
        probe_distinct_count(config, params, vocab, layout, result.suite.probes,
                             static_cast<std::uint64_t>(iter));
    rec.groups_in_batch = static_cast<int>(batch.size());
    result.metrics.push_back(std::move(rec));

    const auto t_end = std::chrono::steady_clock::now();
    result.wall_clock_ms.push_back(
        std::chrono::duration<double, std::milli>(t_end - t_start).count());
  }

  result.params = std::move(params);
  return result;
}

Stage2Result run_stage2(const RunConfig& config, const PolicyParams& initial,
                        const std::vector<PreferencePair>& pairs,
                        const TaskSuite& suite) {
  config.validate();
  if (pairs.empty()) throw std::invalid_argument("run_stage2: empty pair list");
  const Vocab vocab = make_vocab(config);
  FeatureLayout layout;
  layout.hash_dim = config.policy.hash_dim;
  layout.vocab_size = vocab.size();
  if (initial.vocab_size != vocab.size() ||
      initial.feature_dim != layout.feature_dim())
    throw ConfigError("run_stage2: checkpoint shape does not match config");

  std::unordered_map<std::string, const Task*> by_id;
  for (const auto& t : suite.train) by_id[t.id] = &t;
  for (const auto& t : suite.ablated) by_id[t.id] = &t;
  for (const auto& t : suite.probes) by_id[t.id] = &t;

  // Tokenize once; a trailing EOS completes each response's likelihood.
  std::vector<TokenizedPair> tokenized;
  tokenized.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto it = by_id.find(p.task_id);
    if (it == by_id.end())
      throw std::invalid_argument("run_stage2: pair references unknown task " +
                                  p.task_id);
    TokenizedPair tp;
    tp.task = it->second;
    tp.chosen_tokens = vocab.tokenize(p.chosen);
    tp.rejected_tokens = vocab.tokenize(p.rejected);
    tp.chosen_tokens.push_back(Vocab::kEos);
    tp.rejected_tokens.push_back(Vocab::kEos);
    tokenized.push_back(std::move(tp));
  }

  // Deterministic shuffle, then the tail becomes the held-out split.
  Rng split_rng(mix_seed(config.seed, kStreamStage2, 0));
  std::vector<std::size_t> order(tokenized.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[split_rng.below(i)]);
  const std::size_t n_holdout = static_cast<std::size_t>(
      config.stage2.holdout_fraction * static_cast<double>(order.size()));
  std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_holdout));
  std::vector<std::size_t> holdout_idx(order.end() - static_cast<std::ptrdiff_t>(n_holdout), order.end());
  if (train_idx.empty())
    throw ConfigError("run_stage2: holdout fraction leaves no training pairs");

  PolicyParams params = initial;
  apply_freeze_blocks(params, layout, config.stage2.freeze_blocks);
  SgdMomentum optimizer;
  const GenerationConfig gen{};  // preference likelihoods use the plain policy

  const auto preference_accuracy = [&](const std::vector<std::size_t>& idxs) {
    if (idxs.empty()) return 0.0;
    int wins = 0;
    for (std::size_t i : idxs) {
      const auto& tp = tokenized[i];
      const double lp_w =
          logprob(params, vocab, layout, *tp.task, tp.chosen_tokens, gen).total;
      const double lp_l =
          logprob(params, vocab, layout, *tp.task, tp.rejected_tokens, gen).total;
      wins += lp_w > lp_l ? 1 : 0;
    }
    return static_cast<double>(wins) / static_cast<double>(idxs.size());
  };

  Stage2Result result;
  for (int epoch = 0; epoch < config.stage2.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    Rng shuffle_rng(mix_seed(config.seed, kStreamStage2,
                             static_cast<std::uint64_t>(epoch) + 1));
    std::vector<std::size_t> sched = train_idx;
    for (std::size_t i = sched.size(); i > 1; --i)
      std::swap(sched[i - 1], sched[shuffle_rng.below(i)]);

    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t at = 0; at < sched.size();
         at += static_cast<std::size_t>(config.stage2.batch_size)) {
      const std::size_t end = std::min(
          sched.size(), at + static_cast<std::size_t>(config.stage2.batch_size));
      std::vector<TokenizedPair> minibatch;
      minibatch.reserve(end - at);
      for (std::size_t i = at; i < end; ++i) minibatch.push_back(tokenized[sched[i]]);
      LossGrad lg = dpo_loss_grad(params, vocab, layout, minibatch,
                                  config.optim.beta, gen);
      loss_sum += lg.loss;
      ++batches;
      optimizer.apply(params, lg.grad, config.optim);
    }

    Stage2Record rec;
    rec.epoch = epoch;
    rec.loss = batches > 0 ? loss_sum / batches : 0.0;
    rec.preference_accuracy = preference_accuracy(train_idx);
    rec.holdout_preference_accuracy = preference_accuracy(holdout_idx);
    result.metrics.push_back(std::move(rec));
    const auto t_end = std::chrono::steady_clock::now();
    result.wall_clock_ms.push_back(
        std::chrono::duration<double, std::milli>(t_end - t_start).count());
  }

  result.params = std::move(params);
  return result;
}

EvalReport evaluate(const RunConfig& config, const PolicyParams& params,
                    const TaskSuite& suite) {
  const Vocab vocab = make_vocab(config);
  FeatureLayout layout;
  layout.hash_dim = config.policy.hash_dim;
  layout.vocab_size = vocab.size();
  if (params.vocab_size != vocab.size() ||
      params.feature_dim != layout.feature_dim())
    throw ConfigError("evaluate: checkpoint shape does not match config");

  EvalReport report;
  report.n_eval_tasks = static_cast<int>(suite.eval.size());
  report.n_ablated = static_cast<int>(suite.ablated.size());
  report.n_probes = static_cast<int>(suite.probes.size());

  report.greedy_accuracy =
      greedy_accuracy(config, params, vocab, layout, suite.eval);

  std::vector<double> lengths;
  lengths.reserve(suite.eval.size());
  for (const auto& task : suite.eval) {
    const Rollout r =
        greedy_decode(params, vocab, layout, task, config.rollout.max_len,
                      config.rollout.redundancy, config.rollout.eos_logit_bias);
    lengths.push_back(static_cast<double>(r.length));
  }
  if (!lengths.empty()) {
    double sum = 0.0;
    for (double l : lengths) sum += l;
    report.mean_length = sum / static_cast<double>(lengths.size());
    report.p95_length = percentile95(lengths);
  }

  if (!suite.ablated.empty()) {
    int abstained = 0;
    for (const auto& task : suite.ablated) {
      const Rollout r = greedy_decode(params, vocab, layout, task,
                                      config.rollout.max_len,
                                      config.rollout.redundancy,
                                      config.rollout.eos_logit_bias);
      const Verdict v = verify(r.text, std::string(kAbstainSentinel));
      abstained += v.reward;
    }
    report.abstention_rate =
        static_cast<double>(abstained) / static_cast<double>(suite.ablated.size());
  }

  report.mean_distinct = probe_distinct_count(config, params, vocab, layout,
                                              suite.probes, /*iteration_tag=*/0);
  return report;
}

// ---------------------------------------------------------------------------
// Metrics serialization.
// ---------------------------------------------------------------------------

std::string metrics_to_json(const MetricsRecord& r) {
  json j;
  j["stage"] = r.stage;
  j["iteration"] = r.iteration;
  j["greedy_accuracy"] = r.greedy_accuracy;
  j["mean_length"] = r.mean_length;
  j["p95_length"] = r.p95_length;
  j["informative_fraction"] = r.informative_fraction;
  j["rho"] = r.rho;
  j["mean_abs_advantage"] = r.mean_abs_advantage;
  j["loss"] = r.loss;
  j["distinct_count"] = r.distinct_count;
  j["groups_in_batch"] = r.groups_in_batch;
  return j.dump();
}

std::string stage2_record_to_json(const Stage2Record& r) {
  json j;
  j["stage"] = r.stage;
  j["epoch"] = r.epoch;
  j["loss"] = r.loss;
  j["preference_accuracy"] = r.preference_accuracy;
  j["holdout_preference_accuracy"] = r.holdout_preference_accuracy;
  return j.dump();
}

void save_metrics_ndjson(const std::vector<MetricsRecord>& records,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& r : records) out << metrics_to_json(r) << "\n";
}

void save_stage2_metrics_ndjson(const std::vector<Stage2Record>& records,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& r : records) out << stage2_record_to_json(r) << "\n";
}

void save_timings_ndjson(const std::vector<double>& wall_clock_ms,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < wall_clock_ms.size(); ++i) {
    json j;
    j["iteration"] = i;
    j["wall_clock_ms"] = wall_clock_ms[i];
    out << j.dump() << "\n";
  }
}

std::string eval_report_to_json(const EvalReport& report) {
  json j;
  j["greedy_accuracy"] = report.greedy_accuracy;
  j["abstention_rate"] = report.abstention_rate;
  j["mean_distinct"] = report.mean_distinct;
  j["mean_length"] = report.mean_length;
  j["p95_length"] = report.p95_length;
  j["n_eval_tasks"] = report.n_eval_tasks;
  j["n_ablated"] = report.n_ablated;
  j["n_probes"] = report.n_probes;
  return j.dump(2);
}

}  // namespace rlvr
