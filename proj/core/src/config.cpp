// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Strict JSON parsing for RunConfig: unknown keys are rejected at every
// nesting level so that typos never silently fall back to defaults.

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rlvr/harness.hpp"

namespace rlvr {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ConfigError("config: expected an object at " + path);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.contains(key))
      throw ConfigError("config: unknown key '" + key + "' at " + path);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: bad value for '") + key +
                        "': " + e.what());
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  if (tasks.count < 0 || tasks.context_count < 0 || tasks.probe_count < 0)
    throw ConfigError("config: task counts must be non-negative");
  if (tasks.count + tasks.context_count + tasks.probe_count < 1)
    throw ConfigError("config: task suite is empty");
  if (tasks.modulus < 2) throw ConfigError("config: modulus must be >= 2");
  if (tasks.text_only_fraction < 0.0 || tasks.text_only_fraction > 1.0)
    throw ConfigError("config: text_only_fraction outside [0,1]");
  if (tasks.ablation_fraction < 0.0 || tasks.ablation_fraction > 1.0)
    throw ConfigError("config: ablation_fraction outside [0,1]");
  if (tasks.leaky_fraction < 0.0 || tasks.leaky_fraction > 1.0)
    throw ConfigError("config: leaky_fraction outside [0,1]");
  if (tasks.probe_divisor < 2)
    throw ConfigError("config: probe_divisor must be >= 2");
  if (policy.hash_dim < 1) throw ConfigError("config: hash_dim must be >= 1");
  if (rollout.n_rollout < 2)
    throw ConfigError("config: n_rollout must be >= 2");
  if (rollout.max_len < 1) throw ConfigError("config: max_len must be >= 1");
  if (!(rollout.temperature > 0.0))
    throw ConfigError("config: temperature must be positive");
  if (rollout.redundancy.window < 0 || rollout.redundancy.max_repeats < 0)
    throw ConfigError("config: redundancy settings must be non-negative");
  if (rewards.k < 1 || rewards.k > rollout.n_rollout)
    throw ConfigError("config: need 1 <= k <= n_rollout");
  if (rewards.phase_switch_fraction < 0.0 || rewards.phase_switch_fraction > 1.0)
    throw ConfigError("config: phase_switch_fraction outside [0,1]");
  if (stage1.iterations < 0 || stage2.epochs < 0)
    throw ConfigError("config: iteration counts must be non-negative");
  if (stage1.groups_per_batch < 1)
    throw ConfigError("config: groups_per_batch must be >= 1");
  if (stage1.snapshot_interval < 1)
    throw ConfigError("config: snapshot_interval must be >= 1");
  if (stage2.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
  if (stage2.holdout_fraction < 0.0 || stage2.holdout_fraction >= 1.0)
    throw ConfigError("config: holdout_fraction outside [0,1)");
  if (screening.n_trials < 1)
    throw ConfigError("config: screening n_trials must be >= 1");
  if (screening.threshold < 0.0 || screening.threshold > 1.0)
    throw ConfigError("config: screening threshold outside [0,1]");
  if (eval.probe_samples < 1)
    throw ConfigError("config: probe_samples must be >= 1");
  for (const auto& list : {stage1.freeze_blocks, stage2.freeze_blocks}) {
    for (const auto& block : list) {
      if (block != "prompt_hash")
        throw ConfigError("config: unknown freeze block '" + block + "'");
    }
  }
  try {
    rewards.diversity.validate();
    rewards.length.validate();
    clip.validate();
    optim.validate();
    RatioEmaState ema = ratio_ema;
    ema.rho = std::max(ema.rho, ema.rho_min);  // rho itself is runtime state
    ema.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, "$",
             {"seed", "workers", "tasks", "vocab", "policy", "rollout",
              "rewards", "clip", "optim", "ratio_ema", "screening", "stage1",
              "stage2", "eval"});
  RunConfig c;
  read(j, "seed", c.seed);
  read(j, "workers", c.workers);
  if (j.contains("tasks")) {
    const auto& t = j.at("tasks");
    check_keys(t, "$.tasks",
               {"count", "modulus", "text_only_fraction", "context_count",
                "ablation_fraction", "leaky_fraction", "probe_count",
                "probe_divisor"});
    read(t, "count", c.tasks.count);
    read(t, "modulus", c.tasks.modulus);
    read(t, "text_only_fraction", c.tasks.text_only_fraction);
    read(t, "context_count", c.tasks.context_count);
    read(t, "ablation_fraction", c.tasks.ablation_fraction);
    read(t, "leaky_fraction", c.tasks.leaky_fraction);
    read(t, "probe_count", c.tasks.probe_count);
    read(t, "probe_divisor", c.tasks.probe_divisor);
  }
  if (j.contains("vocab")) {
    const auto& v = j.at("vocab");
    check_keys(v, "$.vocab", {"filler_words"});
    read(v, "filler_words", c.vocab.filler_words);
  }
  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    check_keys(p, "$.policy", {"hash_dim"});
    read(p, "hash_dim", c.policy.hash_dim);
  }
  if (j.contains("rollout")) {
    const auto& r = j.at("rollout");
    check_keys(r, "$.rollout",
               {"n_rollout", "max_len", "temperature", "eos_logit_bias",
                "redundancy_window", "redundancy_max_repeats"});
    read(r, "n_rollout", c.rollout.n_rollout);
    read(r, "max_len", c.rollout.max_len);
    read(r, "temperature", c.rollout.temperature);
    read(r, "eos_logit_bias", c.rollout.eos_logit_bias);
    read(r, "redundancy_window", c.rollout.redundancy.window);
    read(r, "redundancy_max_repeats", c.rollout.redundancy.max_repeats);
  }
  if (j.contains("rewards")) {
    const auto& r = j.at("rewards");
    check_keys(r, "$.rewards",
               {"k", "phase_switch_fraction", "w_len", "diversity", "length"});
    read(r, "k", c.rewards.k);
    read(r, "phase_switch_fraction", c.rewards.phase_switch_fraction);
    read(r, "w_len", c.rewards.w_len);
    if (r.contains("diversity")) {
      const auto& d = r.at("diversity");
      check_keys(d, "$.rewards.diversity",
                 {"norm_lo", "norm_hi", "similarity_threshold"});
      read(d, "norm_lo", c.rewards.diversity.norm_lo);
      read(d, "norm_hi", c.rewards.diversity.norm_hi);
      read(d, "similarity_threshold", c.rewards.diversity.similarity_threshold);
    }
    if (r.contains("length")) {
      const auto& l = r.at("length");
      check_keys(l, "$.rewards.length", {"l_max", "l_soft"});
      read(l, "l_max", c.rewards.length.l_max);
      read(l, "l_soft", c.rewards.length.l_soft);
    }
  }
  if (j.contains("clip")) {
    const auto& cl = j.at("clip");
    check_keys(cl, "$.clip", {"eps_low", "eps_high"});
    read(cl, "eps_low", c.clip.eps_low);
    read(cl, "eps_high", c.clip.eps_high);
  }
  if (j.contains("optim")) {
    const auto& o = j.at("optim");
    check_keys(o, "$.optim",
               {"learning_rate", "momentum", "max_grad_norm", "beta"});
    read(o, "learning_rate", c.optim.learning_rate);
    read(o, "momentum", c.optim.momentum);
    read(o, "max_grad_norm", c.optim.max_grad_norm);
    read(o, "beta", c.optim.beta);
  }
  if (j.contains("ratio_ema")) {
    const auto& e = j.at("ratio_ema");
    check_keys(e, "$.ratio_ema", {"alpha", "rho_min", "factor_cap"});
    read(e, "alpha", c.ratio_ema.alpha);
    read(e, "rho_min", c.ratio_ema.rho_min);
    read(e, "factor_cap", c.ratio_ema.factor_cap);
  }
  if (j.contains("screening")) {
    const auto& s = j.at("screening");
    check_keys(s, "$.screening", {"enabled", "n_trials", "threshold"});
    read(s, "enabled", c.screening.enabled);
    read(s, "n_trials", c.screening.n_trials);
    read(s, "threshold", c.screening.threshold);
  }
  if (j.contains("stage1")) {
    const auto& s = j.at("stage1");
    check_keys(s, "$.stage1",
               {"iterations", "groups_per_batch", "snapshot_interval",
                "freeze_blocks"});
    read(s, "iterations", c.stage1.iterations);
    read(s, "groups_per_batch", c.stage1.groups_per_batch);
    read(s, "snapshot_interval", c.stage1.snapshot_interval);
    read(s, "freeze_blocks", c.stage1.freeze_blocks);
  }
  if (j.contains("stage2")) {
    const auto& s = j.at("stage2");
    check_keys(s, "$.stage2",
               {"epochs", "batch_size", "holdout_fraction", "freeze_blocks"});
    read(s, "epochs", c.stage2.epochs);
    read(s, "batch_size", c.stage2.batch_size);
    read(s, "holdout_fraction", c.stage2.holdout_fraction);
    read(s, "freeze_blocks", c.stage2.freeze_blocks);
  }
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    check_keys(e, "$.eval", {"probe_samples"});
    read(e, "probe_samples", c.eval.probe_samples);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["tasks"] = {{"count", c.tasks.count},
                {"modulus", c.tasks.modulus},
                {"text_only_fraction", c.tasks.text_only_fraction},
                {"context_count", c.tasks.context_count},
                {"ablation_fraction", c.tasks.ablation_fraction},
                {"leaky_fraction", c.tasks.leaky_fraction},
                {"probe_count", c.tasks.probe_count},
                {"probe_divisor", c.tasks.probe_divisor}};
  j["vocab"] = {{"filler_words", c.vocab.filler_words}};
  j["policy"] = {{"hash_dim", c.policy.hash_dim}};
  j["rollout"] = {{"n_rollout", c.rollout.n_rollout},
                  {"max_len", c.rollout.max_len},
                  {"temperature", c.rollout.temperature},
                  {"eos_logit_bias", c.rollout.eos_logit_bias},
                  {"redundancy_window", c.rollout.redundancy.window},
                  {"redundancy_max_repeats", c.rollout.redundancy.max_repeats}};
  j["rewards"] = {
      {"k", c.rewards.k},
      {"phase_switch_fraction", c.rewards.phase_switch_fraction},
      {"w_len", c.rewards.w_len},
      {"diversity",
       {{"norm_lo", c.rewards.diversity.norm_lo},
        {"norm_hi", c.rewards.diversity.norm_hi},
        {"similarity_threshold", c.rewards.diversity.similarity_threshold}}},
      {"length", {{"l_max", c.rewards.length.l_max},
                  {"l_soft", c.rewards.length.l_soft}}}};
  j["clip"] = {{"eps_low", c.clip.eps_low}, {"eps_high", c.clip.eps_high}};
  j["optim"] = {{"learning_rate", c.optim.learning_rate},
                {"momentum", c.optim.momentum},
                {"max_grad_norm", c.optim.max_grad_norm},
                {"beta", c.optim.beta}};
  j["ratio_ema"] = {{"alpha", c.ratio_ema.alpha},
                    {"rho_min", c.ratio_ema.rho_min},
                    {"factor_cap", c.ratio_ema.factor_cap}};
  j["screening"] = {{"enabled", c.screening.enabled},
                    {"n_trials", c.screening.n_trials},
                    {"threshold", c.screening.threshold}};
  j["stage1"] = {{"iterations", c.stage1.iterations},
                 {"groups_per_batch", c.stage1.groups_per_batch},
                 {"snapshot_interval", c.stage1.snapshot_interval},
                 {"freeze_blocks", c.stage1.freeze_blocks}};
  j["stage2"] = {{"epochs", c.stage2.epochs},
                 {"batch_size", c.stage2.batch_size},
                 {"holdout_fraction", c.stage2.holdout_fraction},
                 {"freeze_blocks", c.stage2.freeze_blocks}};
  j["eval"] = {{"probe_samples", c.eval.probe_samples}};
  return j.dump(2);
}

}  // namespace rlvr
