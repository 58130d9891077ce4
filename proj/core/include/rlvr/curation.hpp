// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// RL data admission: informative-group filtering, adaptive oversampling via
// an EMA of the informative fraction, difficulty tiers with resampling
// weights, and screening of prompts answerable without their evidence.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlvr/reward_engine.hpp"
#include "rlvr/task_forge.hpp"

namespace rlvr {

struct RatioEmaState {
  double rho = 0.05;       // EMA of the informative fraction, in (0, 1]
  double alpha = 0.1;      // smoothing coefficient
  double rho_min = 0.05;   // floor
  double factor_cap = 8.0; // maximum oversample multiplier

  void validate() const;
};

struct TierAssignment {
  std::string task_id;
  Tier tier = Tier::kUnknown;
};

struct TierReport {
  std::vector<TierAssignment> assignments;
};

struct TierWeights {
  double mastered = 0.2;
  double partial = 1.0;
  double unmastered = 1.0;
};

struct RejectionResult {
  std::vector<RolloutGroup> kept;
  int dropped_all_correct = 0;
  int dropped_all_wrong = 0;
};

enum class ScreenDecision { kClean, kLeaked };

struct ScreenReport {
  std::string task_id;
  ScreenDecision decision = ScreenDecision::kClean;
  Tier tier = Tier::kUnknown;
  double match_rate = 0.0;
};

/// Keeps exactly the mixed groups (0 < n_neg < n_rollout); counts the
/// trivially all-correct and all-incorrect drops.
RejectionResult rejection_filter(const std::vector<RolloutGroup>& groups);

/// rho <- max(rho_min, (1 - alpha) * rho + alpha * observed_fraction).
RatioEmaState ratio_ema_update(RatioEmaState state, double observed_fraction);

/// ceil(batch_target / rho), capped at factor_cap * batch_target.
int oversample_count(const RatioEmaState& state, int batch_target);

/// Exact group accuracy 1 -> mastered, 0 -> unmastered, interior -> partial.
Tier tier_classify(double group_accuracy);

/// Normalized categorical sampling distribution over the report's tasks from
/// per-tier base weights. Requires mastered <= min(partial, unmastered);
/// unknown tiers weigh like partial.
std::vector<double> resample_weights(const TierReport& report,
                                     const TierWeights& base);

/// Answers a prompt; trial index varies the sampling seed.
using Responder = std::function<std::string(const Task& task, int trial)>;

/// Samples n_trials responses to the context-ablated variant of the task; a
/// match rate against the original ground truth at or above the threshold
/// marks the task leaked (answerable from language priors alone).
ScreenReport leakage_screen(const Task& task, const Responder& responder,
                            int n_trials, double threshold);

std::string screen_report_to_json(const ScreenReport& report);
void save_screen_reports_ndjson(const std::vector<ScreenReport>& reports,
                                const std::string& path);

}  // namespace rlvr
