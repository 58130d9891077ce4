// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/curation.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "rlvr/verifier.hpp"

namespace rlvr {

void RatioEmaState::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("RatioEmaState: alpha must be in (0, 1]");
  if (!(rho_min > 0.0) || rho_min > 1.0)
    throw std::invalid_argument("RatioEmaState: rho_min must be in (0, 1]");
  if (rho < rho_min || rho > 1.0)
    throw std::invalid_argument("RatioEmaState: rho must be in [rho_min, 1]");
  if (!(factor_cap >= 1.0))
    throw std::invalid_argument("RatioEmaState: factor_cap must be >= 1");
}

RejectionResult rejection_filter(const std::vector<RolloutGroup>& groups) {
  RejectionResult res;
  for (const auto& g : groups) {
    if (g.all_correct()) {
      ++res.dropped_all_correct;
    } else if (g.all_wrong()) {
      ++res.dropped_all_wrong;
    } else {
      res.kept.push_back(g);
    }
  }
  return res;
}

RatioEmaState ratio_ema_update(RatioEmaState state, double observed_fraction) {
  if (observed_fraction < 0.0 || observed_fraction > 1.0)
    throw std::invalid_argument("ratio_ema_update: fraction outside [0,1]");
  state.rho = std::max(state.rho_min,
                       (1.0 - state.alpha) * state.rho +
                           state.alpha * observed_fraction);
  return state;
}

int oversample_count(const RatioEmaState& state, int batch_target) {
  if (batch_target < 1)
    throw std::invalid_argument("oversample_count: batch_target must be >= 1");
  const double raw = std::ceil(static_cast<double>(batch_target) / state.rho);
  const double cap = state.factor_cap * static_cast<double>(batch_target);
  return static_cast<int>(std::min(raw, cap));
}

Tier tier_classify(double group_accuracy) {
  if (group_accuracy < 0.0 || group_accuracy > 1.0)
    throw std::invalid_argument("tier_classify: accuracy outside [0,1]");
  if (group_accuracy == 1.0) return Tier::kMastered;
  if (group_accuracy == 0.0) return Tier::kUnmastered;
  return Tier::kPartial;
}

std::vector<double> resample_weights(const TierReport& report,
                                     const TierWeights& base) {
  if (!(base.mastered > 0.0) || !(base.partial > 0.0) || !(base.unmastered > 0.0))
    throw std::invalid_argument("resample_weights: base weights must be positive");
  if (base.mastered > std::min(base.partial, base.unmastered))
    throw std::invalid_argument(
        "resample_weights: mastered weight must not exceed the others");
  if (report.assignments.empty())
    throw std::invalid_argument("resample_weights: empty tier report");
  std::vector<double> weights;
  weights.reserve(report.assignments.size());
  double total = 0.0;
  for (const auto& a : report.assignments) {
    double w = base.partial;  // unknown tiers weigh like partially mastered
    switch (a.tier) {
      case Tier::kMastered: w = base.mastered; break;
      case Tier::kPartial: w = base.partial; break;
      case Tier::kUnmastered: w = base.unmastered; break;
      case Tier::kUnknown: break;
    }
    weights.push_back(w);
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

ScreenReport leakage_screen(const Task& task, const Responder& responder,
                            int n_trials, double threshold) {
  if (!task.requires_context || !task.context.has_value())
    throw std::invalid_argument(
        "leakage_screen: task must carry evidence context");
  if (n_trials < 1)
    throw std::invalid_argument("leakage_screen: n_trials must be >= 1");
  if (threshold < 0.0 || threshold > 1.0)
    throw std::invalid_argument("leakage_screen: threshold outside [0,1]");

  Task stripped = task;  // ablated probe keeps the original ground truth
  stripped.context.reset();

  int matches = 0;
  for (int t = 0; t < n_trials; ++t) {
    const std::string response = responder(stripped, t);
    matches += verify(response, task.ground_truth).reward;
  }
  ScreenReport rep;
  rep.task_id = task.id;
  rep.tier = task.tier;
  rep.match_rate = static_cast<double>(matches) / static_cast<double>(n_trials);
  rep.decision = rep.match_rate >= threshold ? ScreenDecision::kLeaked
                                             : ScreenDecision::kClean;
  return rep;
}

std::string screen_report_to_json(const ScreenReport& report) {
  nlohmann::json j;
  j["task_id"] = report.task_id;
  j["decision"] =
      report.decision == ScreenDecision::kLeaked ? "leaked" : "clean";
  j["tier"] = std::string(to_string(report.tier));
  j["match_rate"] = report.match_rate;
  return j.dump();
}

void save_screen_reports_ndjson(const std::vector<ScreenReport>& reports,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& r : reports) out << screen_report_to_json(r) << "\n";
}

}  // namespace rlvr
