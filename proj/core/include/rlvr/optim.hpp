// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Sequence-level clipped policy objective with decoupled clipping bounds,
// reference-free preference loss, momentum SGD with gradient-norm clipping
// and frozen-entry support, and a finite-difference gradient checker.

#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rlvr/policy.hpp"
#include "rlvr/reward_engine.hpp"

namespace rlvr {

struct ClipConfig {
  double eps_low = 0.2;
  double eps_high = 0.28;  // decoupled upper bound; >= eps_low widens exploration

  void validate() const;
};

struct OptimConfig {
  double learning_rate = 1.0;
  double momentum = 0.9;
  double max_grad_norm = 0.5;
  double beta = 0.1;  // preference-loss temperature

  void validate() const;
};

/// One group of rollouts with its per-response advantages, plus the task
/// needed to featurize the responses.
struct AdvantagedGroup {
  const Task* task = nullptr;
  const RolloutGroup* group = nullptr;
  std::vector<double> advantages;
};

struct LossGrad {
  double loss = 0.0;
  Matrix grad;
};

/// Clipped sequence-level surrogate. Per response,
///   s_i = exp((logprob_cur - logprob_old) / |y_i|)
/// with logprob_cur recomputed under `params` and logprob_old taken from the
/// rollout (filled against the sampling-time snapshot). The objective term is
/// min(s_i * A_i, clip(s_i, 1 - eps_low, 1 + eps_high) * A_i), averaged
/// within each group and across groups; the returned loss is its negation.
/// Gradient flows only where the unclipped branch is selected. No KL term.
LossGrad gspo_loss_grad(const PolicyParams& params, const Vocab& vocab,
                        const FeatureLayout& layout,
                        std::span<const AdvantagedGroup> groups,
                        const ClipConfig& clip, const GenerationConfig& gen = {});

struct TokenizedPair {
  const Task* task = nullptr;
  std::vector<int> chosen_tokens;
  std::vector<int> rejected_tokens;
};

/// Reference-free preference loss:
///   -mean log sigmoid(beta * (log pi(y_w|x) - log pi(y_l|x))).
/// beta = 0 degenerates to a constant ln 2 with zero gradient.
LossGrad dpo_loss_grad(const PolicyParams& params, const Vocab& vocab,
                       const FeatureLayout& layout,
                       std::span<const TokenizedPair> pairs, double beta,
                       const GenerationConfig& gen = {});

/// Momentum-SGD state. Gradient-norm clipping happens before the velocity
/// update; frozen entries receive neither velocity nor weight changes; the
/// parameter version increments on every apply.
class SgdMomentum {
 public:
  void apply(PolicyParams& params, const Matrix& grad, const OptimConfig& cfg);
  void reset() { velocity_ = Matrix(); }

 private:
  Matrix velocity_;
};

/// Max relative central-difference error over a random subsample of at
/// least `min_coords` coordinates (all coordinates when fewer exist).
/// Relative error is |fd - g| / max(|fd|, |g|, 1e-3).
double grad_check(const std::function<double(const PolicyParams&)>& loss_fn,
                  const Matrix& analytic_grad, const PolicyParams& params,
                  double h, int min_coords = 200, std::uint64_t seed = 1234);

}  // namespace rlvr
