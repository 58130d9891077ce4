// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/optim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rlvr {

namespace {

double softplus(double x) {
  // log(1 + e^x) without overflow.
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void ClipConfig::validate() const {
  if (!(eps_low > 0.0) || !(eps_high > 0.0))
    throw std::invalid_argument("ClipConfig: clipping bounds must be positive");
}

void OptimConfig::validate() const {
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("OptimConfig: learning_rate must be positive");
  if (momentum < 0.0 || momentum >= 1.0)
    throw std::invalid_argument("OptimConfig: momentum must be in [0, 1)");
  if (!(max_grad_norm > 0.0))
    throw std::invalid_argument("OptimConfig: max_grad_norm must be positive");
  if (beta < 0.0)
    throw std::invalid_argument("OptimConfig: beta must be non-negative");
}

LossGrad gspo_loss_grad(const PolicyParams& params, const Vocab& vocab,
                        const FeatureLayout& layout,
                        std::span<const AdvantagedGroup> groups,
                        const ClipConfig& clip, const GenerationConfig& gen) {
  clip.validate();
  if (groups.empty()) throw std::invalid_argument("gspo_loss_grad: no groups");
  LossGrad out;
  out.grad = Matrix(static_cast<std::size_t>(params.vocab_size),
                    static_cast<std::size_t>(params.feature_dim));

  const double group_weight = 1.0 / static_cast<double>(groups.size());
  double objective = 0.0;

  for (const auto& ag : groups) {
    if (ag.task == nullptr || ag.group == nullptr)
      throw std::invalid_argument("gspo_loss_grad: null task or group");
    const auto& rollouts = ag.group->rollouts;
    if (rollouts.empty())
      throw std::invalid_argument("gspo_loss_grad: empty group");
    if (ag.advantages.size() != rollouts.size())
      throw std::invalid_argument(
          "gspo_loss_grad: rollout/advantage length mismatch");
    const double response_weight = 1.0 / static_cast<double>(rollouts.size());

    for (std::size_t i = 0; i < rollouts.size(); ++i) {
      const Rollout& r = rollouts[i];
      const double advantage = ag.advantages[i];
      if (!std::isfinite(advantage))
        throw std::invalid_argument("gspo_loss_grad: non-finite advantage");
      const double inv_len = 1.0 / static_cast<double>(r.length);
      const double lp_cur =
          logprob(params, vocab, layout, *ag.task, r.tokens, gen).total;
      const double ratio = std::exp((lp_cur - r.logprob_old) * inv_len);
      const double clipped =
          std::clamp(ratio, 1.0 - clip.eps_low, 1.0 + clip.eps_high);
      const double unclipped_term = ratio * advantage;
      const double clipped_term = clipped * advantage;
      const double term = std::min(unclipped_term, clipped_term);
      objective += group_weight * response_weight * term;

      // The constant clipped branch carries no gradient.
      const bool unclipped_selected = unclipped_term <= clipped_term;
      if (unclipped_selected && advantage != 0.0) {
        const double scale =
            -group_weight * response_weight * advantage * ratio * inv_len;
        accumulate_grad_logprob(params, vocab, layout, *ag.task, r.tokens,
                                scale, out.grad, gen);
      }
    }
  }
  out.loss = -objective;
  return out;
}

LossGrad dpo_loss_grad(const PolicyParams& params, const Vocab& vocab,
                       const FeatureLayout& layout,
                       std::span<const TokenizedPair> pairs, double beta,
                       const GenerationConfig& gen) {
  if (pairs.empty()) throw std::invalid_argument("dpo_loss_grad: empty pair list");
  if (beta < 0.0) throw std::invalid_argument("dpo_loss_grad: beta must be >= 0");
  LossGrad out;
  out.grad = Matrix(static_cast<std::size_t>(params.vocab_size),
                    static_cast<std::size_t>(params.feature_dim));
  const double pair_weight = 1.0 / static_cast<double>(pairs.size());
  for (const auto& pair : pairs) {
    if (pair.task == nullptr)
      throw std::invalid_argument("dpo_loss_grad: null task");
    if (pair.chosen_tokens.empty() || pair.rejected_tokens.empty())
      throw std::invalid_argument("dpo_loss_grad: empty tokenized response");
    const double lp_w =
        logprob(params, vocab, layout, *pair.task, pair.chosen_tokens, gen).total;
    const double lp_l =
        logprob(params, vocab, layout, *pair.task, pair.rejected_tokens, gen).total;
    const double margin = beta * (lp_w - lp_l);
    out.loss += pair_weight * softplus(-margin);
    const double coeff = pair_weight * beta * sigmoid(-margin);
    if (coeff != 0.0) {
      accumulate_grad_logprob(params, vocab, layout, *pair.task,
                              pair.chosen_tokens, -coeff, out.grad, gen);
      accumulate_grad_logprob(params, vocab, layout, *pair.task,
                              pair.rejected_tokens, coeff, out.grad, gen);
    }
  }
  return out;
}

void SgdMomentum::apply(PolicyParams& params, const Matrix& grad,
                        const OptimConfig& cfg) {
  cfg.validate();
  if (grad.rows() != params.weights.rows() || grad.cols() != params.weights.cols())
    throw std::invalid_argument("apply_update: gradient shape mismatch");
  if (!grad.all_finite()) {
    std::ostringstream msg;
    msg << "apply_update: non-finite gradient at version " << params.version;
    throw NumericError(msg.str());
  }
  if (velocity_.size() != grad.size())
    velocity_ = Matrix(grad.rows(), grad.cols());

  // Norm clipping over the unfrozen entries (frozen ones contribute nothing).
  double sq = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (params.frozen_mask[i]) continue;
    sq += grad.at_flat(i) * grad.at_flat(i);
  }
  const double norm = std::sqrt(sq);
  const double clip_scale =
      norm > cfg.max_grad_norm ? cfg.max_grad_norm / norm : 1.0;

  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (params.frozen_mask[i]) {
      velocity_.at_flat(i) = 0.0;
      continue;
    }
    velocity_.at_flat(i) =
        cfg.momentum * velocity_.at_flat(i) + clip_scale * grad.at_flat(i);
    params.weights.at_flat(i) -= cfg.learning_rate * velocity_.at_flat(i);
  }
  ++params.version;
  if (!params.weights.all_finite())
    throw NumericError("apply_update: weights became non-finite");
}

double grad_check(const std::function<double(const PolicyParams&)>& loss_fn,
                  const Matrix& analytic_grad, const PolicyParams& params,
                  double h, int min_coords, std::uint64_t seed) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check: h must be positive");
  const std::size_t n = params.weights.size();
  std::vector<std::size_t> coords;
  if (n <= static_cast<std::size_t>(min_coords)) {
    coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) coords[i] = i;
  } else {
    Rng rng(mix_seed(seed, 0x6C8EULL));
    std::vector<std::uint8_t> seen(n, 0);
    while (coords.size() < static_cast<std::size_t>(min_coords)) {
      const std::size_t i = rng.below(n);
      if (!seen[i]) {
        seen[i] = 1;
        coords.push_back(i);
      }
    }
  }
  PolicyParams probe = params;
  double max_rel = 0.0;
  for (std::size_t i : coords) {
    const double saved = probe.weights.at_flat(i);
    probe.weights.at_flat(i) = saved + h;
    const double up = loss_fn(probe);
    probe.weights.at_flat(i) = saved - h;
    const double down = loss_fn(probe);
    probe.weights.at_flat(i) = saved;
    const double fd = (up - down) / (2.0 * h);
    const double g = analytic_grad.at_flat(i);
    const double rel =
        std::abs(fd - g) / std::max({std::abs(fd), std::abs(g), 1e-3});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace rlvr
