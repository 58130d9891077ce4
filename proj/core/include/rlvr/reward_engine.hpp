// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Reward and advantage computations: the binary Pass@1 reward lift, the
// closed-form Pass@k group statistics and advantages, diversity scoring
// with multiplicative fusion, the overlong-response penalty, and the
// phase-dependent hybrid combination used by Stage-1 training.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlvr/rollout.hpp"
#include "rlvr/verifier.hpp"

namespace rlvr {

/// N responses sampled for one task, with their binary verifier rewards.
struct RolloutGroup {
  std::string task_id;
  std::vector<Rollout> rollouts;
  std::vector<int> correctness;  // correctness[i] is rollout i's reward

  int n_rollout() const { return static_cast<int>(rollouts.size()); }
  int n_neg() const {
    int n = 0;
    for (int r : correctness) n += (r == 0);
    return n;
  }
  bool all_correct() const { return n_neg() == 0; }
  bool all_wrong() const { return n_neg() == n_rollout(); }
};

/// Closed-form Pass@k statistics of a group: the group mean reward, its
/// Bernoulli standard deviation, and the positive/negative advantages.
struct GroupStats {
  int n_rollout = 0;
  int n_neg = 0;
  int k = 1;
  double r_bar_group = 0.0;
  double sigma_group = 0.0;
  double a_pos = 0.0;
  double a_neg = 0.0;
  bool degenerate = false;  // sigma == 0; advantages forced to zero
};

using DistanceFn =
    std::function<double(const std::string&, const std::string&)>;

struct DiversityConfig {
  DistanceFn distance;          // defaults to trigram_cosine_distance
  double norm_lo = 0.5;         // affine normalization range for Norm(Div)
  double norm_hi = 1.0;
  double similarity_threshold = 0.2;  // tau: d <= tau clusters together

  void validate() const;
  double measure(const std::string& a, const std::string& b) const;
};

struct LengthConfig {
  int l_max = 512;   // maximum permitted output length, tokens
  int l_soft = 128;  // soft redundancy margin, tokens

  void validate() const;
};

enum class RewardPhase { kEarlyPassK, kLateDiversity };

struct AdvantageVector {
  std::vector<double> values;
  bool degenerate = false;
};

/// Identity lift of a verifier verdict into the reward algebra.
int pass1_reward(const Verdict& verdict);

/// Exact binomial count C(n, k) in doubles (exact for the n <= 64 range
/// used here; computed with integer-preserving multiply/divide steps).
double binomial(int n, int k);

/// Closed-form group mean/std for Pass@k plus the advantages. Requires
/// 1 <= k <= n_rollout and 0 <= n_neg <= n_rollout.
GroupStats passk_stats(int n_rollout, int n_neg, int k);

/// Positive/negative advantages from the group statistics:
/// a_pos = (1 - r_bar) / sigma, a_neg = -r_bar / sigma. Requires
/// stats.sigma_group > 0; degenerate groups must be handled by the caller
/// (passk_stats marks them and zeroes the advantages).
std::pair<double, double> passk_advantages(const GroupStats& stats);

/// Per-response mean pairwise distance to the rest of the group.
std::vector<double> diversity_scores(const std::vector<std::string>& responses,
                                     const DiversityConfig& cfg);

/// Multiplicative fusion of binary rewards with normalized diversity scores.
/// Norm maps the group's scores affinely from [min, max] onto
/// [norm_lo, norm_hi]; an all-equal group maps to norm_hi.
std::vector<double> fuse_diversity(const std::vector<int>& rewards,
                                   const std::vector<double>& div,
                                   const DiversityConfig& cfg);

/// Mean-centered advantages of the fused rewards.
std::vector<double> diversity_advantages(const std::vector<double>& r_div);

/// Overlong-response penalty in [-1, 0]: zero until l_max - l_soft, linear
/// down to -1 at l_max, -1 beyond.
double length_reward(int length, const LengthConfig& cfg);

/// Phase-dependent advantage of a whole group, with the length term added
/// as w_len * length_reward per response.
AdvantageVector hybrid_advantage(const RolloutGroup& group, RewardPhase phase,
                                 int k, const DiversityConfig& div_cfg,
                                 const LengthConfig& len_cfg, double w_len);

/// Number of semantically distinct responses under greedy clustering:
/// a response joins the first cluster whose representative (its first
/// member) lies within the similarity threshold, else founds a new one.
int distinct_count(const std::vector<std::string>& responses,
                   const DiversityConfig& cfg);

/// Default semantic distance: cosine distance between character-trigram
/// count vectors. Deterministic and model-free; texts shorter than three
/// characters contribute themselves as a single gram.
double trigram_cosine_distance(const std::string& a, const std::string& b);

}  // namespace rlvr
