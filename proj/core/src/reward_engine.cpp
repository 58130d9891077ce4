// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/reward_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace rlvr {

void DiversityConfig::validate() const {
  if (norm_lo < 0.0 || norm_lo > norm_hi)
    throw std::invalid_argument("DiversityConfig: need 0 <= norm_lo <= norm_hi");
  if (similarity_threshold < 0.0)
    throw std::invalid_argument("DiversityConfig: similarity_threshold must be >= 0");
}

double DiversityConfig::measure(const std::string& a, const std::string& b) const {
  return distance ? distance(a, b) : trigram_cosine_distance(a, b);
}

void LengthConfig::validate() const {
  if (!(0 < l_soft && l_soft < l_max))
    throw std::invalid_argument("LengthConfig: need 0 < l_soft < l_max");
}

int pass1_reward(const Verdict& verdict) { return verdict.reward; }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    // Multiply-then-divide keeps every intermediate an exact integer.
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(result);
}

GroupStats passk_stats(int n_rollout, int n_neg, int k) {
  if (k < 1 || k > n_rollout)
    throw std::invalid_argument("passk_stats: need 1 <= k <= n_rollout");
  if (n_neg < 0 || n_neg > n_rollout)
    throw std::invalid_argument("passk_stats: need 0 <= n_neg <= n_rollout");
  GroupStats s;
  s.n_rollout = n_rollout;
  s.n_neg = n_neg;
  s.k = k;
  s.r_bar_group = 1.0 - binomial(n_neg, k) / binomial(n_rollout, k);
  s.sigma_group = std::sqrt(s.r_bar_group * (1.0 - s.r_bar_group));
  if (s.sigma_group > 0.0) {
    std::tie(s.a_pos, s.a_neg) = passk_advantages(s);
  } else {
    s.degenerate = true;
    s.a_pos = 0.0;
    s.a_neg = 0.0;
  }
  return s;
}

std::pair<double, double> passk_advantages(const GroupStats& stats) {
  if (!(stats.sigma_group > 0.0))
    throw std::invalid_argument("passk_advantages: degenerate group (sigma == 0)");
  const double a_pos = (1.0 - stats.r_bar_group) / stats.sigma_group;
  const double a_neg = -stats.r_bar_group / stats.sigma_group;
  return {a_pos, a_neg};
}

std::vector<double> diversity_scores(const std::vector<std::string>& responses,
                                     const DiversityConfig& cfg) {
  const std::size_t n = responses.size();
  if (n < 2)
    throw std::invalid_argument("diversity_scores: need at least 2 responses");
  std::vector<double> div(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cfg.measure(responses[i], responses[j]);
      div[i] += d;
      div[j] += d;
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (double& v : div) v /= denom;
  return div;
}

std::vector<double> fuse_diversity(const std::vector<int>& rewards,
                                   const std::vector<double>& div,
                                   const DiversityConfig& cfg) {
  if (rewards.size() != div.size())
    throw std::invalid_argument("fuse_diversity: length mismatch");
  const auto [lo_it, hi_it] = std::minmax_element(div.begin(), div.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> fused(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const double norm =
        hi > lo ? cfg.norm_lo + (cfg.norm_hi - cfg.norm_lo) * (div[i] - lo) / (hi - lo)
                : cfg.norm_hi;
    fused[i] = static_cast<double>(rewards[i]) * norm;
  }
  return fused;
}

std::vector<double> diversity_advantages(const std::vector<double>& r_div) {
  if (r_div.empty())
    throw std::invalid_argument("diversity_advantages: empty input");
  double mean = 0.0;
  for (double v : r_div) mean += v;
  mean /= static_cast<double>(r_div.size());
  std::vector<double> adv(r_div.size());
  for (std::size_t i = 0; i < r_div.size(); ++i) adv[i] = r_div[i] - mean;
  return adv;
}

double length_reward(int length, const LengthConfig& cfg) {
  if (length < 0) throw std::invalid_argument("length_reward: negative length");
  const int cutoff = cfg.l_max - cfg.l_soft;
  if (length <= cutoff) return 0.0;
  if (length <= cfg.l_max)
    return static_cast<double>(cutoff - length) / static_cast<double>(cfg.l_soft);
  return -1.0;
}

AdvantageVector hybrid_advantage(const RolloutGroup& group, RewardPhase phase,
                                 int k, const DiversityConfig& div_cfg,
                                 const LengthConfig& len_cfg, double w_len) {
  const int n = group.n_rollout();
  if (n < 2) throw std::invalid_argument("hybrid_advantage: group size must be >= 2");
  if (static_cast<int>(group.correctness.size()) != n)
    throw std::invalid_argument("hybrid_advantage: correctness size mismatch");

  AdvantageVector out;
  out.values.assign(static_cast<std::size_t>(n), 0.0);

  if (phase == RewardPhase::kEarlyPassK) {
    const GroupStats stats = passk_stats(n, group.n_neg(), k);
    if (stats.degenerate) {
      out.degenerate = true;  // advantage signal vanished; zero advantages
    } else {
      for (int i = 0; i < n; ++i)
        out.values[static_cast<std::size_t>(i)] =
            group.correctness[static_cast<std::size_t>(i)] ? stats.a_pos
                                                           : stats.a_neg;
    }
  } else {
    std::vector<std::string> texts;
    texts.reserve(static_cast<std::size_t>(n));
    for (const auto& r : group.rollouts) texts.push_back(r.text);
    const auto div = diversity_scores(texts, div_cfg);
    const auto fused = fuse_diversity(group.correctness, div, div_cfg);
    out.values = diversity_advantages(fused);
  }

  if (w_len != 0.0) {
    for (int i = 0; i < n; ++i)
      out.values[static_cast<std::size_t>(i)] +=
          w_len * length_reward(group.rollouts[static_cast<std::size_t>(i)].length,
                                len_cfg);
  }
  return out;
}

int distinct_count(const std::vector<std::string>& responses,
                   const DiversityConfig& cfg) {
  if (responses.empty())
    throw std::invalid_argument("distinct_count: empty input");
  std::vector<const std::string*> representatives;
  for (const auto& r : responses) {
    bool joined = false;
    for (const auto* rep : representatives) {
      if (cfg.measure(*rep, r) <= cfg.similarity_threshold) {
        joined = true;
        break;
      }
    }
    if (!joined) representatives.push_back(&r);
  }
  return static_cast<int>(representatives.size());
}

double trigram_cosine_distance(const std::string& a, const std::string& b) {
  const auto grams = [](const std::string& s) {
    std::unordered_map<std::string, double> counts;
    if (s.size() < 3) {
      if (!s.empty()) counts[s] += 1.0;
      return counts;
    }
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) counts[s.substr(i, 3)] += 1.0;
    return counts;
  };
  const auto ca = grams(a);
  const auto cb = grams(b);
  if (ca.empty() && cb.empty()) return 0.0;
  if (ca.empty() || cb.empty()) return 1.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [g, v] : ca) {
    na += v * v;
    const auto it = cb.find(g);
    if (it != cb.end()) dot += v * it->second;
  }
  for (const auto& [g, v] : cb) nb += v * v;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace rlvr
