// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// A tiny autoregressive categorical policy over a fixed token table:
// logits are a linear map of sparse features, so log-likelihoods and
// gradients are exact and finite-difference-checkable. Supports seeded
// sampling with redundancy truncation, snapshots, freezable parameter
// blocks, and a byte-exact binary checkpoint format.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlvr/common.hpp"
#include "rlvr/rollout.hpp"
#include "rlvr/task_forge.hpp"

namespace rlvr {

// ---------------------------------------------------------------------------
// Vocabulary: a fixed detokenization table.
// ---------------------------------------------------------------------------

class Vocab {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kAbstain = 2;
  static constexpr int kFirstResidue = 3;

  /// Tokens: <bos>, <eos>, <ABSTAIN>, one token per residue 0..modulus-1,
  /// then the filler words.
  Vocab(int modulus, std::vector<std::string> filler_words);

  int size() const { return static_cast<int>(surfaces_.size()); }
  int modulus() const { return modulus_; }
  const std::string& surface(int token) const;
  bool is_answer_token(int token) const;  // residue or abstain
  int residue_token(int residue) const;
  std::optional<int> token_of(const std::string& surface) const;

  /// Joins surfaces with single spaces; if the last token before EOS is an
  /// answer token it renders as \boxed{surface}, which is how a policy that
  /// follows the boxed-answer instruction terminates its replies.
  std::string detokenize(std::span<const int> tokens) const;

  /// Inverse of detokenize for canonical texts: whitespace-split words map
  /// to their tokens, a trailing \boxed{X} maps to X's answer token.
  /// Unknown words are an error. No EOS is appended.
  std::vector<int> tokenize(const std::string& text) const;

 private:
  int modulus_;
  std::vector<std::string> surfaces_;
};

// ---------------------------------------------------------------------------
// Featurization. Layout, in column order:
//   [0, hash_dim)          one-hot bucket of FNV-1a(prompt, context)
//   [hash_dim, hash_dim+V)  one-hot of the last prefix token (BOS if empty)
//   hash_dim + V            1.0 when the task carries evidence context
//   hash_dim + V + 1        bias, always 1.0
// ---------------------------------------------------------------------------

struct FeatureLayout {
  int hash_dim = 4096;
  int vocab_size = 0;

  int feature_dim() const { return hash_dim + vocab_size + 2; }
  int context_flag_index() const { return hash_dim + vocab_size; }
  int bias_index() const { return hash_dim + vocab_size + 1; }
};

struct FeatureVec {
  std::vector<std::pair<int, double>> entries;  // sparse (index, value)

  std::vector<double> to_dense(int feature_dim) const;
};

FeatureVec featurize(const Task& task, std::span<const int> prefix,
                     const FeatureLayout& layout);

/// Bucket index of the hashed prompt/context block, exposed for collision
/// diagnostics.
int feature_bucket(const Task& task, const FeatureLayout& layout);

// ---------------------------------------------------------------------------
// Parameters.
// ---------------------------------------------------------------------------

struct PolicyParams {
  int vocab_size = 0;
  int feature_dim = 0;
  Matrix weights;                // vocab_size x feature_dim
  std::vector<std::uint8_t> frozen_mask;  // one flag per weight, row-major
  std::uint64_t version = 0;

  bool operator==(const PolicyParams&) const = default;
};

/// Weights i.i.d. uniform in [-0.01, 0.01] from the seeded generator;
/// nothing frozen; version 0.
PolicyParams init_policy(int vocab_size, int feature_dim, std::uint64_t seed);

/// Immutable value copy; later updates to the live policy never touch it.
PolicyParams snapshot(const PolicyParams& params);

/// Marks the hashed prompt/context feature block frozen (the desk-scale
/// analog of freezing the perception encoder while training the rest).
void freeze_prompt_hash_block(PolicyParams& params, const FeatureLayout& layout);

// ---------------------------------------------------------------------------
// Likelihoods, sampling, gradients.
//
// `temperature` divides the logits and `eos_logit_bias` is added to the EOS
// logit beforehand; both are part of the generation distribution, and every
// routine below uses the same tempered, biased logits so importance ratios
// and gradients stay self-consistent. Defaults (1.0, 0.0) give the plain
// softmax policy.
// ---------------------------------------------------------------------------

struct GenerationConfig {
  double temperature = 1.0;
  double eos_logit_bias = 0.0;
};

struct RedundancyConfig {
  int window = 8;       // maximum repeat-period checked
  int max_repeats = 4;  // consecutive repeats that trigger truncation; 0 = off
};

struct LogprobResult {
  double total = 0.0;
  std::vector<double> per_token;
};

/// Raw logits for the next token given the prefix (bias applied, no
/// temperature).
std::vector<double> next_token_logits(const PolicyParams& params,
                                      const Vocab& vocab,
                                      const FeatureLayout& layout,
                                      const Task& task,
                                      std::span<const int> prefix,
                                      const GenerationConfig& gen = {});

/// Exact autoregressive log-likelihood of `tokens` under the policy.
/// Every token must be in-vocabulary and the sequence non-empty.
LogprobResult logprob(const PolicyParams& params, const Vocab& vocab,
                      const FeatureLayout& layout, const Task& task,
                      std::span<const int> tokens,
                      const GenerationConfig& gen = {});

/// Exact gradient of the total log-likelihood with respect to the weights:
/// sum over steps of (onehot(token) - softmax) outer phi, scaled by 1/T.
Matrix grad_logprob(const PolicyParams& params, const Vocab& vocab,
                    const FeatureLayout& layout, const Task& task,
                    std::span<const int> tokens,
                    const GenerationConfig& gen = {});

/// As grad_logprob but accumulates scale * gradient into `acc`.
void accumulate_grad_logprob(const PolicyParams& params, const Vocab& vocab,
                             const FeatureLayout& layout, const Task& task,
                             std::span<const int> tokens, double scale,
                             Matrix& acc, const GenerationConfig& gen = {});

/// Ancestral sampling until EOS or max_len. When any trailing pattern of
/// period <= redundancy.window repeats consecutively at least
/// redundancy.max_repeats times, generation truncates and the rollout is
/// flagged. logprob_cur is filled under the same tempered distribution the
/// tokens were drawn from; logprob_old is left zero for the caller.
Rollout sample(const PolicyParams& params, const Vocab& vocab,
               const FeatureLayout& layout, const Task& task, int max_len,
               double temperature, std::uint64_t seed,
               const RedundancyConfig& redundancy = {},
               double eos_logit_bias = 0.0);

/// Greedy (argmax) decode under the same generation distribution.
Rollout greedy_decode(const PolicyParams& params, const Vocab& vocab,
                      const FeatureLayout& layout, const Task& task,
                      int max_len, const RedundancyConfig& redundancy = {},
                      double eos_logit_bias = 0.0);

// ---------------------------------------------------------------------------
// Checkpoints: flat binary record, little-endian. Header (magic, V, F,
// version), row-major weights as 64-bit floats, frozen bitmask packed
// LSB-first. Round-trips byte-exactly.
// ---------------------------------------------------------------------------

void save_checkpoint(const PolicyParams& params, const std::string& path);
PolicyParams load_checkpoint(const std::string& path);
std::vector<std::uint8_t> checkpoint_bytes(const PolicyParams& params);
PolicyParams params_from_checkpoint_bytes(std::span<const std::uint8_t> bytes);

}  // namespace rlvr
