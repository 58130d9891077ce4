// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rlvr {

/// One sampled response. Log-probabilities are exact sums of per-step
/// log-softmax terms and can be recomputed bit-for-bit from the tokens.
struct Rollout {
  std::string task_id;
  std::vector<int> tokens;  // includes the terminating EOS when one was drawn
  std::string text;         // fixed-table detokenization of `tokens`
  int length = 0;           // |y| = tokens.size()
  double logprob_old = 0.0;
  double logprob_cur = 0.0;
  bool truncated_by_redundancy = false;
};

}  // namespace rlvr
