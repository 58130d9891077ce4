// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Boxed-answer extraction and the binary exact-match reward.

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rlvr {

/// Canonical ground-truth marker for "unanswerable without the missing
/// evidence". A response abstains either by boxing this sentinel or by
/// containing one of the refusal phrases in `kRefusalPhrases`.
inline constexpr std::string_view kAbstainSentinel = "<ABSTAIN>";

enum class VerdictReason {
  kMatch,
  kMismatch,
  kNoBox,
  kAbstainMatch,
  kAbstainMismatch,
};

struct Verdict {
  std::optional<std::string> extracted;
  int reward = 0;  // 0 or 1
  VerdictReason reason = VerdictReason::kNoBox;
};

std::string_view to_string(VerdictReason reason);

/// Content of the last `\boxed{...}` occurrence with balanced braces,
/// whitespace-trimmed. Unbalanced braces in the last box count as absent.
std::optional<std::string> extract_boxed(std::string_view text);

/// Canonicalization applied to both sides of the match: trim, collapse
/// internal whitespace runs to one space, strip leading zeros of pure
/// integers, ASCII case-fold.
std::string normalize_answer(std::string_view raw);

/// Binary verifiable reward. `ground_truth` must be non-empty. Reward is 1
/// iff the normalized extraction equals the normalized ground truth; when
/// the ground truth is the abstain sentinel, an unboxed refusal phrase also
/// counts as a match.
Verdict verify(std::string_view response, std::string_view ground_truth);

}  // namespace rlvr
