// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "rlvr/common.hpp"
#include "rlvr/task_forge.hpp"
#include "rlvr/verifier.hpp"
#include "support/oracles.hpp"

using namespace rlvr;

TEST_CASE("extract_boxed takes the last balanced box") {
  CHECK(extract_boxed("so the answer is \\boxed{42}") == "42");
  CHECK(extract_boxed("\\boxed{1} ... \\boxed{7}") == "7");
  CHECK(extract_boxed("no box here") == std::nullopt);
  CHECK(extract_boxed("") == std::nullopt);
}

TEST_CASE("extract_boxed handles nesting, trimming and unbalanced braces") {
  CHECK(extract_boxed("\\boxed{a{b}c}") == "a{b}c");
  CHECK(extract_boxed("\\boxed{  42  }") == "42");
  CHECK(extract_boxed("\\boxed{unclosed") == std::nullopt);
  CHECK(extract_boxed("\\boxed{ok} then \\boxed{broken") == std::nullopt);
  CHECK(extract_boxed("\\boxed{}") == "");
}

TEST_CASE("verify normalizes like the independent canonicalizer") {
  const Verdict v = verify("\\boxed{007}", "7");
  CHECK(v.reward == 1);
  CHECK(v.reason == VerdictReason::kMatch);
  CHECK(oracles::canonicalize("007") == oracles::canonicalize("7"));

  // Cross-check the production normalizer against the oracle on a spread of
  // shapes: signs, zeros, case, internal whitespace.
  for (const std::string s :
       {"007", "-007", "+7", "0", "-0", "  A  B ", "Hello World", "7.5",
        "abc007", "00", "000123", "12 34"}) {
    CAPTURE(s);
    CHECK(normalize_answer(s) == oracles::canonicalize(s));
  }
}

TEST_CASE("verify rewards exactly per the match rule") {
  CHECK(verify("\\boxed{8}", "7").reward == 0);
  CHECK(verify("\\boxed{8}", "7").reason == VerdictReason::kMismatch);
  CHECK(verify("no box", "7").reason == VerdictReason::kNoBox);
  CHECK(verify("no box", "7").reward == 0);
  CHECK(verify("\\boxed{Paris}", "paris").reward == 1);
}

TEST_CASE("abstain sentinel semantics") {
  const auto gt = std::string(kAbstainSentinel);
  const Verdict boxed = verify("\\boxed{<ABSTAIN>}", gt);
  CHECK(boxed.reward == 1);
  CHECK(boxed.reason == VerdictReason::kAbstainMatch);
  CHECK(verify("\\boxed{<abstain>}", gt).reward == 1);  // case-insensitive
  CHECK(verify("I cannot answer without the image.", gt).reward == 1);
  CHECK(verify("There is not enough information here.", gt).reward == 1);
  const Verdict fabricated = verify("\\boxed{3}", gt);
  CHECK(fabricated.reward == 0);
  CHECK(fabricated.reason == VerdictReason::kAbstainMismatch);
  CHECK(verify("sure, it is three", gt).reward == 0);
  // A boxed abstention against a concrete ground truth is a plain mismatch.
  CHECK(verify("\\boxed{<ABSTAIN>}", "7").reward == 0);
}

TEST_CASE("verify requires a non-empty ground truth") {
  CHECK_THROWS_AS(verify("\\boxed{1}", ""), std::invalid_argument);
}

TEST_CASE("reward is binary and reason implies reward") {
  const char* responses[] = {"\\boxed{1}", "\\boxed{07}", "junk", "",
                             "\\boxed{<ABSTAIN>}", "cannot be determined"};
  const char* truths[] = {"1", "7", "<ABSTAIN>", "x y"};
  for (const char* r : responses) {
    for (const char* g : truths) {
      const Verdict v = verify(r, g);
      CHECK((v.reward == 0 || v.reward == 1));
      const bool positive = v.reason == VerdictReason::kMatch ||
                            v.reason == VerdictReason::kAbstainMatch;
      CHECK(v.reward == (positive ? 1 : 0));
    }
  }
}

TEST_CASE("verify is invariant to trailing whitespace of the response") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::string answer = std::to_string(rng.below(1000));
    std::string response = "\\boxed{" + answer + "}";
    std::string padded = response;
    for (std::uint64_t i = 0; i < rng.below(5); ++i) padded += " \t\n";
    CHECK(verify(response, "7").reward == verify(padded, "7").reward);
    CHECK(verify(response, answer).reward == 1);
  }
}

TEST_CASE("exhaustive single-token check over generated tasks, modulus <= 16") {
  for (int modulus : {2, 5, 10, 16}) {
    const auto tasks = gen_arith_tasks(40, modulus, 271828);
    for (const auto& task : tasks) {
      CHECK(verify("\\boxed{" + task.ground_truth + "}", task.ground_truth)
                .reward == 1);
      for (int wrong = 0; wrong < modulus; ++wrong) {
        const std::string w = std::to_string(wrong);
        if (w == task.ground_truth) continue;
        CHECK(verify("\\boxed{" + w + "}", task.ground_truth).reward == 0);
      }
    }
  }
}
