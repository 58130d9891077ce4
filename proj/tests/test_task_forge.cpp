// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "rlvr/task_forge.hpp"
#include "rlvr/verifier.hpp"

using namespace rlvr;

namespace {

// One-line arithmetic oracle: re-parse "(a op b) mod m" out of the prompt.
long long recompute_from_prompt(const std::string& prompt) {
  long long a = 0, b = 0, m = 0;
  char op = 0;
  REQUIRE(std::sscanf(prompt.c_str(), "Compute (%lld %c %lld) mod %lld.", &a,
                      &op, &b, &m) == 4);
  const long long raw = op == '+' ? a + b : op == '-' ? a - b : a * b;
  return ((raw % m) + m) % m;
}

}  // namespace

TEST_CASE("gen_arith_tasks ground truths agree with the arithmetic oracle") {
  for (std::uint64_t seed : {7ULL, 42ULL, 123456ULL}) {
    const auto tasks = gen_arith_tasks(100, 10, seed);
    REQUIRE(tasks.size() == 100);
    for (const auto& t : tasks) {
      CHECK(t.ground_truth == std::to_string(recompute_from_prompt(t.prompt)));
      CHECK(t.prompt.ends_with(kBoxedInstruction));
      CHECK_FALSE(t.ground_truth.empty());
      CHECK_FALSE(t.requires_context);
    }
  }
}

TEST_CASE("gen_arith_tasks is a pure function of (count, modulus, seed)") {
  const auto a = gen_arith_tasks(100, 10, 7);
  const auto b = gen_arith_tasks(100, 10, 7);
  CHECK(a == b);
  const auto c = gen_arith_tasks(100, 10, 8);
  CHECK(a != c);
}

TEST_CASE("gen_arith_tasks rejects bad input") {
  CHECK_THROWS_AS(gen_arith_tasks(0, 10, 7), std::invalid_argument);
  CHECK_THROWS_AS(gen_arith_tasks(5, 1, 7), std::invalid_argument);
}

TEST_CASE("to_cloze strips options and keeps the correct content") {
  const Task t = to_cloze("Capital of France?",
                          {{"A", "Paris"}, {"B", "Rome"}}, "A");
  CHECK(t.prompt.starts_with("Capital of France?"));
  CHECK(t.prompt.ends_with(kBoxedInstruction));
  CHECK(t.prompt.find("Rome") == std::string::npos);
  CHECK(t.prompt.find("A:") == std::string::npos);
  CHECK(t.ground_truth == "Paris");

  const Task arith = to_cloze("2+2?", {{"A", "4"}, {"B", "5"}}, "A");
  CHECK(arith.ground_truth == "4");
}

TEST_CASE("to_cloze errors") {
  CHECK_THROWS_AS(to_cloze("q", {{"A", "x"}, {"B", "y"}}, "C"),
                  std::invalid_argument);
  CHECK_THROWS_AS(to_cloze("q", {{"A", "same"}, {"B", "same"}}, "A"),
                  std::invalid_argument);
}

TEST_CASE("ablate_context produces an abstain variant exactly once") {
  const auto tasks = gen_context_tasks(4, 10, 11);
  const Task& original = tasks.front();
  REQUIRE(original.context.has_value());

  const Task ablated = ablate_context(original);
  CHECK_FALSE(ablated.context.has_value());
  CHECK(ablated.requires_context);
  CHECK(ablated.ground_truth == std::string(kAbstainSentinel));
  CHECK(ablated.id == original.id + "#ablated");

  CHECK_THROWS_AS(ablate_context(ablated), std::invalid_argument);

  Task no_context;
  no_context.id = "t";
  no_context.prompt = "p";
  no_context.ground_truth = "1";
  no_context.requires_context = false;
  CHECK_THROWS_AS(ablate_context(no_context), std::invalid_argument);
}

TEST_CASE("ablated variants reward abstention and punish fabrication") {
  const auto tasks = gen_context_tasks(1, 10, 19);
  const Task ablated = ablate_context(tasks.front());
  CHECK(verify("\\boxed{3}", ablated.ground_truth).reward == 0);
  CHECK(verify("\\boxed{<ABSTAIN>}", ablated.ground_truth).reward == 1);
}

TEST_CASE("make_preference_pairs construction rules") {
  auto tasks = gen_arith_tasks(20, 10, 5);
  const auto ctx = gen_context_tasks(4, 10, 5);
  for (const auto& t : ctx) tasks.push_back(ablate_context(t));

  const auto pairs = make_preference_pairs(tasks, 99);
  REQUIRE(pairs.size() == tasks.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const auto& t = tasks[i];
    CHECK(p.chosen != p.rejected);
    if (p.attribute == PairAttribute::kConciseness) {
      CHECK(p.chosen.size() * 3 <= p.rejected.size());
      CHECK(extract_boxed(p.chosen) == t.ground_truth);
      CHECK(extract_boxed(p.rejected) == t.ground_truth);
    } else {
      CHECK(p.attribute == PairAttribute::kAbstention);
      CHECK(extract_boxed(p.chosen) == std::string(kAbstainSentinel));
      CHECK(extract_boxed(p.rejected).has_value());
      CHECK(extract_boxed(p.rejected) != std::string(kAbstainSentinel));
    }
  }

  CHECK(pairs == make_preference_pairs(tasks, 99));
  CHECK_THROWS_AS(make_preference_pairs({}, 1), std::invalid_argument);
}

TEST_CASE("mix_text_only inserts exactly floor(fraction * n) text-only tasks") {
  const auto base = gen_context_tasks(100, 10, 3);

  const auto none = mix_text_only(base, 0.0, 1);
  CHECK(none.size() == 100);

  const auto mixed = mix_text_only(base, 0.25, 1);
  CHECK(mixed.size() == 125);
  int text_only = 0;
  for (const auto& t : mixed)
    if (!t.requires_context) ++text_only;
  CHECK(text_only == 25);
  // Text-only items carry verifiable ground truths too.
  for (const auto& t : mixed) {
    if (t.tags.contains("text-only-mix")) {
      CHECK((t.ground_truth == "0" || t.ground_truth == "1"));
      CHECK(t.prompt.ends_with(kBoxedInstruction));
    }
  }

  CHECK(mix_text_only({}, 1.0, 1).empty());
  CHECK_THROWS_AS(mix_text_only(base, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(mix_text_only(base, -0.1, 1), std::invalid_argument);

  CHECK(mix_text_only(base, 0.25, 1) == mixed);  // deterministic interleave
}

TEST_CASE("probe tasks carry at least three accepted answers") {
  const auto probes = gen_probe_tasks(10, 10, 3, 77);
  for (const auto& p : probes) {
    const auto answers = accepted_answers(p);
    CHECK(answers.size() >= 3);
    for (const auto& a : answers) {
      const int v = std::stoi(a);
      CHECK(v % 3 == std::stoi(answers.front()) % 3);
    }
  }
}

TEST_CASE("task NDJSON round-trips exactly") {
  auto tasks = gen_arith_tasks(20, 10, 31);
  auto ctx = gen_context_tasks(5, 10, 31, 0.4);
  tasks.insert(tasks.end(), ctx.begin(), ctx.end());
  tasks.push_back(ablate_context(ctx.front()));
  auto probes = gen_probe_tasks(3, 10, 3, 31);
  tasks.insert(tasks.end(), probes.begin(), probes.end());

  for (const auto& t : tasks) {
    const Task back = task_from_json(task_to_json(t));
    CHECK(back == t);
  }

  const auto path = std::filesystem::temp_directory_path() / "rlvr_tasks.jsonl";
  save_tasks_ndjson(tasks, path.string());
  CHECK(load_tasks_ndjson(path.string()) == tasks);
  std::filesystem::remove(path);
}

TEST_CASE("task NDJSON rejects unknown fields") {
  CHECK_THROWS_AS(task_from_json(R"({"id":"x","prompt":"p","ground_truth":"1",)"
                                 R"("requires_context":false,"tags":[],)"
                                 R"("tier":"unknown","is_text_only":true,)"
                                 R"("bogus":1})"),
                  std::invalid_argument);
}

TEST_CASE("preference pair NDJSON round-trips") {
  const auto tasks = gen_arith_tasks(5, 10, 5);
  const auto pairs = make_preference_pairs(tasks, 5);
  for (const auto& p : pairs) CHECK(pair_from_json(pair_to_json(p)) == p);
}
