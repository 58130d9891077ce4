// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "rlvr/common.hpp"
#include "rlvr/reward_engine.hpp"
#include "support/oracles.hpp"

using namespace rlvr;

namespace {

/// Table-driven distance over labeled responses, for pinning examples.
DistanceFn table_distance(std::map<std::pair<std::string, std::string>, double> d) {
  return [table = std::move(d)](const std::string& a, const std::string& b) {
    if (a == b) return 0.0;
    auto it = table.find({a, b});
    if (it == table.end()) it = table.find({b, a});
    REQUIRE(it != table.end());
    return it->second;
  };
}

RolloutGroup make_group(const std::vector<int>& correctness,
                        const std::vector<int>& lengths,
                        const std::vector<std::string>& texts = {}) {
  RolloutGroup g;
  g.task_id = "t";
  for (std::size_t i = 0; i < correctness.size(); ++i) {
    Rollout r;
    r.task_id = "t";
    r.length = lengths[i];
    r.text = texts.empty() ? "resp" + std::to_string(i) : texts[i];
    g.rollouts.push_back(std::move(r));
  }
  g.correctness = correctness;
  return g;
}

}  // namespace

TEST_CASE("pass1_reward is the identity lift of the verdict") {
  CHECK(pass1_reward({std::nullopt, 1, VerdictReason::kMatch}) == 1);
  CHECK(pass1_reward({std::nullopt, 0, VerdictReason::kMismatch}) == 0);
  CHECK(pass1_reward({std::nullopt, 1, VerdictReason::kAbstainMatch}) == 1);
}

TEST_CASE("passk_stats frozen examples") {
  SUBCASE("n=4, n_neg=2, k=2") {
    const GroupStats s = passk_stats(4, 2, 2);
    CHECK(s.r_bar_group == doctest::Approx(1.0 - 1.0 / 6.0).epsilon(1e-12));
    CHECK(s.sigma_group == doctest::Approx(0.372678).epsilon(1e-5));
    CHECK(s.a_pos == doctest::Approx(0.447214).epsilon(1e-5));
    CHECK(s.a_neg == doctest::Approx(-2.236068).epsilon(1e-5));
  }
  SUBCASE("k=1 reduces to the fraction correct") {
    const GroupStats s = passk_stats(4, 2, 1);
    CHECK(s.r_bar_group == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.sigma_group == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.a_pos == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.a_neg == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("all-correct group is degenerate") {
    const GroupStats s = passk_stats(4, 0, 2);
    CHECK(s.r_bar_group == 1.0);
    CHECK(s.sigma_group == 0.0);
    CHECK(s.degenerate);
    CHECK(s.a_pos == 0.0);
    CHECK(s.a_neg == 0.0);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(passk_stats(4, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(passk_stats(4, 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(passk_stats(4, 2, 0), std::invalid_argument);
  }
}

TEST_CASE("passk_advantages rejects degenerate groups") {
  GroupStats s;
  s.sigma_group = 0.0;
  CHECK_THROWS_AS(passk_advantages(s), std::invalid_argument);
}

TEST_CASE("closed forms match the exhaustive subset enumeration, 1e-9") {
  for (int n = 2; n <= 8; ++n) {
    for (int n_neg = 1; n_neg <= n - 1; ++n_neg) {
      for (int k = 1; k <= n; ++k) {
        CAPTURE(n);
        CAPTURE(n_neg);
        CAPTURE(k);
        const auto oracle = oracles::enumerate_passk(n, n_neg, k);
        const GroupStats s = passk_stats(n, n_neg, k);
        CHECK(std::abs(s.r_bar_group - oracle.mean) < 1e-9);
        CHECK(std::abs(s.sigma_group - oracle.stddev) < 1e-9);
        if (oracle.stddev > 0.0) {
          CHECK(std::abs(s.a_pos - oracle.a_pos) < 1e-9);
          CHECK(std::abs(s.a_neg - oracle.a_neg) < 1e-9);
        } else {
          CHECK(s.degenerate);
        }
      }
    }
  }
}

TEST_CASE("sign and one-sidedness monotonicity of the advantages") {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      double prev_pos = -1.0;
      double prev_neg_mag = -1.0;
      for (int n_neg = 1; n_neg <= n - 1; ++n_neg) {
        const GroupStats s = passk_stats(n, n_neg, k);
        if (s.degenerate) continue;
        CHECK(s.a_pos >= 0.0);
        CHECK(s.a_neg <= 0.0);
        // More negatives: rare positives earn strictly more advantage while
        // the per-negative penalty magnitude strictly shrinks.
        if (prev_pos >= 0.0) {
          CHECK(s.a_pos > prev_pos - 1e-12);
          CHECK(std::abs(s.a_neg) < prev_neg_mag + 1e-12);
        }
        prev_pos = s.a_pos;
        prev_neg_mag = std::abs(s.a_neg);
      }
    }
  }
}

TEST_CASE("diversity_scores averages the pairwise distances") {
  DiversityConfig cfg;
  cfg.distance = table_distance({{{"y1", "y2"}, 0.2},
                                 {{"y1", "y3"}, 0.4},
                                 {{"y2", "y3"}, 0.6}});
  const auto div = diversity_scores({"y1", "y2", "y3"}, cfg);
  CHECK(div[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(div[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(div[2] == doctest::Approx(0.5).epsilon(1e-12));

  DiversityConfig trig;
  const auto same = diversity_scores({"abc", "abc", "abc"}, trig);
  for (double v : same) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  cfg.distance = table_distance({{{"a", "b"}, 0.7}});
  const auto two = diversity_scores({"a", "b"}, cfg);
  CHECK(two[0] == doctest::Approx(0.7));
  CHECK(two[1] == doctest::Approx(0.7));

  CHECK_THROWS_AS(diversity_scores({"only"}, trig), std::invalid_argument);
}

TEST_CASE("fuse_diversity maps the group affinely then multiplies") {
  DiversityConfig cfg;
  cfg.norm_lo = 0.5;
  cfg.norm_hi = 1.0;
  const auto fused = fuse_diversity({1, 1, 0}, {0.3, 0.4, 0.5}, cfg);
  CHECK(fused[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fused[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(fused[2] == doctest::Approx(0.0).epsilon(1e-12));

  const auto flat = fuse_diversity({1, 0}, {0.2, 0.2}, cfg);
  CHECK(flat[0] == doctest::Approx(cfg.norm_hi));
  CHECK(flat[1] == 0.0);

  const auto zero = fuse_diversity({0, 0, 0}, {0.1, 0.2, 0.3}, cfg);
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("fuse_diversity is invariant to positive affine distance rescaling") {
  Rng rng(314);
  DiversityConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(5));
    std::vector<double> div(static_cast<std::size_t>(n));
    std::vector<int> rewards(static_cast<std::size_t>(n));
    for (auto& d : div) d = rng.uniform();
    for (auto& r : rewards) r = static_cast<int>(rng.below(2));
    const double scale = 0.1 + 5.0 * rng.uniform();
    const double shift = rng.uniform();
    std::vector<double> rescaled = div;
    for (auto& d : rescaled) d = scale * d + shift;
    const auto a = fuse_diversity(rewards, div, cfg);
    const auto b = fuse_diversity(rewards, rescaled, cfg);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
  }
}

TEST_CASE("diversity_advantages mean-center and sum to zero") {
  const auto adv = diversity_advantages({0.5, 0.75, 0.0});
  CHECK(adv[0] == doctest::Approx(0.083333).epsilon(1e-4));
  CHECK(adv[1] == doctest::Approx(0.333333).epsilon(1e-4));
  CHECK(adv[2] == doctest::Approx(-0.416667).epsilon(1e-4));

  const auto constant = diversity_advantages({0.4, 0.4, 0.4, 0.4});
  for (double v : constant) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(2 + rng.below(8));
    for (auto& v : r) v = rng.uniform();
    const auto a = diversity_advantages(r);
    double sum = 0.0;
    for (double v : a) sum += v;
    CHECK(std::abs(sum) <= 1e-12 * static_cast<double>(a.size()));
  }

  CHECK_THROWS_AS(diversity_advantages({}), std::invalid_argument);
}

TEST_CASE("length_reward branches, continuity and monotonicity") {
  const LengthConfig cfg{512, 128};
  CHECK(length_reward(300, cfg) == 0.0);
  CHECK(length_reward(448, cfg) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(length_reward(600, cfg) == -1.0);

  // Continuity at both breakpoints.
  CHECK(length_reward(384, cfg) == 0.0);
  CHECK(length_reward(385, cfg) == doctest::Approx(-1.0 / 128.0));
  CHECK(length_reward(512, cfg) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(length_reward(513, cfg) == -1.0);

  double prev = 1.0;
  for (int len = 0; len <= 700; ++len) {
    const double r = length_reward(len, cfg);
    CHECK(r <= prev + 1e-15);
    CHECK(r <= 0.0);
    CHECK(r >= -1.0);
    prev = r;
  }

  CHECK_THROWS_AS(length_reward(-1, cfg), std::invalid_argument);
  LengthConfig bad{100, 100};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("hybrid_advantage early phase composes Pass@k with the length term") {
  const DiversityConfig div_cfg;
  const LengthConfig len_cfg{512, 128};

  SUBCASE("pure Pass@k values at short lengths") {
    const auto g = make_group({1, 1, 0, 0}, {10, 12, 9, 11});
    const auto adv =
        hybrid_advantage(g, RewardPhase::kEarlyPassK, 2, div_cfg, len_cfg, 0.5);
    CHECK_FALSE(adv.degenerate);
    CHECK(adv.values[0] == doctest::Approx(0.447214).epsilon(1e-5));
    CHECK(adv.values[1] == doctest::Approx(0.447214).epsilon(1e-5));
    CHECK(adv.values[2] == doctest::Approx(-2.236068).epsilon(1e-5));
    CHECK(adv.values[3] == doctest::Approx(-2.236068).epsilon(1e-5));
  }

  SUBCASE("an overlong rollout is shifted by w_len * (-1)") {
    const auto short_g = make_group({1, 0}, {10, 10});
    const auto long_g = make_group({1, 0}, {600, 10});
    const auto a =
        hybrid_advantage(short_g, RewardPhase::kEarlyPassK, 1, div_cfg, len_cfg, 0.5);
    const auto b =
        hybrid_advantage(long_g, RewardPhase::kEarlyPassK, 1, div_cfg, len_cfg, 0.5);
    CHECK(b.values[0] == doctest::Approx(a.values[0] - 0.5).epsilon(1e-12));
    CHECK(b.values[1] == doctest::Approx(a.values[1]).epsilon(1e-12));
  }

  SUBCASE("degenerate group yields zero advantages plus the flag") {
    const auto g = make_group({1, 1, 1}, {5, 5, 5});
    const auto adv =
        hybrid_advantage(g, RewardPhase::kEarlyPassK, 2, div_cfg, len_cfg, 0.0);
    CHECK(adv.degenerate);
    for (double v : adv.values) CHECK(v == 0.0);
  }
}

TEST_CASE("hybrid_advantage late phase: identical correct responses get zero") {
  const DiversityConfig div_cfg;
  const LengthConfig len_cfg{512, 128};
  const auto g = make_group({1, 1, 1}, {5, 5, 5},
                            {"\\boxed{7}", "\\boxed{7}", "\\boxed{7}"});
  const auto adv =
      hybrid_advantage(g, RewardPhase::kLateDiversity, 1, div_cfg, len_cfg, 0.5);
  CHECK_FALSE(adv.degenerate);
  for (double v : adv.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hybrid_advantage late phase favors distinct correct responses") {
  const DiversityConfig div_cfg;
  const LengthConfig len_cfg{512, 128};
  const auto g = make_group(
      {1, 1, 0}, {5, 5, 5},
      {"\\boxed{1}", "the answer happens to be \\boxed{4} here", "\\boxed{9}"});
  const auto adv =
      hybrid_advantage(g, RewardPhase::kLateDiversity, 1, div_cfg, len_cfg, 0.0);
  double sum = 0.0;
  for (double v : adv.values) sum += v;
  CHECK(std::abs(sum) < 1e-12);
  CHECK(adv.values[2] < 0.0);  // the incorrect one sits below the mean
}

TEST_CASE("distinct_count greedy clustering") {
  DiversityConfig cfg;
  cfg.similarity_threshold = 0.2;

  cfg.distance = table_distance({});
  CHECK(distinct_count({"a", "a", "a"}, cfg) == 1);

  cfg.distance = table_distance({{{"x", "y"}, 0.9}, {{"x", "z"}, 0.9},
                                 {{"y", "z"}, 0.9}});
  CHECK(distinct_count({"x", "y", "z"}, cfg) == 3);

  // d(1,2)=0.1 joins; d(1,3)=0.9 founds a new cluster.
  cfg.distance = table_distance({{{"r1", "r2"}, 0.1}, {{"r1", "r3"}, 0.9},
                                 {{"r2", "r3"}, 0.9}});
  CHECK(distinct_count({"r1", "r2", "r3"}, cfg) == 2);

  CHECK_THROWS_AS(distinct_count({}, cfg), std::invalid_argument);
}

TEST_CASE("distinct_count is stable for identical order and for reversal on "
          "well-separated corpora") {
  DiversityConfig cfg;
  cfg.similarity_threshold = 0.2;
  const std::vector<std::string> corpus = {
      "\\boxed{1}", "\\boxed{1}", "\\boxed{4}", "\\boxed{7}", "\\boxed{4}"};
  const int forward = distinct_count(corpus, cfg);
  CHECK(forward == distinct_count(corpus, cfg));
  std::vector<std::string> reversed(corpus.rbegin(), corpus.rend());
  CHECK(distinct_count(reversed, cfg) == forward);
  CHECK(forward == 3);
}

TEST_CASE("trigram cosine distance basics") {
  CHECK(trigram_cosine_distance("same text", "same text") ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trigram_cosine_distance("aaaa", "bbbb") == doctest::Approx(1.0));
  const double d = trigram_cosine_distance("\\boxed{1}", "\\boxed{4}");
  CHECK(d > 0.2);
  CHECK(d < 0.5);
  CHECK(trigram_cosine_distance("", "") == 0.0);
  CHECK(trigram_cosine_distance("", "x") == 1.0);
}

TEST_CASE("binomial coefficients are exact where used") {
  CHECK(binomial(8, 4) == 70.0);
  CHECK(binomial(4, 2) == 6.0);
  CHECK(binomial(2, 2) == 1.0);
  CHECK(binomial(1, 2) == 0.0);
  CHECK(binomial(0, 0) == 1.0);
  CHECK(binomial(52, 5) == 2598960.0);
}
