// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic verifiable tasks and the data-construction transforms applied
// to them: boxed-answer instruction, cloze conversion, context ablation,
// preference pairing, text-only mixing.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rlvr {

enum class Tier { kUnknown, kMastered, kPartial, kUnmastered };

std::string_view to_string(Tier tier);
Tier tier_from_string(std::string_view name);

struct Task {
  std::string id;
  std::string prompt;
  std::string ground_truth;
  std::optional<std::string> context;  // evidence span; stands in for the image
  bool requires_context = false;
  std::set<std::string> tags;
  Tier tier = Tier::kUnknown;
  bool is_text_only = true;

  bool operator==(const Task&) const = default;
};

enum class PairAttribute { kConciseness, kFluency, kAbstention, kStyleCompliance };

std::string_view to_string(PairAttribute attr);
PairAttribute pair_attribute_from_string(std::string_view name);

struct PreferencePair {
  std::string task_id;
  std::string chosen;
  std::string rejected;
  PairAttribute attribute = PairAttribute::kConciseness;

  bool operator==(const PreferencePair&) const = default;
};

struct ClozeOption {
  std::string label;
  std::string content;
};

/// The instruction appended to every training prompt so the final answer
/// lands at a parseable location.
inline constexpr std::string_view kBoxedInstruction =
    "The final answer MUST BE put in \\boxed{}.";

/// Appends `kBoxedInstruction` (once) so that the prompt ends with it.
std::string append_boxed_instruction(std::string_view prompt);

/// Tags carrying alternate accepted answers for multi-answer probe tasks.
inline constexpr std::string_view kAcceptTagPrefix = "accept:";

/// Ground truth plus any `accept:` tagged alternates.
std::vector<std::string> accepted_answers(const Task& task);

/// Every word used by the verbose-response padding templates. Vocabularies
/// built from this list can tokenize all generated preference pairs.
const std::vector<std::string>& default_filler_words();

/// Modular-arithmetic questions: (a op b) mod modulus with op in {+, -, *}.
/// Pure function of (count, modulus, seed).
std::vector<Task> gen_arith_tasks(int count, int modulus, std::uint64_t seed);

/// Evidence-dependent variant: the prompt asks for `v mod modulus` and the
/// value of v lives in the context span. A `leaky_fraction` of the tasks
/// also embed the value in the prompt itself, making them answerable
/// without the context (knowledge-leakage stand-ins for screening).
std::vector<Task> gen_context_tasks(int count, int modulus,
                                    std::uint64_t seed,
                                    double leaky_fraction = 0.0);

/// Ambiguous tasks with several interchangeable correct answers: any digit
/// below `modulus` congruent to a target residue mod `divisor`. Alternates
/// beyond the canonical ground truth are carried as `accept:` tags.
std::vector<Task> gen_probe_tasks(int count, int modulus, int divisor,
                                  std::uint64_t seed);

/// Converts a multiple-choice item to open cloze: options disappear from the
/// prompt and the correct option's content becomes the ground truth.
Task to_cloze(const std::string& question,
              const std::vector<ClozeOption>& options,
              const std::string& correct_label);

/// Evidence-ablated variant: context removed, ground truth replaced by the
/// abstain sentinel, id suffixed. Applying it to an already-ablated task is
/// an error, never a silent no-op.
Task ablate_context(const Task& task);

/// One preference pair per task. Regular tasks get a conciseness pair
/// (concise boxed answer vs. a template-padded verbose variant of the same
/// answer); ablated tasks get an abstention pair (abstention vs. a
/// confidently fabricated answer).
std::vector<PreferencePair> make_preference_pairs(const std::vector<Task>& tasks,
                                                  std::uint64_t seed);

/// Interleaves floor(fraction * |tasks|) freshly generated text-only
/// logical-reasoning tasks into the list at evenly spaced positions.
std::vector<Task> mix_text_only(const std::vector<Task>& tasks, double fraction,
                                std::uint64_t seed);

// Newline-delimited JSON with fields exactly as in Task; UTF-8.
std::string task_to_json(const Task& task);
Task task_from_json(const std::string& line);
void save_tasks_ndjson(const std::vector<Task>& tasks, const std::string& path);
std::vector<Task> load_tasks_ndjson(const std::string& path);

std::string pair_to_json(const PreferencePair& pair);
PreferencePair pair_from_json(const std::string& line);
void save_pairs_ndjson(const std::vector<PreferencePair>& pairs,
                       const std::string& path);
std::vector<PreferencePair> load_pairs_ndjson(const std::string& path);

}  // namespace rlvr
