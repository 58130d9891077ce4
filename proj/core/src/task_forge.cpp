// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/task_forge.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rlvr/common.hpp"
#include "rlvr/verifier.hpp"

namespace rlvr {

namespace {

using nlohmann::json;

long long positive_mod(long long x, long long m) { return ((x % m) + m) % m; }

struct ArithInstance {
  long long a;
  long long b;
  char op;
  long long result;
};

ArithInstance draw_arith(Rng& rng, int modulus) {
  ArithInstance inst;
  inst.a = static_cast<long long>(rng.below(100));
  inst.b = static_cast<long long>(rng.below(100));
  const char ops[3] = {'+', '-', '*'};
  inst.op = ops[rng.below(3)];
  long long raw = inst.op == '+'   ? inst.a + inst.b
                  : inst.op == '-' ? inst.a - inst.b
                                   : inst.a * inst.b;
  inst.result = positive_mod(raw, modulus);
  return inst;
}

// Verbose-response padding templates; every word appears in
// default_filler_words() so padded responses stay tokenizable.
const std::vector<std::string>& padding_templates() {
  static const std::vector<std::string> templates = {
      "let me think about this step by step so the answer is",
      "we now compute the result carefully and therefore the answer is",
      "let us think about the result so we have the final answer",
      "so let me carefully compute this step by step the answer is",
  };
  return templates;
}

json tags_to_json(const std::set<std::string>& tags) {
  json arr = json::array();
  for (const auto& t : tags) arr.push_back(t);  // std::set keeps them sorted
  return arr;
}

}  // namespace

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::kUnknown: return "unknown";
    case Tier::kMastered: return "mastered";
    case Tier::kPartial: return "partial";
    case Tier::kUnmastered: return "unmastered";
  }
  return "unknown";
}

Tier tier_from_string(std::string_view name) {
  if (name == "unknown") return Tier::kUnknown;
  if (name == "mastered") return Tier::kMastered;
  if (name == "partial") return Tier::kPartial;
  if (name == "unmastered") return Tier::kUnmastered;
  throw std::invalid_argument("unknown tier name: " + std::string(name));
}

std::string_view to_string(PairAttribute attr) {
  switch (attr) {
    case PairAttribute::kConciseness: return "conciseness";
    case PairAttribute::kFluency: return "fluency";
    case PairAttribute::kAbstention: return "abstention";
    case PairAttribute::kStyleCompliance: return "style-compliance";
  }
  return "conciseness";
}

PairAttribute pair_attribute_from_string(std::string_view name) {
  if (name == "conciseness") return PairAttribute::kConciseness;
  if (name == "fluency") return PairAttribute::kFluency;
  if (name == "abstention") return PairAttribute::kAbstention;
  if (name == "style-compliance") return PairAttribute::kStyleCompliance;
  throw std::invalid_argument("unknown pair attribute: " + std::string(name));
}

std::string append_boxed_instruction(std::string_view prompt) {
  std::string out(prompt);
  if (out.ends_with(kBoxedInstruction)) return out;
  if (!out.empty() && out.back() != ' ') out.push_back(' ');
  out += kBoxedInstruction;
  return out;
}

const std::vector<std::string>& default_filler_words() {
  static const std::vector<std::string> words = [] {
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (const auto& tpl : padding_templates()) {
      std::istringstream iss(tpl);
      std::string word;
      while (iss >> word) {
        if (seen.insert(word).second) out.push_back(word);
      }
    }
    return out;
  }();
  return words;
}

std::vector<std::string> accepted_answers(const Task& task) {
  std::vector<std::string> answers = {task.ground_truth};
  for (const auto& tag : task.tags) {
    if (tag.starts_with(kAcceptTagPrefix)) {
      std::string alt = tag.substr(kAcceptTagPrefix.size());
      if (alt != task.ground_truth) answers.push_back(std::move(alt));
    }
  }
  return answers;
}

std::vector<Task> gen_arith_tasks(int count, int modulus, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("gen_arith_tasks: count must be >= 1");
  if (modulus < 2)
    throw std::invalid_argument("gen_arith_tasks: modulus must be >= 2");
  Rng rng(mix_seed(seed, 0xA217ULL, static_cast<std::uint64_t>(modulus)));
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const ArithInstance inst = draw_arith(rng, modulus);
    Task t;
    t.id = "arith-" + std::to_string(seed) + "-" + std::to_string(i);
    std::ostringstream prompt;
    prompt << "Compute (" << inst.a << " " << inst.op << " " << inst.b
           << ") mod " << modulus << ".";
    t.prompt = append_boxed_instruction(prompt.str());
    t.ground_truth = std::to_string(inst.result);
    t.requires_context = false;
    t.is_text_only = true;
    t.tags = {"arith"};
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<Task> gen_context_tasks(int count, int modulus, std::uint64_t seed,
                                    double leaky_fraction) {
  if (count < 1)
    throw std::invalid_argument("gen_context_tasks: count must be >= 1");
  if (modulus < 2)
    throw std::invalid_argument("gen_context_tasks: modulus must be >= 2");
  if (leaky_fraction < 0.0 || leaky_fraction > 1.0)
    throw std::invalid_argument("gen_context_tasks: leaky_fraction outside [0,1]");
  Rng rng(mix_seed(seed, 0xC0DEULL, static_cast<std::uint64_t>(modulus)));
  const int n_leaky = static_cast<int>(leaky_fraction * count);
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const long long value = static_cast<long long>(rng.below(1000));
    const bool leaky = i < n_leaky;
    Task t;
    t.id = "ctx-" + std::to_string(seed) + "-" + std::to_string(i);
    std::ostringstream prompt;
    prompt << "Using the evidence, compute v mod " << modulus << ".";
    if (leaky) prompt << " (Recall that v = " << value << ".)";
    t.prompt = append_boxed_instruction(prompt.str());
    t.context = "v = " + std::to_string(value);
    t.ground_truth = std::to_string(positive_mod(value, modulus));
    t.requires_context = true;
    t.is_text_only = false;
    t.tags = {"context"};
    if (leaky) t.tags.insert("leaky");
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<Task> gen_probe_tasks(int count, int modulus, int divisor,
                                  std::uint64_t seed) {
  if (count < 1)
    throw std::invalid_argument("gen_probe_tasks: count must be >= 1");
  if (modulus < 2 || divisor < 2)
    throw std::invalid_argument("gen_probe_tasks: modulus and divisor must be >= 2");
  Rng rng(mix_seed(seed, 0x960BEULL));
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int residue = static_cast<int>(rng.below(static_cast<std::uint64_t>(divisor)));
    std::vector<int> answers;
    for (int v = 0; v < modulus; ++v)
      if (v % divisor == residue) answers.push_back(v);
    Task t;
    t.id = "probe-" + std::to_string(seed) + "-" + std::to_string(i);
    std::ostringstream prompt;
    prompt << "Name any one value below " << modulus << " congruent to "
           << residue << " mod " << divisor << ". (Variant " << i << ".)";
    t.prompt = append_boxed_instruction(prompt.str());
    t.ground_truth = std::to_string(answers.front());
    for (int v : answers) t.tags.insert(std::string(kAcceptTagPrefix) + std::to_string(v));
    t.tags.insert("probe");
    t.requires_context = false;
    t.is_text_only = true;
    tasks.push_back(std::move(t));
  }
  return tasks;
}

Task to_cloze(const std::string& question, const std::vector<ClozeOption>& options,
              const std::string& correct_label) {
  const ClozeOption* correct = nullptr;
  std::set<std::string> contents;
  for (const auto& opt : options) {
    if (!contents.insert(opt.content).second)
      throw std::invalid_argument("to_cloze: duplicate option contents are ambiguous");
    if (opt.label == correct_label) correct = &opt;
  }
  if (correct == nullptr)
    throw std::invalid_argument("to_cloze: correct_label not among options");
  Task t;
  t.id = "cloze-" + std::to_string(fnv1a(question));
  t.prompt = append_boxed_instruction(question);
  t.ground_truth = correct->content;
  t.requires_context = false;
  t.is_text_only = true;
  t.tags = {"cloze"};
  return t;
}

Task ablate_context(const Task& task) {
  if (!task.requires_context)
    throw std::invalid_argument("ablate_context: task does not require context");
  if (!task.context.has_value())
    throw std::invalid_argument("ablate_context: context already absent");
  Task out = task;
  out.id += "#ablated";
  out.context.reset();
  out.ground_truth = std::string(kAbstainSentinel);
  out.tags.insert("ablated");
  return out;
}

std::vector<PreferencePair> make_preference_pairs(const std::vector<Task>& tasks,
                                                  std::uint64_t seed) {
  if (tasks.empty())
    throw std::invalid_argument("make_preference_pairs: tasks must be non-empty");
  Rng rng(mix_seed(seed, 0xFA1ULL));
  std::vector<PreferencePair> pairs;
  pairs.reserve(tasks.size());
  for (const auto& task : tasks) {
    PreferencePair p;
    p.task_id = task.id;
    const bool ablated =
        task.requires_context && !task.context.has_value();
    if (ablated) {
      p.attribute = PairAttribute::kAbstention;
      p.chosen = "\\boxed{" + std::string(kAbstainSentinel) + "}";
      const std::uint64_t fabricated = rng.below(10);
      p.rejected = "the answer is \\boxed{" + std::to_string(fabricated) + "}";
    } else {
      p.attribute = PairAttribute::kConciseness;
      p.chosen = "\\boxed{" + task.ground_truth + "}";
      const auto& templates = padding_templates();
      const std::string& pad = templates[rng.below(templates.size())];
      p.rejected = pad + " \\boxed{" + task.ground_truth + "}";
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<Task> mix_text_only(const std::vector<Task>& tasks, double fraction,
                                std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("mix_text_only: fraction outside [0,1]");
  const int n_new = static_cast<int>(fraction * static_cast<double>(tasks.size()));
  std::vector<Task> extras;
  extras.reserve(static_cast<std::size_t>(n_new));
  Rng rng(mix_seed(seed, 0x7E17ULL));
  for (int i = 0; i < n_new; ++i) {
    // Tiny propositional-logic items; answers stay in {0, 1}.
    const int a = static_cast<int>(rng.below(2));
    const int b = static_cast<int>(rng.below(2));
    const bool use_and = rng.below(2) == 0;
    const bool negate = rng.below(2) == 0;
    int value = use_and ? (a & b) : (a | b);
    if (negate) value = 1 - value;
    Task t;
    t.id = "logic-" + std::to_string(seed) + "-" + std::to_string(i);
    std::ostringstream prompt;
    prompt << "Evaluate " << (negate ? "NOT(" : "(") << a
           << (use_and ? " AND " : " OR ") << b << ") as 0 or 1. (Item " << i
           << ".)";
    t.prompt = append_boxed_instruction(prompt.str());
    t.ground_truth = std::to_string(value);
    t.requires_context = false;
    t.is_text_only = true;
    t.tags = {"logic", "text-only-mix"};
    extras.push_back(std::move(t));
  }

  if (extras.empty()) return tasks;
  std::vector<Task> out;
  out.reserve(tasks.size() + extras.size());
  // Evenly spaced deterministic interleave: insert one extra before every
  // ceil(|tasks|/n_new)-th original, remainder appended.
  const std::size_t stride =
      tasks.size() == 0 ? 1 : std::max<std::size_t>(1, tasks.size() / extras.size());
  std::size_t next_extra = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (i % stride == 0 && next_extra < extras.size())
      out.push_back(extras[next_extra++]);
    out.push_back(tasks[i]);
  }
  while (next_extra < extras.size()) out.push_back(extras[next_extra++]);
  return out;
}

std::string task_to_json(const Task& task) {
  json j;
  j["id"] = task.id;
  j["prompt"] = task.prompt;
  j["ground_truth"] = task.ground_truth;
  if (task.context) j["context"] = *task.context;
  j["requires_context"] = task.requires_context;
  j["tags"] = tags_to_json(task.tags);
  j["tier"] = std::string(to_string(task.tier));
  j["is_text_only"] = task.is_text_only;
  return j.dump();
}

Task task_from_json(const std::string& line) {
  const json j = json::parse(line);
  static const std::set<std::string> known = {
      "id",   "prompt", "ground_truth", "context",
      "tags", "tier",   "requires_context", "is_text_only"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key))
      throw std::invalid_argument("task record has unknown field: " + key);
  }
  Task t;
  t.id = j.at("id").get<std::string>();
  t.prompt = j.at("prompt").get<std::string>();
  t.ground_truth = j.at("ground_truth").get<std::string>();
  if (j.contains("context")) t.context = j.at("context").get<std::string>();
  t.requires_context = j.at("requires_context").get<bool>();
  for (const auto& tag : j.at("tags")) t.tags.insert(tag.get<std::string>());
  t.tier = tier_from_string(j.at("tier").get<std::string>());
  t.is_text_only = j.at("is_text_only").get<bool>();
  if (t.ground_truth.empty())
    throw std::invalid_argument("task record has empty ground_truth");
  return t;
}

void save_tasks_ndjson(const std::vector<Task>& tasks, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& t : tasks) out << task_to_json(t) << "\n";
}

std::vector<Task> load_tasks_ndjson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<Task> tasks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    tasks.push_back(task_from_json(line));
  }
  return tasks;
}

std::string pair_to_json(const PreferencePair& pair) {
  json j;
  j["task_id"] = pair.task_id;
  j["chosen"] = pair.chosen;
  j["rejected"] = pair.rejected;
  j["attribute"] = std::string(to_string(pair.attribute));
  return j.dump();
}

PreferencePair pair_from_json(const std::string& line) {
  const json j = json::parse(line);
  PreferencePair p;
  p.task_id = j.at("task_id").get<std::string>();
  p.chosen = j.at("chosen").get<std::string>();
  p.rejected = j.at("rejected").get<std::string>();
  p.attribute = pair_attribute_from_string(j.at("attribute").get<std::string>());
  return p;
}

void save_pairs_ndjson(const std::vector<PreferencePair>& pairs,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& p : pairs) out << pair_to_json(p) << "\n";
}

std::vector<PreferencePair> load_pairs_ndjson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<PreferencePair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    pairs.push_back(pair_from_json(line));
  }
  return pairs;
}

}  // namespace rlvr
