// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "rlvr/verifier.hpp"

namespace rlvr {

namespace {

constexpr char kCheckpointMagic[8] = {'R', 'L', 'V', 'R', 'P', 'O', 'L', '1'};

void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t read_u64_le(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(bytes[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

void append_f64_le(std::vector<std::uint8_t>& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  append_u64_le(out, bits);
}

double read_f64_le(std::span<const std::uint8_t> bytes, std::size_t at) {
  const std::uint64_t bits = read_u64_le(bytes, at);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

/// Tempered, biased logits -> log-softmax vector (numerically stable).
std::vector<double> log_softmax(std::vector<double> logits, double temperature) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");
  for (double& z : logits) z /= temperature;
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - zmax);
  const double lse = zmax + std::log(sum);
  for (double& z : logits) z -= lse;
  return logits;
}

/// True when the trailing pattern of some period p <= window repeats
/// consecutively at least max_repeats times at the end of `tokens`.
bool trailing_repeats(const std::vector<int>& tokens, int window, int max_repeats) {
  if (window <= 0 || max_repeats <= 0) return false;
  const int n = static_cast<int>(tokens.size());
  for (int p = 1; p <= window; ++p) {
    const int span = p * max_repeats;
    if (span > n) continue;
    bool repeats = true;
    for (int i = n - span; i < n - p; ++i) {
      if (tokens[static_cast<std::size_t>(i)] !=
          tokens[static_cast<std::size_t>(i + p)]) {
        repeats = false;
        break;
      }
    }
    if (repeats) return true;
  }
  return false;
}

void check_tokens(const PolicyParams& params, std::span<const int> tokens) {
  if (tokens.empty())
    throw std::invalid_argument("token sequence must be non-empty");
  for (int t : tokens) {
    if (t < 0 || t >= params.vocab_size)
      throw std::invalid_argument("token id out of vocabulary: " + std::to_string(t));
  }
}

}  // namespace

// --------------------------------------------------------------------------
// Vocab
// --------------------------------------------------------------------------

Vocab::Vocab(int modulus, std::vector<std::string> filler_words)
    : modulus_(modulus) {
  if (modulus < 2) throw std::invalid_argument("Vocab: modulus must be >= 2");
  surfaces_.reserve(static_cast<std::size_t>(3 + modulus) + filler_words.size());
  surfaces_.push_back("<bos>");
  surfaces_.push_back("<eos>");
  surfaces_.push_back(std::string(kAbstainSentinel));
  for (int r = 0; r < modulus; ++r) surfaces_.push_back(std::to_string(r));
  for (auto& w : filler_words) {
    if (w.empty()) throw std::invalid_argument("Vocab: empty filler word");
    surfaces_.push_back(std::move(w));
  }
}

const std::string& Vocab::surface(int token) const {
  return surfaces_.at(static_cast<std::size_t>(token));
}

bool Vocab::is_answer_token(int token) const {
  return token == kAbstain ||
         (token >= kFirstResidue && token < kFirstResidue + modulus_);
}

int Vocab::residue_token(int residue) const {
  if (residue < 0 || residue >= modulus_)
    throw std::invalid_argument("residue out of range");
  return kFirstResidue + residue;
}

std::optional<int> Vocab::token_of(const std::string& surface) const {
  for (std::size_t i = 0; i < surfaces_.size(); ++i)
    if (surfaces_[i] == surface) return static_cast<int>(i);
  return std::nullopt;
}

std::string Vocab::detokenize(std::span<const int> tokens) const {
  std::vector<int> body(tokens.begin(), tokens.end());
  while (!body.empty() && (body.back() == kEos || body.back() == kBos))
    body.pop_back();
  if (body.empty()) return "";
  std::string text;
  const bool boxed_tail = is_answer_token(body.back());
  const std::size_t n_plain = boxed_tail ? body.size() - 1 : body.size();
  for (std::size_t i = 0; i < n_plain; ++i) {
    if (!text.empty()) text.push_back(' ');
    text += surface(body[i]);
  }
  if (boxed_tail) {
    if (!text.empty()) text.push_back(' ');
    text += "\\boxed{" + surface(body.back()) + "}";
  }
  return text;
}

std::vector<int> Vocab::tokenize(const std::string& text) const {
  std::vector<int> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    if (i >= text.size()) break;
    std::size_t j = text.find(' ', i);
    if (j == std::string::npos) j = text.size();
    std::string word = text.substr(i, j - i);
    i = j;
    if (word.starts_with("\\boxed{") && word.ends_with("}")) {
      word = word.substr(7, word.size() - 8);
    }
    const auto tok = token_of(word);
    if (!tok)
      throw std::invalid_argument("tokenize: word not in vocabulary: " + word);
    tokens.push_back(*tok);
  }
  return tokens;
}

// --------------------------------------------------------------------------
// Features
// --------------------------------------------------------------------------

std::vector<double> FeatureVec::to_dense(int feature_dim) const {
  std::vector<double> dense(static_cast<std::size_t>(feature_dim), 0.0);
  for (const auto& [idx, val] : entries)
    dense[static_cast<std::size_t>(idx)] += val;
  return dense;
}

int feature_bucket(const Task& task, const FeatureLayout& layout) {
  std::uint64_t h = fnv1a(task.prompt);
  h = fnv1a("\x1f", h);
  if (task.context) h = fnv1a(*task.context, h);
  return static_cast<int>(h % static_cast<std::uint64_t>(layout.hash_dim));
}

FeatureVec featurize(const Task& task, std::span<const int> prefix,
                     const FeatureLayout& layout) {
  FeatureVec f;
  f.entries.reserve(4);
  f.entries.emplace_back(feature_bucket(task, layout), 1.0);
  const int last = prefix.empty() ? Vocab::kBos : prefix.back();
  f.entries.emplace_back(layout.hash_dim + last, 1.0);
  if (task.context) f.entries.emplace_back(layout.context_flag_index(), 1.0);
  f.entries.emplace_back(layout.bias_index(), 1.0);
  return f;
}

// --------------------------------------------------------------------------
// Parameters
// --------------------------------------------------------------------------

PolicyParams init_policy(int vocab_size, int feature_dim, std::uint64_t seed) {
  if (vocab_size < 4)
    throw std::invalid_argument("init_policy: vocab_size must be >= 4");
  if (feature_dim < 1)
    throw std::invalid_argument("init_policy: feature_dim must be >= 1");
  PolicyParams p;
  p.vocab_size = vocab_size;
  p.feature_dim = feature_dim;
  p.weights = Matrix(static_cast<std::size_t>(vocab_size),
                     static_cast<std::size_t>(feature_dim));
  Rng rng(mix_seed(seed, 0x1417ULL));
  for (double& w : p.weights.flat()) w = rng.uniform(-0.01, 0.01);
  p.frozen_mask.assign(p.weights.size(), 0);
  p.version = 0;
  return p;
}

PolicyParams snapshot(const PolicyParams& params) { return params; }

void freeze_prompt_hash_block(PolicyParams& params, const FeatureLayout& layout) {
  for (int v = 0; v < params.vocab_size; ++v)
    for (int c = 0; c < layout.hash_dim; ++c)
      params.frozen_mask[static_cast<std::size_t>(v) *
                             static_cast<std::size_t>(params.feature_dim) +
                         static_cast<std::size_t>(c)] = 1;
}

// --------------------------------------------------------------------------
// Likelihoods and sampling
// --------------------------------------------------------------------------

std::vector<double> next_token_logits(const PolicyParams& params,
                                      const Vocab& vocab,
                                      const FeatureLayout& layout,
                                      const Task& task,
                                      std::span<const int> prefix,
                                      const GenerationConfig& gen) {
  (void)vocab;
  const FeatureVec phi = featurize(task, prefix, layout);
  std::vector<double> z(static_cast<std::size_t>(params.vocab_size), 0.0);
  for (int v = 0; v < params.vocab_size; ++v) {
    double acc = 0.0;
    for (const auto& [idx, val] : phi.entries)
      acc += params.weights(static_cast<std::size_t>(v),
                            static_cast<std::size_t>(idx)) *
             val;
    z[static_cast<std::size_t>(v)] = acc;
  }
  z[Vocab::kEos] += gen.eos_logit_bias;
  return z;
}

LogprobResult logprob(const PolicyParams& params, const Vocab& vocab,
                      const FeatureLayout& layout, const Task& task,
                      std::span<const int> tokens, const GenerationConfig& gen) {
  check_tokens(params, tokens);
  LogprobResult res;
  res.per_token.reserve(tokens.size());
  std::vector<int> prefix;
  prefix.reserve(tokens.size());
  for (int tok : tokens) {
    const auto z = next_token_logits(params, vocab, layout, task, prefix, gen);
    const auto logp = log_softmax(z, gen.temperature);
    res.per_token.push_back(logp[static_cast<std::size_t>(tok)]);
    res.total += logp[static_cast<std::size_t>(tok)];
    prefix.push_back(tok);
  }
  return res;
}

void accumulate_grad_logprob(const PolicyParams& params, const Vocab& vocab,
                             const FeatureLayout& layout, const Task& task,
                             std::span<const int> tokens, double scale,
                             Matrix& acc, const GenerationConfig& gen) {
  check_tokens(params, tokens);
  if (acc.rows() != static_cast<std::size_t>(params.vocab_size) ||
      acc.cols() != static_cast<std::size_t>(params.feature_dim))
    throw std::invalid_argument("gradient accumulator has wrong shape");
  const double inv_t = 1.0 / gen.temperature;
  std::vector<int> prefix;
  prefix.reserve(tokens.size());
  for (int tok : tokens) {
    const FeatureVec phi = featurize(task, prefix, layout);
    auto z = next_token_logits(params, vocab, layout, task, prefix, gen);
    const auto logp = log_softmax(std::move(z), gen.temperature);
    for (int v = 0; v < params.vocab_size; ++v) {
      const double indicator = (v == tok) ? 1.0 : 0.0;
      const double coeff =
          scale * inv_t * (indicator - std::exp(logp[static_cast<std::size_t>(v)]));
      if (coeff == 0.0) continue;
      for (const auto& [idx, val] : phi.entries)
        acc(static_cast<std::size_t>(v), static_cast<std::size_t>(idx)) +=
            coeff * val;
    }
    prefix.push_back(tok);
  }
}

Matrix grad_logprob(const PolicyParams& params, const Vocab& vocab,
                    const FeatureLayout& layout, const Task& task,
                    std::span<const int> tokens, const GenerationConfig& gen) {
  Matrix grad(static_cast<std::size_t>(params.vocab_size),
              static_cast<std::size_t>(params.feature_dim));
  accumulate_grad_logprob(params, vocab, layout, task, tokens, 1.0, grad, gen);
  return grad;
}

Rollout sample(const PolicyParams& params, const Vocab& vocab,
               const FeatureLayout& layout, const Task& task, int max_len,
               double temperature, std::uint64_t seed,
               const RedundancyConfig& redundancy, double eos_logit_bias) {
  if (max_len < 1) throw std::invalid_argument("sample: max_len must be >= 1");
  if (!(temperature > 0.0))
    throw std::invalid_argument("sample: temperature must be positive");
  GenerationConfig gen{temperature, eos_logit_bias};
  Rng rng(seed);
  Rollout r;
  r.task_id = task.id;
  std::vector<int> prefix;
  for (int step = 0; step < max_len; ++step) {
    auto z = next_token_logits(params, vocab, layout, task, prefix, gen);
    const auto logp = log_softmax(std::move(z), temperature);
    const double u = rng.uniform();
    double acc = 0.0;
    int tok = params.vocab_size - 1;
    for (int v = 0; v < params.vocab_size; ++v) {
      acc += std::exp(logp[static_cast<std::size_t>(v)]);
      if (u < acc) {
        tok = v;
        break;
      }
    }
    r.tokens.push_back(tok);
    r.logprob_cur += logp[static_cast<std::size_t>(tok)];
    prefix.push_back(tok);
    if (tok == Vocab::kEos) break;
    if (trailing_repeats(r.tokens, redundancy.window, redundancy.max_repeats)) {
      r.truncated_by_redundancy = true;
      break;
    }
  }
  r.length = static_cast<int>(r.tokens.size());
  r.text = vocab.detokenize(r.tokens);
  return r;
}

Rollout greedy_decode(const PolicyParams& params, const Vocab& vocab,
                      const FeatureLayout& layout, const Task& task,
                      int max_len, const RedundancyConfig& redundancy,
                      double eos_logit_bias) {
  if (max_len < 1)
    throw std::invalid_argument("greedy_decode: max_len must be >= 1");
  GenerationConfig gen{1.0, eos_logit_bias};
  Rollout r;
  r.task_id = task.id;
  std::vector<int> prefix;
  for (int step = 0; step < max_len; ++step) {
    const auto z = next_token_logits(params, vocab, layout, task, prefix, gen);
    int tok = 0;
    for (int v = 1; v < params.vocab_size; ++v)
      if (z[static_cast<std::size_t>(v)] > z[static_cast<std::size_t>(tok)]) tok = v;
    r.tokens.push_back(tok);
    prefix.push_back(tok);
    if (tok == Vocab::kEos) break;
    if (trailing_repeats(r.tokens, redundancy.window, redundancy.max_repeats)) {
      r.truncated_by_redundancy = true;
      break;
    }
  }
  const auto lp = logprob(params, vocab, layout, task, r.tokens, gen);
  r.logprob_cur = lp.total;
  r.length = static_cast<int>(r.tokens.size());
  r.text = vocab.detokenize(r.tokens);
  return r;
}

// --------------------------------------------------------------------------
// Checkpoints
// --------------------------------------------------------------------------

std::vector<std::uint8_t> checkpoint_bytes(const PolicyParams& params) {
  std::vector<std::uint8_t> out;
  const std::size_t n = params.weights.size();
  out.reserve(8 + 24 + 8 * n + (n + 7) / 8);
  out.insert(out.end(), std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  append_u64_le(out, static_cast<std::uint64_t>(params.vocab_size));
  append_u64_le(out, static_cast<std::uint64_t>(params.feature_dim));
  append_u64_le(out, params.version);
  for (double w : params.weights.flat()) append_f64_le(out, w);
  std::uint8_t packed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (params.frozen_mask[i]) packed |= static_cast<std::uint8_t>(1u << (i % 8));
    if (i % 8 == 7) {
      out.push_back(packed);
      packed = 0;
    }
  }
  if (n % 8 != 0) out.push_back(packed);
  return out;
}

PolicyParams params_from_checkpoint_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 32 ||
      std::memcmp(bytes.data(), kCheckpointMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic or truncated header");
  PolicyParams p;
  p.vocab_size = static_cast<int>(read_u64_le(bytes, 8));
  p.feature_dim = static_cast<int>(read_u64_le(bytes, 16));
  p.version = read_u64_le(bytes, 24);
  if (p.vocab_size <= 0 || p.feature_dim <= 0)
    throw std::runtime_error("checkpoint: invalid dimensions");
  const std::size_t n =
      static_cast<std::size_t>(p.vocab_size) * static_cast<std::size_t>(p.feature_dim);
  const std::size_t expected = 32 + 8 * n + (n + 7) / 8;
  if (bytes.size() != expected)
    throw std::runtime_error("checkpoint: size mismatch");
  p.weights = Matrix(static_cast<std::size_t>(p.vocab_size),
                     static_cast<std::size_t>(p.feature_dim));
  for (std::size_t i = 0; i < n; ++i)
    p.weights.at_flat(i) = read_f64_le(bytes, 32 + 8 * i);
  p.frozen_mask.assign(n, 0);
  const std::size_t mask_at = 32 + 8 * n;
  for (std::size_t i = 0; i < n; ++i)
    p.frozen_mask[i] =
        (bytes[mask_at + i / 8] >> (i % 8)) & 1u;
  return p;
}

void save_checkpoint(const PolicyParams& params, const std::string& path) {
  const auto bytes = checkpoint_bytes(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

PolicyParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return params_from_checkpoint_bytes(bytes);
}

}  // namespace rlvr
