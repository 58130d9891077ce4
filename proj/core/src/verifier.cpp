// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "rlvr/verifier.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace rlvr {

namespace {

constexpr std::string_view kBoxMarker = "\\boxed{";

// Fixed refusal-phrase list; matched case-insensitively as substrings when a
// response carries no boxed answer and the ground truth is the abstain
// sentinel.
constexpr std::array<std::string_view, 6> kRefusalPhrases = {
    "cannot answer",         "cannot be answered", "cannot be determined",
    "not enough information", "no image",          "missing evidence",
};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

bool contains_refusal_phrase(std::string_view response) {
  const std::string lowered = ascii_lower(response);
  for (std::string_view phrase : kRefusalPhrases) {
    if (lowered.find(phrase) != std::string::npos) return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_pure_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::kMatch: return "match";
    case VerdictReason::kMismatch: return "mismatch";
    case VerdictReason::kNoBox: return "no_box";
    case VerdictReason::kAbstainMatch: return "abstain_match";
    case VerdictReason::kAbstainMismatch: return "abstain_mismatch";
  }
  return "unknown";
}

std::optional<std::string> extract_boxed(std::string_view text) {
  const std::size_t pos = text.rfind(kBoxMarker);
  if (pos == std::string_view::npos) return std::nullopt;
  std::size_t i = pos + kBoxMarker.size();
  int depth = 1;
  const std::size_t start = i;
  for (; i < text.size(); ++i) {
    if (text[i] == '{') {
      ++depth;
    } else if (text[i] == '}') {
      --depth;
      if (depth == 0) {
        return std::string(trim(text.substr(start, i - start)));
      }
    }
  }
  return std::nullopt;  // last box never closed
}

std::string normalize_answer(std::string_view raw) {
  std::string_view trimmed = trim(raw);
  std::string collapsed;
  collapsed.reserve(trimmed.size());
  bool in_space = false;
  for (char c : trimmed) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !collapsed.empty()) collapsed.push_back(' ');
    in_space = false;
    collapsed.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (is_pure_integer(collapsed)) {
    const bool negative = collapsed[0] == '-';
    std::size_t i = (collapsed[0] == '-' || collapsed[0] == '+') ? 1 : 0;
    while (i + 1 < collapsed.size() && collapsed[i] == '0') ++i;
    std::string digits = collapsed.substr(i);
    if (digits == "0") return digits;  // -0 and +0 canonicalize to plain 0
    return negative ? "-" + digits : digits;
  }
  return collapsed;
}

Verdict verify(std::string_view response, std::string_view ground_truth) {
  if (ground_truth.empty())
    throw std::invalid_argument("verify: ground_truth must be non-empty");

  Verdict v;
  v.extracted = extract_boxed(response);
  const bool truth_is_abstain = iequals(ground_truth, kAbstainSentinel);

  if (truth_is_abstain) {
    const bool abstained =
        v.extracted ? iequals(*v.extracted, kAbstainSentinel)
                    : contains_refusal_phrase(response);
    v.reward = abstained ? 1 : 0;
    v.reason = abstained ? VerdictReason::kAbstainMatch
                         : VerdictReason::kAbstainMismatch;
    return v;
  }

  if (!v.extracted) {
    v.reward = 0;
    v.reason = VerdictReason::kNoBox;
    return v;
  }
  const bool match =
      normalize_answer(*v.extracted) == normalize_answer(ground_truth);
  v.reward = match ? 1 : 0;
  v.reason = match ? VerdictReason::kMatch : VerdictReason::kMismatch;
  return v;
}

}  // namespace rlvr
