#pragma once

// Non-neural features: capitalization classes, concept headwords,
// lowest-common-ancestor dependency paths, and the in-between-concept
// distance feature.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "scirel/corpus.hpp"
#include "scirel/errors.hpp"

namespace scirel {

enum class CapClass {
  kAllCapital,
  kFirstCapital,
  kAllLower,
  kAnyCapitalNotFirst,
  kOther,
};

constexpr int kNumCapClasses = 5;

inline const char* cap_class_name(CapClass c) {
  switch (c) {
    case CapClass::kAllCapital: return "ALL_CAPITAL";
    case CapClass::kFirstCapital: return "FIRST_CAPITAL";
    case CapClass::kAllLower: return "ALL_LOWER";
    case CapClass::kAnyCapitalNotFirst: return "ANY_CAPITAL_NOT_FIRST";
    case CapClass::kOther: return "OTHER";
  }
  return "?";
}

// Total over all strings; classes are checked in priority order so exactly
// one applies.
inline CapClass cap_class(std::string_view surface) {
  bool has_alpha = false, all_upper = true, any_upper = false;
  bool rest_all_lower = true, any_upper_not_first = false;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    unsigned char c = (unsigned char)surface[i];
    if (!std::isalpha(c)) continue;
    has_alpha = true;
    if (std::isupper(c)) {
      any_upper = true;
      if (i > 0) {
        any_upper_not_first = true;
        rest_all_lower = false;
      }
    } else {
      all_upper = false;
    }
  }
  if (!has_alpha) return CapClass::kOther;
  if (all_upper) return CapClass::kAllCapital;
  if (!surface.empty() && std::isupper((unsigned char)surface[0]) &&
      rest_all_lower)
    return CapClass::kFirstCapital;
  if (!any_upper) return CapClass::kAllLower;
  if (any_upper_not_first) return CapClass::kAnyCapitalNotFirst;
  return CapClass::kOther;
}

// The deprel slot for the path position of the common ancestor itself, which
// has no incoming path edge.
inline const char* kPathRootDeprel = "<PATH_ROOT>";

struct DepPath {
  int ancestor_index = 0;
  struct Step {
    int token_index = 0;
    std::string deprel;  // label of the edge entering token_index
    bool operator==(const Step&) const = default;
  };
  std::vector<Step> forward_steps;   // ancestor -> right headword
  std::vector<Step> backward_steps;  // ancestor -> left headword
};

// Index of the token inside the span whose head lies outside the span (or is
// the root); rightmost wins on ties, rightmost token as a fallback.
inline int headword(const EntitySpan& span, const Sentence& sentence) {
  if (span.token_begin < 0 || span.token_end > sentence.size() ||
      span.token_begin >= span.token_end)
    throw ValidationError("entity span " + span.id +
                          " out of sentence bounds");
  int best = span.token_end - 1;
  for (int t = span.token_end - 1; t >= span.token_begin; --t) {
    int h = sentence.heads[(std::size_t)t];
    if (h == kRootHead || h < span.token_begin || h >= span.token_end)
      return t;
  }
  return best;
}

namespace features_detail {

inline std::vector<int> path_to_root(int token, const Sentence& sent) {
  std::vector<int> path;
  int node = token;
  while (node != kRootHead) {
    path.push_back(node);
    node = sent.heads[(std::size_t)node];
    if ((int)path.size() > sent.size())
      throw TreeValidationError("cycle while walking to root");
  }
  return path;
}

}  // namespace features_detail

// Lowest common ancestor of the two headwords in the head-link tree, with
// the edge walks from the ancestor down to each headword.
inline DepPath dep_path(int left_head, int right_head, const Sentence& sent) {
  if (left_head < 0 || left_head >= sent.size() || right_head < 0 ||
      right_head >= sent.size())
    throw ValidationError("headword index out of range");
  auto left_up = features_detail::path_to_root(left_head, sent);
  auto right_up = features_detail::path_to_root(right_head, sent);

  std::vector<char> on_left((std::size_t)sent.size(), 0);
  for (int t : left_up) on_left[(std::size_t)t] = 1;
  int ancestor = -1;
  std::size_t right_cut = 0;
  for (std::size_t i = 0; i < right_up.size(); ++i) {
    if (on_left[(std::size_t)right_up[i]]) {
      ancestor = right_up[i];
      right_cut = i;
      break;
    }
  }
  if (ancestor < 0)
    throw TreeValidationError("no common ancestor (tree invariant violated)");

  DepPath path;
  path.ancestor_index = ancestor;
  // left_up runs headword..ancestor..root; keep headword..(just below
  // ancestor) and reverse to get the downward walk.
  for (std::size_t i = 0; i < left_up.size() && left_up[i] != ancestor; ++i)
    path.backward_steps.push_back(
        {left_up[i], sent.deprels[(std::size_t)left_up[i]]});
  std::reverse(path.backward_steps.begin(), path.backward_steps.end());
  for (std::size_t i = 0; i < right_cut; ++i)
    path.forward_steps.push_back(
        {right_up[i], sent.deprels[(std::size_t)right_up[i]]});
  std::reverse(path.forward_steps.begin(), path.forward_steps.end());
  return path;
}

// Number of other entity spans starting strictly between the earlier span's
// last token and the later span's first token, in document order.
inline int concept_distance(const EntitySpan& a, const EntitySpan& b,
                            const AnnotatedAbstract& doc) {
  const EntitySpan& first = entity_position(a) <= entity_position(b) ? a : b;
  const EntitySpan& second = entity_position(a) <= entity_position(b) ? b : a;
  std::pair<int, int> lo = {first.sentence_index, first.token_end - 1};
  std::pair<int, int> hi = {second.sentence_index, second.token_begin};
  int count = 0;
  for (const auto& e : doc.entities) {
    if (e.id == a.id || e.id == b.id) continue;
    auto pos = entity_position(e);
    if (pos > lo && pos < hi) ++count;
  }
  return count;
}

// Bucketed encoding used by the classifier's distance embedding.
constexpr int kNumDistanceBuckets = 5;  // {0, 1, 2, 3, >=4}

inline int distance_bucket(int distance) {
  return distance >= 4 ? 4 : distance;
}

}  // namespace scirel
