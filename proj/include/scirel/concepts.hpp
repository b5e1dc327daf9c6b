#pragma once

// Frequency-filtered multiword concept vocabulary, concept-token corpus
// rewriting for pretraining, and n-gram candidate generation for the
// attention layer.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scirel/errors.hpp"
#include "scirel/util.hpp"

namespace scirel {

// Matching is by string: lowercase, whitespace collapsed to single spaces.
inline std::string normalize_concept(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    if (std::isspace((unsigned char)ch)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += (char)std::tolower((unsigned char)ch);
  }
  return out;
}

inline std::string concept_token(std::string_view normalized) {
  std::string out(normalized);
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

class ConceptVocabulary {
 public:
  struct Entry {
    std::string text;  // normalized
    long long count = 0;
  };

  // Entries are concepts with count strictly greater than min_frequency;
  // row ids are assigned by (count descending, then lexicographic).
  static ConceptVocabulary build(const std::vector<std::string>& occurrences,
                                 long long min_frequency) {
    if (min_frequency < 0)
      throw ValidationError("min_frequency must be non-negative");
    std::map<std::string, long long> counts;
    for (const auto& occ : occurrences) {
      std::string norm = normalize_concept(occ);
      if (!norm.empty()) ++counts[norm];
    }
    ConceptVocabulary vocab;
    vocab.min_frequency_ = min_frequency;
    for (const auto& [text, count] : counts)
      if (count > min_frequency) vocab.entries_.push_back({text, count});
    std::sort(vocab.entries_.begin(), vocab.entries_.end(),
              [](const Entry& a, const Entry& b) {
                if (a.count != b.count) return a.count > b.count;
                return a.text < b.text;
              });
    vocab.rebuild_index();
    return vocab;
  }

  int size() const { return (int)entries_.size(); }
  long long min_frequency() const { return min_frequency_; }
  const Entry& entry(int row) const { return entries_[(std::size_t)row]; }

  // Row id for a normalized concept string, or -1.
  int row_of(std::string_view normalized) const {
    auto it = index_.find(std::string(normalized));
    return it == index_.end() ? -1 : it->second;
  }

  int max_words() const { return max_words_; }

  // File format: one "<count>\t<concept>" per line, sorted by
  // (count desc, lex).
  std::string to_file() const {
    std::string out;
    for (const auto& e : entries_)
      out += std::to_string(e.count) + "\t" + e.text + "\n";
    return out;
  }

  static ConceptVocabulary from_file(std::string_view text,
                                     long long min_frequency = 0) {
    ConceptVocabulary vocab;
    vocab.min_frequency_ = min_frequency;
    int line_no = 0;
    for (const auto& line : split(text, '\n')) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw FormatError("vocabulary line " + std::to_string(line_no) +
                          " missing tab separator");
      long long count = 0;
      try {
        count = std::stoll(line.substr(0, tab));
      } catch (const std::exception&) {
        throw FormatError("bad count at vocabulary line " +
                          std::to_string(line_no));
      }
      std::string text = line.substr(tab + 1);
      if (text != normalize_concept(text))
        throw FormatError("unnormalized concept at vocabulary line " +
                          std::to_string(line_no) + ": \"" + text + "\"");
      if (!vocab.entries_.empty()) {
        const Entry& prev = vocab.entries_.back();
        if (count > prev.count ||
            (count == prev.count && text <= prev.text))
          throw FormatError(
              "vocabulary not sorted by (count desc, lex) at line " +
              std::to_string(line_no));
      }
      vocab.entries_.push_back({std::move(text), count});
    }
    vocab.rebuild_index();
    return vocab;
  }

 private:
  void rebuild_index() {
    index_.clear();
    max_words_ = 0;
    for (int i = 0; i < (int)entries_.size(); ++i) {
      const Entry& e = entries_[(std::size_t)i];
      if (!index_.emplace(e.text, i).second)
        throw FormatError("duplicate vocabulary entry \"" + e.text + "\"");
      int words = 1 + (int)std::count(e.text.begin(), e.text.end(), ' ');
      max_words_ = std::max(max_words_, words);
    }
  }

  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> index_;
  long long min_frequency_ = 0;
  int max_words_ = 0;
};

// Greedy longest-match left-to-right replacement of token subsequences whose
// normalized join is in the vocabulary; matches are emitted as one token with
// internal spaces replaced by "_", everything else passes through.
inline std::vector<std::string> rewrite_corpus(
    const std::vector<std::string>& tokens, const ConceptVocabulary& vocab) {
  std::vector<std::string> out;
  const int n = (int)tokens.size();
  int i = 0;
  while (i < n) {
    int best_len = 0;
    int max_len = std::min(vocab.max_words(), n - i);
    std::string joined;
    for (int len = max_len; len >= 1 && best_len == 0; --len) {
      std::vector<std::string> window(tokens.begin() + i,
                                      tokens.begin() + i + len);
      std::string norm = normalize_concept(join(window, " "));
      if (vocab.row_of(norm) >= 0) {
        best_len = len;
        joined = concept_token(norm);
      }
    }
    if (best_len > 0) {
      out.push_back(joined);
      i += best_len;
    } else {
      out.push_back(tokens[(std::size_t)i]);
      ++i;
    }
  }
  return out;
}

struct CandidateSet {
  std::string concept_text;            // normalized
  std::vector<int> candidates;         // vocabulary row ids, ascending
  std::optional<int> exact_match;      // excluded from candidates
};

// All vocabulary entries equal to some contiguous word n-gram of the
// normalized concept text (n from 1 to the word count). The full string,
// when present, is recorded as exact_match instead of a candidate.
inline CandidateSet generate_candidates(std::string_view concept_text,
                                        const ConceptVocabulary& vocab) {
  CandidateSet set;
  set.concept_text = normalize_concept(concept_text);
  if (set.concept_text.empty())
    throw ValidationError("empty concept text for candidate generation");
  auto words = split(set.concept_text, ' ');
  const int n = (int)words.size();
  std::vector<int> rows;
  for (int len = 1; len <= n; ++len) {
    for (int start = 0; start + len <= n; ++start) {
      std::vector<std::string> window(words.begin() + start,
                                      words.begin() + start + len);
      int row = vocab.row_of(join(window, " "));
      if (row < 0) continue;
      if (len == n) {
        set.exact_match = row;
      } else {
        rows.push_back(row);
      }
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  set.candidates = std::move(rows);
  return set;
}

}  // namespace scirel
