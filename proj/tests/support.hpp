#pragma once

// Shared test helpers: subprocess runner for CLI tests, temp directories,
// file hashing, random dependency trees, and small independent oracles that
// the unit/acceptance tests compare the library against.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scirel/corpus.hpp"
#include "scirel/rng.hpp"
#include "scirel/util.hpp"

namespace testsup {

inline std::string scirel_binary() {
#ifdef SCIREL_BUILD_DIR
  return std::string(SCIREL_BUILD_DIR) + "/scirel";
#else
  return "scirel";
#endif
}

inline std::string source_dir() {
#ifdef SCIREL_SOURCE_DIR
  return SCIREL_SOURCE_DIR;
#else
  return ".";
#endif
}

struct RunResult {
  int status = -1;
  std::string out;  // stdout + stderr interleaved
};

// Runs a shell command, capturing combined output.
inline RunResult run(const std::string& command) {
  RunResult r;
  std::string cmd = command + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("scirel-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::uint64_t file_hash(const std::string& path) {
  return scirel::fnv1a64_bytes(scirel::read_file(path));
}

// ---------------------------------------------------------------------------
// Random tree generation: heads[i] for i>0 point to a random earlier token
// after a shuffle, which always yields a valid single-root tree.

inline scirel::Sentence random_tree_sentence(int n, scirel::RngStream& rng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);
  std::vector<int> heads(static_cast<std::size_t>(n), scirel::kRootHead);
  // order[0] is the root; each later node hangs off a random earlier one
  for (int k = 1; k < n; ++k) {
    int parent = order[static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(k)))];
    heads[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = parent;
  }
  scirel::Sentence sent;
  static const char* kRels[] = {"nsubj", "obj", "amod", "obl", "compound", "case"};
  for (int i = 0; i < n; ++i) {
    scirel::Token t;
    t.surface = "w" + std::to_string(i);
    t.pos = "NN";
    sent.tokens.push_back(t);
    sent.heads.push_back(heads[static_cast<std::size_t>(i)]);
    sent.deprels.push_back(heads[static_cast<std::size_t>(i)] == scirel::kRootHead
                               ? "root"
                               : kRels[rng.uniform_int(6)]);
  }
  return sent;
}

// Root path from a token up to the root, token first.
inline std::vector<int> oracle_root_path(int token, const scirel::Sentence& sent) {
  std::vector<int> path;
  for (int cur = token; cur != scirel::kRootHead; cur = sent.heads[static_cast<std::size_t>(cur)])
    path.push_back(cur);
  return path;
}

// LCA by root-path intersection: deepest node present on both root paths.
inline int oracle_lca(int a, int b, const scirel::Sentence& sent) {
  auto pa = oracle_root_path(a, sent);
  auto pb = oracle_root_path(b, sent);
  std::set<int> seen(pa.begin(), pa.end());
  for (int node : pb)
    if (seen.count(node)) return node;
  return -1;
}

// All contiguous word n-grams of a phrase that appear in the given set.
inline std::set<std::string> oracle_ngram_matches(const std::vector<std::string>& words,
                                                  const std::set<std::string>& vocab) {
  std::set<std::string> out;
  for (std::size_t len = 1; len <= words.size(); ++len) {
    for (std::size_t start = 0; start + len <= words.size(); ++start) {
      std::string g;
      for (std::size_t k = 0; k < len; ++k) {
        if (k) g += " ";
        g += words[start + k];
      }
      if (vocab.count(g)) out.insert(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force metric oracle: direct counting, no shared code with eval.hpp.

struct OracleCounts {
  long long tp = 0, fp = 0, fn = 0;
};

struct OracleScores {
  double precision = 0, recall = 0, f1 = 0;
};

inline OracleScores oracle_prf(long long tp, long long fp, long long fn) {
  OracleScores s;
  s.precision = tp + fp == 0 ? 0.0 : 100.0 * (double)tp / (double)(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : 100.0 * (double)tp / (double)(tp + fn);
  s.f1 = s.precision + s.recall == 0 ? 0.0
                                     : 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

// Gold/pred aligned by index; label strings like "USAGE:F", "COMPARE",
// "NONE". Returns per-class counts over the six relation classes.
inline std::map<std::string, OracleCounts> oracle_class_counts(
    const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
  static const char* kClasses[] = {"USAGE", "RESULT", "MODEL-FEATURE",
                                   "PART_WHOLE", "TOPIC", "COMPARE"};
  auto class_of = [](const std::string& s) { return s.substr(0, s.find(':')); };
  std::map<std::string, OracleCounts> counts;
  for (const char* c : kClasses) counts[c];
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::string gc = class_of(gold[i]);
    const std::string pc = class_of(pred[i]);
    const bool exact = gold[i] == pred[i];
    for (const char* c : kClasses) {
      if (gc == c && pc == c && exact) ++counts[c].tp;
      if (pc == c && !(gc == c && exact)) ++counts[c].fp;
      if (gc == c && !(pc == c && exact)) ++counts[c].fn;
    }
  }
  return counts;
}

}  // namespace testsup

namespace testsup {

// Two-sentence document with a dependency tree, multi-token entity and a
// cross-sentence entity; enough structure to exercise every encoder.
inline scirel::AnnotatedAbstract model_doc(const std::string& doc_id = "M01") {
  using namespace scirel;
  AnnotatedAbstract doc;
  doc.doc_id = doc_id;
  Sentence s0;
  const char* surf0[] = {"Deep", "parse", "models", "beat", "taggers"};
  const char* pos0[] = {"JJ", "NN", "NNS", "VBP", "NNS"};
  const int heads0[] = {1, 2, 3, kRootHead, 3};
  const char* rel0[] = {"amod", "compound", "nsubj", "root", "obj"};
  int offset = 0;
  for (int i = 0; i < 5; ++i) {
    Token t;
    t.surface = surf0[i];
    t.pos = pos0[i];
    t.char_begin = offset;
    t.char_end = offset + (int)t.surface.size();
    offset = t.char_end + 1;
    s0.tokens.push_back(t);
    s0.heads.push_back(heads0[i]);
    s0.deprels.push_back(rel0[i]);
  }
  Sentence s1;
  const char* surf1[] = {"Taggers", "help"};
  const char* pos1[] = {"NNS", "VBP"};
  const int heads1[] = {1, kRootHead};
  const char* rel1[] = {"nsubj", "root"};
  for (int i = 0; i < 2; ++i) {
    Token t;
    t.surface = surf1[i];
    t.pos = pos1[i];
    t.char_begin = offset;
    t.char_end = offset + (int)t.surface.size();
    offset = t.char_end + 1;
    s1.tokens.push_back(t);
    s1.heads.push_back(heads1[i]);
    s1.deprels.push_back(rel1[i]);
  }
  doc.sentences = {s0, s1};
  doc.entities = {{doc_id + ".1", 0, 0, 3, "Deep parse models"},
                  {doc_id + ".2", 0, 4, 5, "taggers"},
                  {doc_id + ".3", 1, 0, 1, "Taggers"}};
  return doc;
}

inline scirel::RelationInstance make_rel(const std::string& doc, const std::string& l,
                                         const std::string& r, scirel::RelationType t,
                                         scirel::Direction d = scirel::Direction::kForward) {
  scirel::RelationInstance inst;
  inst.doc_id = doc;
  inst.left_id = l;
  inst.right_id = r;
  inst.type = t;
  inst.direction = d;
  return inst;
}

}  // namespace testsup
