#pragma once

// Scoring for the two task settings: direction-aware 6-class classification
// (class AND direction must match; COMPARE has no direction) and
// direction-agnostic extraction (any non-NONE label counts as a detection).
// Gold and predicted lists must cover identical (document, pair) key sets;
// argument order within a pair is canonicalized before comparison, so
// USAGE(a,b,REVERSE) and USAGE(b,a) denote the same directed relation.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scirel/corpus.hpp"
#include "scirel/errors.hpp"

namespace scirel {

// Order that treats digit runs numerically ("X.9" before "X.10"), so
// canonical pair order follows the usual entity numbering.
inline bool natural_id_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ia = i, jb = j;
      while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
      while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
      std::string_view ra = a.substr(i, ia - i), rb = b.substr(j, jb - j);
      std::string_view sa = ra.substr(std::min(ra.find_first_not_of('0'), ra.size() - 1));
      std::string_view sb = rb.substr(std::min(rb.find_first_not_of('0'), rb.size() - 1));
      if (sa.size() != sb.size()) return sa.size() < sb.size();
      if (sa != sb) return sa < sb;
      i = ia;
      j = jb;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  return (a.size() - i) < (b.size() - j);
}

// Put the pair into a fixed argument order, flipping the direction flag of
// directional relations when the arguments swap.
inline RelationInstance canonicalize_pair(const RelationInstance& inst) {
  RelationInstance out = inst;
  if (natural_id_less(out.right_id, out.left_id)) {
    std::swap(out.left_id, out.right_id);
    if (is_directional(out.type))
      out.direction = out.direction == Direction::kForward ? Direction::kReverse
                                                           : Direction::kForward;
  }
  if (!is_directional(out.type)) out.direction = Direction::kForward;
  return out;
}

namespace eval_detail {

inline std::string pair_key(const RelationInstance& inst) {
  return inst.doc_id + "\x01" + inst.left_id + "\x01" + inst.right_id;
}

inline std::map<std::string, RelationInstance> keyed(const std::vector<RelationInstance>& list,
                                                     const char* side) {
  std::map<std::string, RelationInstance> out;
  for (const auto& inst : list) {
    RelationInstance c = canonicalize_pair(inst);
    auto [it, fresh] = out.emplace(pair_key(c), c);
    if (!fresh)
      throw PairingError(std::string("duplicate ") + side + " entry for pair (" + c.doc_id +
                         ": " + c.left_id + ", " + c.right_id + ")");
  }
  return out;
}

inline std::string describe_key(const std::string& key) {
  std::string out = key;
  for (char& c : out)
    if (c == '\x01') c = '/';
  return out;
}

}  // namespace eval_detail

// Canonicalized gold/pred pairs joined on (doc, pair) keys. Any key present
// on one side only is an error.
inline std::vector<std::pair<RelationInstance, RelationInstance>> pair_instances(
    const std::vector<RelationInstance>& gold, const std::vector<RelationInstance>& pred) {
  auto g = eval_detail::keyed(gold, "gold");
  auto p = eval_detail::keyed(pred, "prediction");
  std::vector<std::string> missing_in_pred, missing_in_gold;
  for (const auto& [k, v] : g)
    if (!p.count(k)) missing_in_pred.push_back(eval_detail::describe_key(k));
  for (const auto& [k, v] : p)
    if (!g.count(k)) missing_in_gold.push_back(eval_detail::describe_key(k));
  if (!missing_in_pred.empty() || !missing_in_gold.empty()) {
    std::ostringstream msg;
    msg << "gold and prediction pair keys differ;";
    if (!missing_in_pred.empty()) {
      msg << " missing from predictions:";
      for (const auto& k : missing_in_pred) msg << " " << k;
      msg << ";";
    }
    if (!missing_in_gold.empty()) {
      msg << " missing from gold:";
      for (const auto& k : missing_in_gold) msg << " " << k;
    }
    throw PairingError(msg.str());
  }
  std::vector<std::pair<RelationInstance, RelationInstance>> out;
  out.reserve(g.size());
  for (const auto& [k, v] : g) out.emplace_back(v, p.at(k));
  return out;
}

enum class ZeroSupport {
  kCountAsZero,  // class with no gold and no predictions contributes F1=0
  kSkip,         // such classes are left out of the macro average
};

struct ClassScore {
  long long tp = 0, fp = 0, fn = 0;
  double precision = 0, recall = 0, f1 = 0;  // percentages
  bool zero_support = false;
};

namespace eval_detail {

inline void finish(ClassScore& s) {
  s.zero_support = s.tp + s.fp + s.fn == 0;
  s.precision = s.tp + s.fp == 0 ? 0.0 : 100.0 * s.tp / static_cast<double>(s.tp + s.fp);
  s.recall = s.tp + s.fn == 0 ? 0.0 : 100.0 * s.tp / static_cast<double>(s.tp + s.fn);
  s.f1 = s.precision + s.recall == 0 ? 0.0
                                     : 2 * s.precision * s.recall / (s.precision + s.recall);
}

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace eval_detail

struct MetricsReport {
  std::array<ClassScore, kNumRelationClasses> per_class;
  double micro_precision = 0, micro_recall = 0, micro_f1 = 0;
  double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
  std::vector<std::string> zero_support_classes;
  long long paired = 0;

  std::string to_records() const {
    std::ostringstream out;
    for (int c = 0; c < kNumRelationClasses; ++c) {
      const ClassScore& s = per_class[static_cast<std::size_t>(c)];
      out << "class=" << relation_type_name(static_cast<RelationType>(c)) << " tp=" << s.tp
          << " fp=" << s.fp << " fn=" << s.fn << " precision=" << eval_detail::pct(s.precision)
          << " recall=" << eval_detail::pct(s.recall) << " f1=" << eval_detail::pct(s.f1)
          << " zero_support=" << (s.zero_support ? 1 : 0) << "\n";
    }
    out << "summary=micro precision=" << eval_detail::pct(micro_precision)
        << " recall=" << eval_detail::pct(micro_recall) << " f1=" << eval_detail::pct(micro_f1)
        << "\n";
    out << "summary=macro precision=" << eval_detail::pct(macro_precision)
        << " recall=" << eval_detail::pct(macro_recall) << " f1=" << eval_detail::pct(macro_f1)
        << "\n";
    out << "pairs=" << paired << "\n";
    return out.str();
  }

  std::string to_table() const {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-14s %8s %8s %8s %6s %6s %6s\n", "label", "P", "R", "F1",
                  "TP", "FP", "FN");
    out << line;
    for (int c = 0; c < kNumRelationClasses; ++c) {
      const ClassScore& s = per_class[static_cast<std::size_t>(c)];
      std::snprintf(line, sizeof(line), "%-14s %8.2f %8.2f %8.2f %6lld %6lld %6lld%s\n",
                    relation_type_name(static_cast<RelationType>(c)), s.precision, s.recall, s.f1,
                    s.tp, s.fp, s.fn, s.zero_support ? "  (no support)" : "");
      out << line;
    }
    std::snprintf(line, sizeof(line), "%-14s %8.2f %8.2f %8.2f\n", "micro", micro_precision,
                  micro_recall, micro_f1);
    out << line;
    std::snprintf(line, sizeof(line), "%-14s %8.2f %8.2f %8.2f\n", "macro", macro_precision,
                  macro_recall, macro_f1);
    out << line;
    return out.str();
  }
};

inline MetricsReport score_classification(const std::vector<RelationInstance>& gold,
                                          const std::vector<RelationInstance>& pred,
                                          ZeroSupport zero_mode = ZeroSupport::kCountAsZero) {
  auto pairs = pair_instances(gold, pred);
  MetricsReport report;
  report.paired = static_cast<long long>(pairs.size());
  for (const auto& [g, p] : pairs) {
    const bool gold_rel = g.type != RelationType::kNone;
    const bool pred_rel = p.type != RelationType::kNone;
    const bool correct = gold_rel && pred_rel && g.type == p.type &&
                         (!is_directional(g.type) || g.direction == p.direction);
    if (correct) {
      ++report.per_class[static_cast<std::size_t>(six_label_index(g.type))].tp;
      continue;
    }
    if (gold_rel) ++report.per_class[static_cast<std::size_t>(six_label_index(g.type))].fn;
    if (pred_rel) ++report.per_class[static_cast<std::size_t>(six_label_index(p.type))].fp;
  }
  long long tp = 0, fp = 0, fn = 0;
  for (auto& s : report.per_class) {
    eval_detail::finish(s);
    tp += s.tp;
    fp += s.fp;
    fn += s.fn;
  }
  report.micro_precision = tp + fp == 0 ? 0.0 : 100.0 * tp / static_cast<double>(tp + fp);
  report.micro_recall = tp + fn == 0 ? 0.0 : 100.0 * tp / static_cast<double>(tp + fn);
  report.micro_f1 = report.micro_precision + report.micro_recall == 0
                        ? 0.0
                        : 2 * report.micro_precision * report.micro_recall /
                              (report.micro_precision + report.micro_recall);
  double sp = 0, sr = 0, sf = 0;
  int counted = 0;
  for (int c = 0; c < kNumRelationClasses; ++c) {
    const ClassScore& s = report.per_class[static_cast<std::size_t>(c)];
    if (s.zero_support) {
      report.zero_support_classes.push_back(relation_type_name(static_cast<RelationType>(c)));
      if (zero_mode == ZeroSupport::kSkip) continue;
    }
    sp += s.precision;
    sr += s.recall;
    sf += s.f1;
    ++counted;
  }
  if (counted > 0) {
    report.macro_precision = sp / counted;
    report.macro_recall = sr / counted;
    report.macro_f1 = sf / counted;
  }
  return report;
}

struct ExtractionReport {
  long long tp = 0, fp = 0, fn = 0;
  double precision = 0, recall = 0, f1 = 0;
  long long paired = 0;

  std::string to_records() const {
    std::ostringstream out;
    out << "extraction tp=" << tp << " fp=" << fp << " fn=" << fn
        << " precision=" << eval_detail::pct(precision) << " recall=" << eval_detail::pct(recall)
        << " f1=" << eval_detail::pct(f1) << "\n";
    out << "pairs=" << paired << "\n";
    return out.str();
  }

  std::string to_table() const {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-14s %8s %8s %8s %6s %6s %6s\n", "", "P", "R", "F1", "TP",
                  "FP", "FN");
    out << line;
    std::snprintf(line, sizeof(line), "%-14s %8.2f %8.2f %8.2f %6lld %6lld %6lld\n", "extraction",
                  precision, recall, f1, tp, fp, fn);
    out << line;
    return out.str();
  }
};

inline ExtractionReport score_extraction(const std::vector<RelationInstance>& gold,
                                         const std::vector<RelationInstance>& pred) {
  auto pairs = pair_instances(gold, pred);
  ExtractionReport report;
  report.paired = static_cast<long long>(pairs.size());
  for (const auto& [g, p] : pairs) {
    const bool gold_rel = g.type != RelationType::kNone;
    const bool pred_rel = p.type != RelationType::kNone;
    if (gold_rel && pred_rel) ++report.tp;
    else if (pred_rel) ++report.fp;
    else if (gold_rel) ++report.fn;
  }
  report.precision =
      report.tp + report.fp == 0 ? 0.0 : 100.0 * report.tp / static_cast<double>(report.tp + report.fp);
  report.recall =
      report.tp + report.fn == 0 ? 0.0 : 100.0 * report.tp / static_cast<double>(report.tp + report.fn);
  report.f1 = report.precision + report.recall == 0
                  ? 0.0
                  : 2 * report.precision * report.recall / (report.precision + report.recall);
  return report;
}

struct ConfusionMatrix {
  std::vector<std::string> labels;                // row/col order
  std::vector<std::vector<long long>> counts;     // [gold][pred]
  long long total = 0;

  long long trace() const {
    long long t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
  }

  std::string to_table() const {
    std::ostringstream out;
    out << "rows: gold, columns: predicted\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
      out << "  [" << i << "] " << labels[i] << "\n";
    char cell[32];
    out << "      ";
    for (std::size_t j = 0; j < labels.size(); ++j) {
      std::snprintf(cell, sizeof(cell), "%6zu", j);
      out << cell;
    }
    out << "\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::snprintf(cell, sizeof(cell), "[%2zu]  ", i);
      out << cell;
      for (std::size_t j = 0; j < labels.size(); ++j) {
        std::snprintf(cell, sizeof(cell), "%6lld", counts[i][j]);
        out << cell;
      }
      out << "\n";
    }
    return out.str();
  }
};

// Twelve-label mode keeps NONE and the direction-split labels; six-label mode
// folds directions together and drops NONE rows/columns entirely (instances
// with NONE on either side are skipped there).
inline ConfusionMatrix confusion(const std::vector<RelationInstance>& gold,
                                 const std::vector<RelationInstance>& pred,
                                 bool twelve_label = true) {
  auto pairs = pair_instances(gold, pred);
  ConfusionMatrix m;
  const int n = twelve_label ? kNumTwelveLabels : kNumRelationClasses;
  for (int i = 0; i < n; ++i)
    m.labels.push_back(twelve_label ? twelve_label_name(i)
                                    : relation_type_name(static_cast<RelationType>(i)));
  m.counts.assign(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(n), 0));
  for (const auto& [g, p] : pairs) {
    if (!twelve_label && (g.type == RelationType::kNone || p.type == RelationType::kNone)) continue;
    const int gi = twelve_label ? twelve_label_index(g.type, g.direction) : six_label_index(g.type);
    const int pi = twelve_label ? twelve_label_index(p.type, p.direction) : six_label_index(p.type);
    ++m.counts[static_cast<std::size_t>(gi)][static_cast<std::size_t>(pi)];
    ++m.total;
  }
  return m;
}

// Fill in explicit NONE entries for keys present on only one side, so files
// that list only asserted relations can be scored against full candidate
// predictions.
inline void complete_with_none(std::vector<RelationInstance>* gold,
                               std::vector<RelationInstance>* pred) {
  auto g = eval_detail::keyed(*gold, "gold");
  auto p = eval_detail::keyed(*pred, "prediction");
  for (const auto& [k, inst] : p)
    if (!g.count(k)) {
      RelationInstance none = inst;
      none.type = RelationType::kNone;
      none.direction = Direction::kForward;
      gold->push_back(none);
    }
  for (const auto& [k, inst] : g)
    if (!p.count(k)) {
      RelationInstance none = inst;
      none.type = RelationType::kNone;
      none.direction = Direction::kForward;
      pred->push_back(none);
    }
}

}  // namespace scirel
