#pragma once

// Supervised training: candidate-pair dataset assembly with gold-label
// joining, per-epoch shuffling and stochastic NONE filtering, minibatch SGD,
// dev-set model selection under micro or macro F1, and checkpoint/resume with
// exact RNG stream restoration.

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scirel/corpus.hpp"
#include "scirel/errors.hpp"
#include "scirel/eval.hpp"
#include "scirel/model.hpp"
#include "scirel/rng.hpp"
#include "scirel/util.hpp"

namespace scirel {

struct TrainConfig {
  double lr = 0.05;
  double none_filter_p = 0.4;
  int max_epochs = 50;
  int patience = 5;
  enum class TuneMetric { kMicroF1, kMacroF1 };
  TuneMetric tune_metric = TuneMetric::kMicroF1;
  std::uint64_t seed = 1;
  int batch_size = 10;
  double clip_norm = 5.0;
  // When positive, also compute training-set accuracy each epoch and stop
  // once it reaches this fraction.
  double stop_train_accuracy = 0.0;

  void validate() const {
    if (!(none_filter_p >= 0.0 && none_filter_p < 1.0))
      throw ValidationError("none_filter_p must lie in [0, 1)");
    if (patience < 1) throw ValidationError("patience must be >= 1");
    if (max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
    if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
    if (!(lr > 0)) throw ValidationError("learning rate must be positive");
  }
};

struct Example {
  RelationInstance inst;  // normalized to document order
  const AnnotatedAbstract* doc = nullptr;
};

// Twelve-label mode: all candidate pairs of each document (NONE by default)
// with gold labels joined on; gold pairs outside the candidate window are
// appended so no annotation is ever dropped. Six-label mode: the gold pairs
// only.
inline std::vector<Example> build_examples(const std::vector<AnnotatedAbstract>& docs,
                                           const std::vector<RelationInstance>& gold,
                                           ModelConfig::LabelMode label_mode, int pair_window) {
  std::map<std::string, const AnnotatedAbstract*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;

  auto key_of = [](const RelationInstance& inst) {
    return inst.doc_id + "\x01" + inst.left_id + "\x01" + inst.right_id;
  };

  std::map<std::string, RelationInstance> gold_by_key;
  std::vector<std::string> gold_order;
  for (const auto& g : gold) {
    auto it = by_id.find(g.doc_id);
    if (it == by_id.end())
      throw LookupError("relation references unknown document " + g.doc_id);
    RelationInstance norm = normalize_instance(g, *it->second);
    std::string key = key_of(norm);
    if (gold_by_key.count(key))
      throw ValidationError("duplicate gold relation for pair (" + norm.doc_id + ": " +
                            norm.left_id + ", " + norm.right_id + ")");
    gold_by_key.emplace(key, norm);
    gold_order.push_back(std::move(key));
  }

  std::vector<Example> out;
  if (label_mode == ModelConfig::LabelMode::kSix) {
    for (const auto& key : gold_order) {
      const RelationInstance& inst = gold_by_key.at(key);
      if (inst.type == RelationType::kNone)
        throw ValidationError("NONE relation not allowed in six-label mode (" + inst.doc_id + ")");
      out.push_back({inst, by_id.at(inst.doc_id)});
    }
    return out;
  }

  std::map<std::string, bool> used;
  for (const auto& doc : docs) {
    for (RelationInstance inst : candidate_pairs(doc, pair_window)) {
      auto it = gold_by_key.find(key_of(inst));
      if (it != gold_by_key.end()) {
        inst = it->second;
        used[key_of(inst)] = true;
      }
      out.push_back({std::move(inst), &doc});
    }
  }
  for (const auto& key : gold_order) {
    if (used.count(key)) continue;
    const RelationInstance& inst = gold_by_key.at(key);
    out.push_back({inst, by_id.at(inst.doc_id)});
  }
  return out;
}

// Each NONE-labeled example is independently dropped with probability p;
// everything else always survives. Draw order follows list order.
inline std::vector<Example> filter_none(const std::vector<Example>& examples, double p,
                                        RngStream& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw ValidationError("filter probability must lie in [0, 1)");
  std::vector<Example> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.inst.type == RelationType::kNone && rng.bernoulli(p)) continue;
    out.push_back(ex);
  }
  return out;
}

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double dev_micro_f1 = 0;
  double dev_macro_f1 = 0;
  double train_accuracy = -1;  // only computed when stop_train_accuracy > 0
};

inline std::string format_log_line(const EpochRecord& r) {
  std::ostringstream out;
  out << "epoch=" << r.epoch << " train_loss=" << format_double(r.train_loss)
      << " dev_micro_f1=" << format_double(r.dev_micro_f1)
      << " dev_macro_f1=" << format_double(r.dev_macro_f1);
  if (r.train_accuracy >= 0) out << " train_acc=" << format_double(r.train_accuracy);
  return out.str();
}

// 1-based epoch of the best record under the metric; ties keep the earliest.
inline int select_best_epoch(const std::vector<EpochRecord>& log,
                             TrainConfig::TuneMetric metric) {
  int best = -1;
  double best_value = -1;
  for (const auto& r : log) {
    const double v = metric == TrainConfig::TuneMetric::kMicroF1 ? r.dev_micro_f1 : r.dev_macro_f1;
    if (v > best_value) {
      best_value = v;
      best = r.epoch;
    }
  }
  return best;
}

struct TrainResult {
  std::vector<EpochRecord> log;
  int best_epoch = -1;
  double best_metric = -1;
  std::string best_checkpoint;   // model at the best dev epoch
  std::string final_checkpoint;  // model at the last trained epoch (resume point)
  double final_train_accuracy = -1;
  bool stopped_early = false;

  std::string log_text() const {
    std::string out;
    for (const auto& r : log) out += format_log_line(r) + "\n";
    return out;
  }
};

namespace train_detail {

inline std::string rng_to_string(const RngStream& rng) {
  auto s = rng.save_state();
  std::ostringstream out;
  char buf[24];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(s[i]));
    out << (i ? ":" : "") << buf;
  }
  return out.str();
}

inline RngStream rng_from_string(const std::string& text) {
  std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 5) throw FormatError("malformed RNG state: " + text);
  std::array<std::uint64_t, 5> s{};
  for (std::size_t i = 0; i < 5; ++i) s[i] = std::stoull(parts[i], nullptr, 16);
  return RngStream::restore_state(s);
}

}  // namespace train_detail

template <class T>
double training_accuracy(RelationModel<T>& model, const std::vector<Example>& examples) {
  if (examples.empty()) return 0;
  long long hit = 0;
  for (const auto& ex : examples) {
    if (model.predict(ex.inst, *ex.doc).label_index == model.gold_label_index(ex.inst, *ex.doc))
      ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(examples.size());
}

template <class T>
std::vector<RelationInstance> predict_all(RelationModel<T>& model,
                                          const std::vector<Example>& examples) {
  std::vector<RelationInstance> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(model.predicted_instance(ex.inst, *ex.doc));
  return out;
}

template <class T>
TrainResult train(RelationModel<T>& model, const std::vector<Example>& train_set,
                  const std::vector<Example>& dev_set, const TrainConfig& cfg,
                  const std::string* resume_checkpoint = nullptr) {
  cfg.validate();
  RngStream shuffle_rng = RngStream::from_seed(cfg.seed).derive("train/shuffle");
  RngStream filter_rng = RngStream::from_seed(cfg.seed).derive("train/filter");

  std::vector<RelationInstance> dev_gold;
  dev_gold.reserve(dev_set.size());
  for (const auto& ex : dev_set) dev_gold.push_back(ex.inst);

  TrainResult result;
  int start_epoch = 1;
  int since_best = 0;
  if (resume_checkpoint) {
    auto state = model.load_checkpoint(*resume_checkpoint);
    auto need = [&state](const char* key) -> const std::string& {
      auto it = state.find(key);
      if (it == state.end())
        throw FormatError(std::string("checkpoint missing state key '") + key + "'");
      return it->second;
    };
    start_epoch = std::stoi(need("epoch")) + 1;
    result.best_epoch = std::stoi(need("best_epoch"));
    result.best_metric = std::strtod(need("best_metric").c_str(), nullptr);
    shuffle_rng = train_detail::rng_from_string(need("rng_shuffle"));
    filter_rng = train_detail::rng_from_string(need("rng_filter"));
    // the staleness counter continues where the saved run left off
    since_best = std::max(0, start_epoch - 1 - result.best_epoch);
  }
  for (int epoch = start_epoch; epoch <= cfg.max_epochs; ++epoch) {
    std::vector<Example> order = train_set;
    shuffle_rng.shuffle(order);
    std::vector<Example> kept = filter_none(order, cfg.none_filter_p, filter_rng);

    double loss_sum = 0;
    long long loss_count = 0;
    for (std::size_t begin = 0; begin < kept.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(kept.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      typename RelationModel<T>::Tape tape;
      std::vector<typename RelationModel<T>::Id> losses;
      for (std::size_t i = begin; i < end; ++i)
        losses.push_back(model.loss_node(tape, kept[i].inst, *kept[i].doc));
      auto mean = tape.scale(T(1) / static_cast<T>(losses.size()), tape.add_n(losses));
      const double mean_value = static_cast<double>(tape.value(mean)[0]);
      if (!std::isfinite(mean_value))
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(begin / cfg.batch_size + 1));
      tape.backward(mean);
      model.store().sgd_step(static_cast<T>(cfg.lr), static_cast<T>(cfg.clip_norm));
      loss_sum += mean_value * static_cast<double>(end - begin);
      loss_count += static_cast<long long>(end - begin);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    if (!dev_set.empty()) {
      MetricsReport dev = score_classification(dev_gold, predict_all(model, dev_set));
      rec.dev_micro_f1 = dev.micro_f1;
      rec.dev_macro_f1 = dev.macro_f1;
    }
    if (cfg.stop_train_accuracy > 0) rec.train_accuracy = training_accuracy(model, train_set);
    result.log.push_back(rec);

    std::map<std::string, std::string> state;
    state["epoch"] = std::to_string(epoch);
    state["rng_shuffle"] = train_detail::rng_to_string(shuffle_rng);
    state["rng_filter"] = train_detail::rng_to_string(filter_rng);

    const double metric = cfg.tune_metric == TrainConfig::TuneMetric::kMicroF1 ? rec.dev_micro_f1
                                                                               : rec.dev_macro_f1;
    if (metric > result.best_metric) {
      result.best_metric = metric;
      result.best_epoch = epoch;
      since_best = 0;
      state["best_epoch"] = std::to_string(epoch);
      state["best_metric"] = format_double(metric);
      result.best_checkpoint = model.save_checkpoint(state);
    } else {
      ++since_best;
    }
    state["best_epoch"] = std::to_string(result.best_epoch);
    state["best_metric"] = format_double(result.best_metric);
    result.final_checkpoint = model.save_checkpoint(state);

    if (rec.train_accuracy >= 0) result.final_train_accuracy = rec.train_accuracy;
    if (cfg.stop_train_accuracy > 0 && rec.train_accuracy >= cfg.stop_train_accuracy) {
      result.stopped_early = true;
      break;
    }
    if (since_best >= cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }
  if (result.best_checkpoint.empty()) result.best_checkpoint = result.final_checkpoint;
  return result;
}

}  // namespace scirel
