#pragma once

// Flat key=value run configuration: one schema-versioned file drives every
// pipeline stage, with command-line flags overriding individual keys.
// Relative input paths resolve against the config file's directory, so a
// bundled corpus + config pair works from any working directory; paths given
// on the command line resolve against the working directory as usual.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scirel/errors.hpp"
#include "scirel/model.hpp"
#include "scirel/train.hpp"
#include "scirel/util.hpp"
#include "scirel/version.hpp"

namespace scirel {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig cfg;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      std::string line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') {
        if (pos > text.size()) break;
        continue;
      }
      std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(line_no) + " is not 'key = value': " + t);
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
      if (cfg.values_.count(key))
        throw ConfigError("duplicate config key '" + key + "' (line " + std::to_string(line_no) + ")");
      cfg.values_[key] = value;
      if (pos > text.size()) break;
    }
    return cfg;
  }

  static KeyValueConfig from_file(const std::string& path) {
    KeyValueConfig cfg = parse(read_file(path));
    cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
    return cfg;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& base_dir() const { return base_dir_; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
  }

  long long get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      long long v = std::stoll(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end == nullptr || *end != '\0' || it->second.empty())
      throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: " + v);
  }

  std::uint64_t get_u64(const std::string& key) const {
    const std::string v = required(key);
    try {
      std::size_t used = 0;
      std::uint64_t r = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return r;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not an unsigned integer: " + v);
    }
  }

  // Input path: relative values resolve against the config file location.
  std::string path(const std::string& key, const std::string& fallback = "") const {
    std::string v = str(key, fallback);
    if (v.empty()) return v;
    std::filesystem::path p(v);
    if (p.is_absolute() || base_dir_.empty()) return v;
    return (std::filesystem::path(base_dir_) / p).string();
  }

  void check_known(const std::set<std::string>& known) const {
    for (const auto& [k, v] : values_)
      if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string base_dir_;
};

struct PipelineConfig {
  ModelConfig model;
  TrainConfig train;
  std::string precision = "f32";  // f32 | f64

  // Inputs (resolved against the config file directory when relative).
  std::string train_docs, train_relations;
  std::string dev_docs, dev_relations;
  std::string embeddings_path, concept_vocab_path;
  // Outputs (resolved against the working directory).
  std::string checkpoint_out, log_out, predictions_out, report_out;

  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "schema_version", "seed", "precision", "label_mode",
        "word_dim", "lstm_hidden", "char_hidden", "char_dim", "feature_dim",
        "deprel_dim", "distance_dim", "projection_dim",
        "dep_feat", "dist_feat", "dep_lstm", "concept_layer", "baseline_concept",
        "exact_match_bypass", "concept_query", "finetune_words", "pair_window",
        "lr", "none_filter_p", "clip_norm", "stop_train_accuracy",
        "max_epochs", "patience", "batch_size", "tune_metric",
        "train_docs", "train_relations", "dev_docs", "dev_relations",
        "embeddings", "concept_vocab",
        "checkpoint_out", "log_out", "predictions_out", "report_out",
    };
    return keys;
  }

  static PipelineConfig from_kv(const KeyValueConfig& kv) {
    kv.check_known(known_keys());
    long long schema = kv.get_int("schema_version", kConfigSchemaVersion);
    if (schema != kConfigSchemaVersion)
      throw ConfigError("config schema_version " + std::to_string(schema) +
                        " unsupported (expected " + std::to_string(kConfigSchemaVersion) + ")");
    PipelineConfig cfg;
    const std::uint64_t seed = kv.get_u64("seed");
    cfg.model.seed = seed;
    cfg.train.seed = seed;

    cfg.precision = kv.str("precision", "f32");
    if (cfg.precision != "f32" && cfg.precision != "f64")
      throw ConfigError("precision must be f32 or f64, got " + cfg.precision);

    const std::string mode = kv.str("label_mode", "twelve");
    if (mode == "twelve") cfg.model.label_mode = ModelConfig::LabelMode::kTwelve;
    else if (mode == "six") cfg.model.label_mode = ModelConfig::LabelMode::kSix;
    else throw ConfigError("label_mode must be twelve or six, got " + mode);

    cfg.model.word_dim = static_cast<int>(kv.get_int("word_dim", cfg.model.word_dim));
    cfg.model.lstm_hidden = static_cast<int>(kv.get_int("lstm_hidden", cfg.model.lstm_hidden));
    cfg.model.char_hidden = static_cast<int>(kv.get_int("char_hidden", cfg.model.char_hidden));
    cfg.model.char_dim = static_cast<int>(kv.get_int("char_dim", cfg.model.char_dim));
    cfg.model.feature_dim = static_cast<int>(kv.get_int("feature_dim", cfg.model.feature_dim));
    cfg.model.deprel_dim = static_cast<int>(kv.get_int("deprel_dim", cfg.model.deprel_dim));
    cfg.model.distance_dim = static_cast<int>(kv.get_int("distance_dim", cfg.model.distance_dim));
    cfg.model.projection_dim =
        static_cast<int>(kv.get_int("projection_dim", cfg.model.projection_dim));
    cfg.model.dep_feat = kv.get_bool("dep_feat", cfg.model.dep_feat);
    cfg.model.dist_feat = kv.get_bool("dist_feat", cfg.model.dist_feat);
    cfg.model.dep_lstm = kv.get_bool("dep_lstm", cfg.model.dep_lstm);
    cfg.model.concept_layer = kv.get_bool("concept_layer", cfg.model.concept_layer);
    cfg.model.baseline_concept = kv.get_bool("baseline_concept", cfg.model.baseline_concept);
    cfg.model.exact_match_bypass = kv.get_bool("exact_match_bypass", cfg.model.exact_match_bypass);
    cfg.model.finetune_words = kv.get_bool("finetune_words", cfg.model.finetune_words);
    cfg.model.pair_window = static_cast<int>(kv.get_int("pair_window", cfg.model.pair_window));

    const std::string query = kv.str("concept_query", "first_last");
    if (query == "first_last") cfg.model.concept_query = ModelConfig::ConceptQuery::kFirstLast;
    else if (query == "weighted_avg") cfg.model.concept_query = ModelConfig::ConceptQuery::kWeightedAvg;
    else throw ConfigError("concept_query must be first_last or weighted_avg, got " + query);

    cfg.train.lr = kv.get_double("lr", cfg.train.lr);
    cfg.train.none_filter_p = kv.get_double("none_filter_p", cfg.train.none_filter_p);
    cfg.train.clip_norm = kv.get_double("clip_norm", cfg.train.clip_norm);
    cfg.train.stop_train_accuracy =
        kv.get_double("stop_train_accuracy", cfg.train.stop_train_accuracy);
    cfg.train.max_epochs = static_cast<int>(kv.get_int("max_epochs", cfg.train.max_epochs));
    cfg.train.patience = static_cast<int>(kv.get_int("patience", cfg.train.patience));
    cfg.train.batch_size = static_cast<int>(kv.get_int("batch_size", cfg.train.batch_size));

    const std::string metric = kv.str("tune_metric", "micro_f1");
    if (metric == "micro_f1") cfg.train.tune_metric = TrainConfig::TuneMetric::kMicroF1;
    else if (metric == "macro_f1") cfg.train.tune_metric = TrainConfig::TuneMetric::kMacroF1;
    else throw ConfigError("tune_metric must be micro_f1 or macro_f1, got " + metric);

    cfg.train_docs = kv.path("train_docs");
    cfg.train_relations = kv.path("train_relations");
    cfg.dev_docs = kv.path("dev_docs");
    cfg.dev_relations = kv.path("dev_relations");
    cfg.embeddings_path = kv.path("embeddings");
    cfg.concept_vocab_path = kv.path("concept_vocab");
    cfg.checkpoint_out = kv.str("checkpoint_out", "");
    cfg.log_out = kv.str("log_out", "");
    cfg.predictions_out = kv.str("predictions_out", "");
    cfg.report_out = kv.str("report_out", "");

    cfg.model.validate();
    cfg.train.validate();
    return cfg;
  }
};

}  // namespace scirel
