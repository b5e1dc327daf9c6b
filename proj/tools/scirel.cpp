// scirel command line front end: corpus ingestion, feature dumps, concept
// vocabulary tools, embedding pretraining, training, prediction, scoring and
// a finite-difference gradient audit.
//
// Conventions: logs on stderr, data in files (atomic temp+rename writes).
// Exit 0 on success, 1 on pipeline errors (one "<error-class>: message" line
// on stderr), 2 on usage errors.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scirel/concepts.hpp"
#include "scirel/config.hpp"
#include "scirel/corpus.hpp"
#include "scirel/embeddings.hpp"
#include "scirel/errors.hpp"
#include "scirel/eval.hpp"
#include "scirel/features.hpp"
#include "scirel/model.hpp"
#include "scirel/nn/gradcheck.hpp"
#include "scirel/rng.hpp"
#include "scirel/train.hpp"
#include "scirel/util.hpp"
#include "scirel/version.hpp"

namespace {

using scirel::ConfigError;
using scirel::ValidationError;

std::string read_input(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path))
    throw scirel::IoError(std::string(what) + " not found: " + path);
  return scirel::read_file(path);
}

std::vector<scirel::AnnotatedAbstract> load_docs(const std::string& path) {
  return scirel::documents_from_jsonl(read_input(path, "document file"));
}

std::vector<scirel::RelationInstance> load_relations(const std::string& path) {
  return scirel::parse_relation_file(read_input(path, "relation file"));
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::vector<std::string> abstracts;
  std::vector<std::string> conll;
  bool degenerate = false;
  std::string out;
};

void run_ingest(const IngestArgs& args) {
  std::vector<scirel::AbstractFragment> fragments;
  for (const auto& path : args.abstracts) {
    auto docs = scirel::parse_abstracts(read_input(path, "abstract file"));
    fragments.insert(fragments.end(), docs.begin(), docs.end());
  }
  if (fragments.empty()) throw ValidationError("no abstracts found in the input files");

  std::vector<scirel::AnnotatedAbstract> out;
  out.reserve(fragments.size());
  if (args.degenerate) {
    for (const auto& frag : fragments)
      out.push_back(scirel::attach_annotations(frag, scirel::degenerate_annotations(frag.raw_text)));
  } else {
    std::vector<scirel::ConllDocument> sidecars;
    for (const auto& path : args.conll) {
      auto docs = scirel::parse_conll_sidecar(read_input(path, "dependency file"));
      sidecars.insert(sidecars.end(), docs.begin(), docs.end());
    }
    bool any_named = false, any_unnamed = false;
    for (const auto& d : sidecars) (d.doc_id.empty() ? any_unnamed : any_named) = true;
    if (any_named && any_unnamed)
      throw scirel::FormatError("dependency sidecars mix '# doc' marked and unmarked blocks");
    if (any_unnamed) {
      if (sidecars.size() != fragments.size())
        throw ValidationError("unmarked dependency sidecar has " + std::to_string(sidecars.size()) +
                              " documents for " + std::to_string(fragments.size()) + " abstracts");
      for (std::size_t i = 0; i < fragments.size(); ++i)
        out.push_back(scirel::attach_annotations(fragments[i], sidecars[i].sentences));
    } else {
      std::map<std::string, const scirel::ConllDocument*> by_id;
      for (const auto& d : sidecars) {
        if (!by_id.emplace(d.doc_id, &d).second)
          throw ValidationError("duplicate dependency annotation for document " + d.doc_id);
      }
      for (const auto& frag : fragments) {
        auto it = by_id.find(frag.doc_id);
        if (it == by_id.end())
          throw ValidationError("no dependency annotation for document " + frag.doc_id);
        out.push_back(scirel::attach_annotations(frag, it->second->sentences));
      }
    }
  }

  std::size_t sentences = 0, entities = 0;
  for (const auto& d : out) {
    sentences += d.sentences.size();
    entities += d.entities.size();
  }
  scirel::write_file_atomic(args.out, scirel::documents_to_jsonl(out));
  std::cerr << "ingested " << out.size() << " documents (" << sentences << " sentences, "
            << entities << " entities) -> " << args.out << "\n";
}

// ---------------------------------------------------------------------------
// features dump

struct FeaturesArgs {
  std::string docs;
  int window = 1;
  std::string out;
};

void run_features(const FeaturesArgs& args) {
  auto docs = load_docs(args.docs);
  std::string lines;
  std::size_t pairs = 0;
  for (const auto& doc : docs) {
    for (const auto& inst : scirel::candidate_pairs(doc, args.window)) {
      const auto& left = doc.entity(inst.left_id);
      const auto& right = doc.entity(inst.right_id);
      const auto& ls = doc.sentences[(std::size_t)left.sentence_index];
      const auto& rs = doc.sentences[(std::size_t)right.sentence_index];
      const int lh = scirel::headword(left, ls);
      const int rh = scirel::headword(right, rs);
      const int dist = scirel::concept_distance(left, right, doc);

      nlohmann::ordered_json rec;
      rec["doc"] = doc.doc_id;
      rec["left"] = inst.left_id;
      rec["right"] = inst.right_id;
      rec["left_sentence"] = left.sentence_index;
      rec["right_sentence"] = right.sentence_index;
      auto head_json = [](int index, const scirel::Sentence& sent) {
        const auto& tok = sent.tokens[(std::size_t)index];
        return nlohmann::ordered_json{{"index", index},
                                      {"surface", tok.surface},
                                      {"cap", scirel::cap_class_name(scirel::cap_class(tok.surface))}};
      };
      rec["left_headword"] = head_json(lh, ls);
      rec["right_headword"] = head_json(rh, rs);
      rec["distance"] = dist;
      rec["distance_bucket"] = scirel::distance_bucket(dist);
      if (left.sentence_index == right.sentence_index) {
        auto path = scirel::dep_path(lh, rh, ls);
        nlohmann::ordered_json pj;
        pj["ancestor"] = path.ancestor_index;
        auto steps_json = [](const std::vector<scirel::DepPath::Step>& steps) {
          nlohmann::ordered_json arr = nlohmann::ordered_json::array();
          for (const auto& s : steps)
            arr.push_back({{"token", s.token_index}, {"deprel", s.deprel}});
          return arr;
        };
        pj["forward"] = steps_json(path.forward_steps);
        pj["backward"] = steps_json(path.backward_steps);
        rec["path"] = pj;
      } else {
        rec["path"] = nullptr;
      }
      lines += rec.dump() + "\n";
      ++pairs;
    }
  }
  scirel::write_file_atomic(args.out, lines);
  std::cerr << "dumped features for " << pairs << " candidate pairs -> " << args.out << "\n";
}

// ---------------------------------------------------------------------------
// concepts

struct ConceptsBuildArgs {
  std::vector<std::string> docs;
  std::vector<std::string> span_files;
  long long min_freq = 10;
  std::string out;
};

void run_concepts_build(const ConceptsBuildArgs& args) {
  std::vector<std::string> occurrences;
  for (const auto& path : args.docs)
    for (const auto& doc : load_docs(path))
      for (const auto& e : doc.entities) occurrences.push_back(e.text);
  for (const auto& path : args.span_files) {
    for (const auto& line : scirel::split(read_input(path, "span file"), '\n')) {
      std::string t = scirel::trim(line);
      if (!t.empty()) occurrences.push_back(t);
    }
  }
  if (occurrences.empty()) throw ValidationError("no concept occurrences in the inputs");
  auto vocab = scirel::ConceptVocabulary::build(occurrences, args.min_freq);
  scirel::write_file_atomic(args.out, vocab.to_file());
  std::cerr << "kept " << vocab.size() << " concepts (count > " << args.min_freq << ") from "
            << occurrences.size() << " occurrences -> " << args.out << "\n";
}

struct ConceptsRewriteArgs {
  std::string vocab;
  std::string in;
  std::string out;
};

void run_concepts_rewrite(const ConceptsRewriteArgs& args) {
  auto vocab = scirel::ConceptVocabulary::from_file(read_input(args.vocab, "vocabulary file"));
  std::string text = read_input(args.in, "corpus file");
  std::vector<std::string> lines = scirel::split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::string out;
  for (const auto& line : lines) {
    auto tokens = scirel::split_ws(line);
    out += scirel::join(scirel::rewrite_corpus(tokens, vocab), " ");
    out += "\n";
  }
  scirel::write_file_atomic(args.out, out);
  std::cerr << "rewrote " << lines.size() << " lines -> " << args.out << "\n";
}

struct ConceptsCandidatesArgs {
  std::string phrase;
  std::string vocab;
  std::string out;
};

void run_concepts_candidates(const ConceptsCandidatesArgs& args) {
  auto vocab = scirel::ConceptVocabulary::from_file(read_input(args.vocab, "vocabulary file"));
  auto set = scirel::generate_candidates(args.phrase, vocab);
  std::string text = "concept " + set.concept_text + "\n";
  if (set.exact_match) {
    const auto& e = vocab.entry(*set.exact_match);
    text += "exact " + std::to_string(*set.exact_match) + " " + std::to_string(e.count) + " " +
            e.text + "\n";
  }
  for (int row : set.candidates) {
    const auto& e = vocab.entry(row);
    text += "candidate " + std::to_string(row) + " " + std::to_string(e.count) + " " + e.text + "\n";
  }
  if (args.out.empty()) {
    std::cout << text;
  } else {
    scirel::write_file_atomic(args.out, text);
    std::cerr << "wrote " << set.candidates.size() << " candidates -> " << args.out << "\n";
  }
}

// ---------------------------------------------------------------------------
// embeddings train

struct EmbeddingsArgs {
  std::string corpus;
  std::string out;
  scirel::SkipgramConfig cfg;
};

void run_embeddings_train(const EmbeddingsArgs& args) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& line : scirel::split(read_input(args.corpus, "corpus file"), '\n')) {
    auto tokens = scirel::split_ws(line);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  auto result = scirel::train_skipgram(sentences, args.cfg);
  result.table.metadata().corpus_id = args.corpus;
  for (std::size_t i = 0; i < result.epoch_losses.size(); ++i)
    std::cerr << "epoch " << (i + 1) << " loss " << scirel::format_double(result.epoch_losses[i])
              << "\n";
  scirel::write_file_atomic(args.out, result.table.to_text());
  std::cerr << "trained " << result.vocab_size << " vectors on " << result.train_tokens
            << " tokens/epoch -> " << args.out << "\n";
}

// ---------------------------------------------------------------------------
// shared config handling for train / predict

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string seed;  // raw text so 64-bit seeds survive
  std::vector<std::string> ablate;
  bool baseline = false;
};

scirel::PipelineConfig resolve_config(const ConfigArgs& args) {
  scirel::KeyValueConfig kv = args.config_path.empty()
                                  ? scirel::KeyValueConfig{}
                                  : scirel::KeyValueConfig::from_file(args.config_path);
  for (const auto& pair : args.sets) {
    auto eq = pair.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + pair + "'");
    kv.set(scirel::trim(pair.substr(0, eq)), scirel::trim(pair.substr(eq + 1)));
  }
  if (!args.seed.empty()) kv.set("seed", args.seed);
  for (const auto& entry : args.ablate) {
    for (const auto& raw : scirel::split(entry, ',')) {
      std::string name = scirel::trim(raw);
      if (name.empty()) continue;
      if (name == "dep_feat" || name == "dist_feat" || name == "dep_lstm") {
        kv.set(name, "false");
      } else if (name == "concept") {
        kv.set("concept_layer", "false");
      } else {
        throw ConfigError("unknown ablation '" + name +
                          "' (expected dep_feat, dist_feat, dep_lstm or concept)");
      }
    }
  }
  if (args.baseline) {
    kv.set("concept_layer", "false");
    kv.set("baseline_concept", "true");
  }
  return scirel::PipelineConfig::from_kv(kv);
}

struct LoadedInputs {
  std::vector<scirel::AnnotatedAbstract> train_docs;
  std::optional<scirel::ConceptVocabulary> vocab;
  std::optional<scirel::EmbeddingTable> pretrained;
};

LoadedInputs load_model_inputs(const scirel::PipelineConfig& cfg) {
  LoadedInputs in;
  if (cfg.train_docs.empty()) throw ConfigError("config key train_docs is required");
  in.train_docs = load_docs(cfg.train_docs);
  if (cfg.model.concept_layer) {
    if (cfg.concept_vocab_path.empty())
      throw ConfigError("concept_layer is enabled but config key concept_vocab is missing");
    in.vocab = scirel::ConceptVocabulary::from_file(
        read_input(cfg.concept_vocab_path, "concept vocabulary"));
  }
  if (!cfg.embeddings_path.empty())
    in.pretrained =
        scirel::EmbeddingTable::from_text(read_input(cfg.embeddings_path, "embedding file"));
  return in;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  ConfigArgs config;
  std::string resume;
  std::string checkpoint_out;
  std::string log_out;
};

template <class T>
void run_train_typed(const scirel::PipelineConfig& cfg, const TrainArgs& args) {
  if (cfg.train_relations.empty()) throw ConfigError("config key train_relations is required");
  LoadedInputs in = load_model_inputs(cfg);
  auto gold = load_relations(cfg.train_relations);

  scirel::RelationModel<T> model(cfg.model, in.train_docs,
                                 in.vocab ? &*in.vocab : nullptr,
                                 in.pretrained ? &*in.pretrained : nullptr);
  auto train_set = scirel::build_examples(in.train_docs, gold, cfg.model.label_mode,
                                          cfg.model.pair_window);

  std::vector<scirel::Example> dev_set;
  std::vector<scirel::AnnotatedAbstract> dev_docs;
  if (!cfg.dev_docs.empty() || !cfg.dev_relations.empty()) {
    if (cfg.dev_docs.empty() || cfg.dev_relations.empty())
      throw ConfigError("dev_docs and dev_relations must be given together");
    dev_docs = load_docs(cfg.dev_docs);
    dev_set = scirel::build_examples(dev_docs, load_relations(cfg.dev_relations),
                                     cfg.model.label_mode, cfg.model.pair_window);
  }

  std::optional<std::string> resume_text;
  if (!args.resume.empty()) resume_text = read_input(args.resume, "checkpoint");

  std::string checkpoint_out =
      !args.checkpoint_out.empty() ? args.checkpoint_out : cfg.checkpoint_out;
  if (checkpoint_out.empty())
    throw ConfigError("no checkpoint output path (config key checkpoint_out or --checkpoint-out)");
  std::string log_out = !args.log_out.empty() ? args.log_out : cfg.log_out;

  std::cerr << "training on " << train_set.size() << " examples ("
            << in.train_docs.size() << " documents), dev " << dev_set.size() << " examples\n";
  auto result = scirel::train(model, train_set, dev_set, cfg.train,
                              resume_text ? &*resume_text : nullptr);
  std::cerr << result.log_text();
  if (result.best_epoch >= 0 && !dev_set.empty())
    std::cerr << "best epoch " << result.best_epoch << " metric "
              << scirel::format_double(result.best_metric) << "\n";

  scirel::write_file_atomic(checkpoint_out, result.best_checkpoint);
  scirel::write_file_atomic(checkpoint_out + ".final", result.final_checkpoint);
  if (!log_out.empty()) scirel::write_file_atomic(log_out, result.log_text());
  std::cerr << "wrote checkpoint -> " << checkpoint_out << "\n";
}

void run_train(const TrainArgs& args) {
  auto cfg = resolve_config(args.config);
  if (cfg.precision == "f64")
    run_train_typed<double>(cfg, args);
  else
    run_train_typed<float>(cfg, args);
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  ConfigArgs config;
  std::string checkpoint;
  std::string docs;
  std::string pairs;
  std::string out;
  bool omit_none = false;
};

template <class T>
void run_predict_typed(const scirel::PipelineConfig& cfg, const PredictArgs& args) {
  LoadedInputs in = load_model_inputs(cfg);
  scirel::RelationModel<T> model(cfg.model, in.train_docs,
                                 in.vocab ? &*in.vocab : nullptr,
                                 in.pretrained ? &*in.pretrained : nullptr);
  model.load_checkpoint(read_input(args.checkpoint, "checkpoint"));

  std::string docs_path = !args.docs.empty() ? args.docs : cfg.dev_docs;
  if (docs_path.empty()) throw ConfigError("no documents to predict on (--docs or dev_docs)");
  auto docs = load_docs(docs_path);
  std::map<std::string, const scirel::AnnotatedAbstract*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;

  std::vector<scirel::RelationInstance> inputs;
  if (!args.pairs.empty()) {
    inputs = load_relations(args.pairs);
    for (const auto& inst : inputs)
      if (!by_id.count(inst.doc_id))
        throw scirel::LookupError("pair references unknown document " + inst.doc_id);
  } else {
    if (cfg.model.label_mode == scirel::ModelConfig::LabelMode::kSix)
      throw ConfigError("six-label prediction needs --pairs with the argument pairs to label");
    for (const auto& d : docs)
      for (const auto& inst : scirel::candidate_pairs(d, cfg.model.pair_window))
        inputs.push_back(inst);
  }

  std::vector<scirel::RelationInstance> preds;
  std::size_t none_count = 0;
  for (const auto& inst : inputs) {
    auto pred = model.predicted_instance(inst, *by_id.at(inst.doc_id));
    if (pred.type == scirel::RelationType::kNone) {
      ++none_count;
      if (args.omit_none) continue;
    }
    preds.push_back(pred);
  }
  scirel::write_file_atomic(args.out, scirel::format_relation_file(preds));
  std::cerr << "predicted " << inputs.size() << " pairs (" << none_count << " none"
            << (args.omit_none ? ", omitted" : "") << ") -> " << args.out << "\n";
}

void run_predict(const PredictArgs& args) {
  auto cfg = resolve_config(args.config);
  if (cfg.precision == "f64")
    run_predict_typed<double>(cfg, args);
  else
    run_predict_typed<float>(cfg, args);
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string mode;  // classification | extraction
  std::string gold;
  std::string pred;
  std::string zero_support = "zero";
  std::string label_mode = "twelve";
  bool complete_none = false;
  bool show_confusion = false;
  std::string out;
};

void run_eval(const EvalArgs& args) {
  auto gold = load_relations(args.gold);
  auto pred = load_relations(args.pred);
  if (args.complete_none) scirel::complete_with_none(&gold, &pred);

  scirel::ZeroSupport zero_mode;
  if (args.zero_support == "zero")
    zero_mode = scirel::ZeroSupport::kCountAsZero;
  else if (args.zero_support == "skip")
    zero_mode = scirel::ZeroSupport::kSkip;
  else
    throw ConfigError("--zero-support must be zero or skip, got " + args.zero_support);
  if (args.label_mode != "twelve" && args.label_mode != "six")
    throw ConfigError("--label-mode must be twelve or six, got " + args.label_mode);

  std::string records, table;
  if (args.mode == "classification") {
    auto report = scirel::score_classification(gold, pred, zero_mode);
    records = report.to_records();
    table = report.to_table();
  } else if (args.mode == "extraction") {
    auto report = scirel::score_extraction(gold, pred);
    records = report.to_records();
    table = report.to_table();
  } else {
    throw ConfigError("--mode must be classification or extraction, got " + args.mode);
  }

  std::cout << table;
  if (args.show_confusion)
    std::cout << "\n" << scirel::confusion(gold, pred, args.label_mode == "twelve").to_table();
  if (!args.out.empty()) {
    scirel::write_file_atomic(args.out, records);
    std::cerr << "wrote report -> " << args.out << "\n";
  }
}

// ---------------------------------------------------------------------------
// gradcheck: finite differences against the analytic gradients of a complete
// small model (every encoder and the attention layer active).

struct GradcheckArgs {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  double floor = 1e-4;
  std::uint64_t seed = 7;
  std::string dims = "tiny";
};

scirel::AnnotatedAbstract gradcheck_document() {
  scirel::AnnotatedAbstract doc;
  doc.doc_id = "G01";
  scirel::Sentence s0;
  const char* surf0[] = {"Deep", "parse", "models", "beat", "taggers"};
  const char* pos0[] = {"JJ", "NN", "NNS", "VBP", "NNS"};
  const int heads0[] = {1, 2, 3, scirel::kRootHead, 3};
  const char* rel0[] = {"amod", "compound", "nsubj", "root", "obj"};
  int offset = 0;
  for (int i = 0; i < 5; ++i) {
    scirel::Token t;
    t.surface = surf0[i];
    t.pos = pos0[i];
    t.char_begin = offset;
    t.char_end = offset + (int)t.surface.size();
    offset = t.char_end + 1;
    s0.tokens.push_back(t);
    s0.heads.push_back(heads0[i]);
    s0.deprels.push_back(rel0[i]);
  }
  scirel::Sentence s1;
  const char* surf1[] = {"Taggers", "help"};
  const char* pos1[] = {"NNS", "VBP"};
  const int heads1[] = {1, scirel::kRootHead};
  const char* rel1[] = {"nsubj", "root"};
  for (int i = 0; i < 2; ++i) {
    scirel::Token t;
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
  doc.entities = {{"G01.1", 0, 0, 3, "Deep parse models"},
                  {"G01.2", 0, 4, 5, "taggers"},
                  {"G01.3", 1, 0, 1, "Taggers"}};
  return doc;
}

void run_gradcheck(const GradcheckArgs& args) {
  if (args.dims != "tiny")
    throw ConfigError("gradcheck supports --dims tiny only (got " + args.dims + ")");
  scirel::ModelConfig cfg;
  cfg.word_dim = 6;
  cfg.lstm_hidden = 4;
  cfg.char_hidden = 3;
  cfg.char_dim = 3;
  cfg.feature_dim = 2;
  cfg.deprel_dim = 3;
  cfg.distance_dim = 2;
  cfg.projection_dim = 5;
  cfg.pair_window = 1;
  cfg.seed = args.seed;

  auto doc = gradcheck_document();
  auto vocab = scirel::ConceptVocabulary::build(
      {"deep parse", "deep parse", "models", "models", "parse", "parse"}, 1);

  scirel::EmbeddingTable pretrained(cfg.word_dim);
  {
    auto rng = scirel::RngStream::from_seed(args.seed).derive("gradcheck/pretrained");
    for (const char* tok : {"deep", "parse", "models", "beat", "taggers", "help", "deep_parse"}) {
      std::vector<double> v((std::size_t)cfg.word_dim);
      for (auto& x : v) x = rng.uniform(-0.5, 0.5);
      pretrained.add(tok, v);
    }
  }

  scirel::RelationModel<double> model(cfg, {doc}, &vocab, &pretrained);
  scirel::RelationInstance same_sentence{"G01", "G01.1", "G01.2", scirel::RelationType::kUsage,
                                         scirel::Direction::kForward};
  scirel::RelationInstance cross_sentence{"G01", "G01.1", "G01.3", scirel::RelationType::kResult,
                                          scirel::Direction::kReverse};

  auto loss_fn = [&](bool compute_grad) {
    scirel::RelationModel<double>::Tape tape;
    auto a = model.loss_node(tape, same_sentence, doc);
    auto b = model.loss_node(tape, cross_sentence, doc);
    auto mean = tape.scale(0.5, tape.add_n({a, b}));
    if (compute_grad) tape.backward(mean);
    return tape.value(mean)[0];
  };

  auto report = scirel::nn::grad_check(
      model.store(), loss_fn, args.epsilon, args.floor,
      [](const std::string& name) { return name == "emb.concept"; });

  std::cout << report.to_string();
  std::cout << "max relative error " << scirel::format_double(report.worst.rel_err) << " over "
            << report.checked << " components (tolerance "
            << scirel::format_double(args.tolerance) << ")\n";
  if (!report.pass(args.tolerance)) throw scirel::NumericError("gradient check failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic relation extraction pipeline"};
  app.set_version_flag("--version", std::string("scirel ") + scirel::kVersion +
                                        " (config schema " +
                                        std::to_string(scirel::kConfigSchemaVersion) + ")");
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "parse abstracts and attach dependency annotations");
  ingest->add_option("--abstracts", ingest_args.abstracts, "abstract markup file")
      ->required()
      ->take_all();
  ingest->add_option("--conll", ingest_args.conll, "dependency sidecar file")->take_all();
  ingest->add_flag("--degenerate", ingest_args.degenerate,
                   "fabricate flat annotations instead of reading sidecars");
  ingest->add_option("--out", ingest_args.out, "output JSONL path")->required();
  ingest->callback([&] {
    if (!ingest_args.degenerate && ingest_args.conll.empty())
      throw ConfigError("ingest needs --conll files or --degenerate");
    run_ingest(ingest_args);
  });

  FeaturesArgs features_args;
  auto* features = app.add_subcommand("features", "dump pairwise feature records");
  features->fallthrough();
  features->add_option("--docs", features_args.docs, "ingested JSONL corpus")->required();
  features->add_option("--window", features_args.window, "cross-sentence pair window");
  features->add_option("--out", features_args.out, "output JSONL path")->required();
  features->callback([&] { run_features(features_args); });
  features->add_subcommand("dump", "dump pairwise feature records")->fallthrough();

  auto* concepts = app.add_subcommand("concepts", "concept vocabulary tools");
  concepts->require_subcommand(1);

  ConceptsBuildArgs cbuild_args;
  auto* cbuild = concepts->add_subcommand("build", "count entity spans into a vocabulary");
  cbuild->add_option("--docs", cbuild_args.docs, "ingested JSONL corpus")->take_all();
  cbuild->add_option("--spans", cbuild_args.span_files, "extra span text file, one per line")
      ->take_all();
  cbuild->add_option("--min-freq", cbuild_args.min_freq, "keep concepts with count > this");
  cbuild->add_option("--out", cbuild_args.out, "vocabulary output path")->required();
  cbuild->callback([&] {
    if (cbuild_args.docs.empty() && cbuild_args.span_files.empty())
      throw ConfigError("concepts build needs --docs or --spans inputs");
    run_concepts_build(cbuild_args);
  });

  ConceptsRewriteArgs crewrite_args;
  auto* crewrite = concepts->add_subcommand("rewrite", "join multiword concepts in a text corpus");
  crewrite->add_option("--vocab", crewrite_args.vocab, "vocabulary file")->required();
  crewrite->add_option("--in", crewrite_args.in, "tokenized corpus, one sentence per line")
      ->required();
  crewrite->add_option("--out", crewrite_args.out, "rewritten corpus path")->required();
  crewrite->callback([&] { run_concepts_rewrite(crewrite_args); });

  ConceptsCandidatesArgs ccand_args;
  auto* ccand = concepts->add_subcommand("candidates", "list candidate concepts for a phrase");
  ccand->add_option("phrase", ccand_args.phrase, "concept phrase")->required();
  ccand->add_option("--vocab", ccand_args.vocab, "vocabulary file")->required();
  ccand->add_option("--out", ccand_args.out, "optional output path (default stdout)");
  ccand->callback([&] { run_concepts_candidates(ccand_args); });

  auto* embeddings = app.add_subcommand("embeddings", "embedding pretraining");
  embeddings->require_subcommand(1);
  EmbeddingsArgs emb_args;
  auto* etrain = embeddings->add_subcommand("train", "skip-gram negative sampling pretraining");
  etrain->add_option("--corpus", emb_args.corpus, "tokenized corpus, one sentence per line")
      ->required();
  etrain->add_option("--out", emb_args.out, "embedding table output path")->required();
  etrain->add_option("--dim", emb_args.cfg.dim, "vector width");
  etrain->add_option("--window", emb_args.cfg.window, "maximum one-sided window");
  etrain->add_option("--negatives", emb_args.cfg.negatives, "negative samples per pair");
  etrain->add_option("--min-count", emb_args.cfg.min_count, "collapse rarer tokens to <UNK>");
  etrain->add_option("--epochs", emb_args.cfg.epochs, "training epochs");
  etrain->add_option("--lr", emb_args.cfg.lr, "initial learning rate");
  etrain->add_option("--seed", emb_args.cfg.seed, "RNG seed")->required();
  etrain->callback([&] { run_embeddings_train(emb_args); });

  auto add_config_options = [](CLI::App* cmd, ConfigArgs& cfg) {
    cmd->add_option("--config", cfg.config_path, "key=value run configuration")->required();
    cmd->add_option("--set", cfg.sets, "override a config key (key=value)")->take_all();
    cmd->add_option("--seed", cfg.seed, "override the run seed");
    cmd->add_option("--ablate", cfg.ablate,
                    "disable components: dep_feat, dist_feat, dep_lstm, concept")
        ->take_all();
    cmd->add_flag("--baseline", cfg.baseline,
                  "replace concept selection with span-state attention");
  };

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train the relation classifier");
  add_config_options(train, train_args.config);
  train->add_option("--resume", train_args.resume, "resume from a .final checkpoint");
  train->add_option("--checkpoint-out", train_args.checkpoint_out, "checkpoint output path");
  train->add_option("--log-out", train_args.log_out, "epoch log output path");
  train->callback([&] { run_train(train_args); });

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "label entity pairs with a trained model");
  add_config_options(predict, predict_args.config);
  predict->add_option("--checkpoint", predict_args.checkpoint, "trained checkpoint")->required();
  predict->add_option("--docs", predict_args.docs, "documents to predict on (JSONL)");
  predict->add_option("--pairs", predict_args.pairs,
                      "relation file naming the argument pairs to label");
  predict->add_option("--out", predict_args.out, "predictions output path")->required();
  predict->add_flag("--omit-none", predict_args.omit_none, "drop NONE predictions from the output");
  predict->callback([&] { run_predict(predict_args); });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score predictions against gold relations");
  eval->add_option("--mode", eval_args.mode, "classification | extraction")->required();
  eval->add_option("--gold", eval_args.gold, "gold relation file")->required();
  eval->add_option("--pred", eval_args.pred, "predicted relation file")->required();
  eval->add_option("--zero-support", eval_args.zero_support,
                   "zero-support classes in the macro average: zero | skip");
  eval->add_option("--label-mode", eval_args.label_mode, "confusion layout: twelve | six");
  eval->add_flag("--complete-none", eval_args.complete_none,
                 "fill missing pairs on either side with NONE before scoring");
  eval->add_flag("--confusion", eval_args.show_confusion, "also print a confusion matrix");
  eval->add_option("--out", eval_args.out, "metric records output path");
  eval->callback([&] { run_eval(eval_args); });

  GradcheckArgs grad_args;
  auto* gradcheck = app.add_subcommand("gradcheck",
                                       "finite-difference audit of the model gradients");
  gradcheck->add_option("--dims", grad_args.dims, "model size preset (tiny)");
  gradcheck->add_option("--epsilon", grad_args.epsilon, "finite-difference step");
  gradcheck->add_option("--tol", grad_args.tolerance, "maximum relative error");
  gradcheck->add_option("--floor", grad_args.floor, "relative-error denominator floor");
  gradcheck->add_option("--seed", grad_args.seed, "RNG seed");
  gradcheck->callback([&] { run_gradcheck(grad_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const scirel::Error& e) {
    std::cerr << e.error_class() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal-error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
