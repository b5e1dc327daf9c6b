#pragma once

// The relation classifier: character and token BiLSTM encoders, dependency
// path encoding between concept headwords, attention-based concept selection
// over a pretrained vocabulary, distance features, and a two-layer softmax
// classifier over the 12-label (or 6-label, gold-pair) scheme. Everything is
// assembled on a fresh tape per call so gradients flow into one ParameterStore.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scirel/concepts.hpp"
#include "scirel/corpus.hpp"
#include "scirel/embeddings.hpp"
#include "scirel/errors.hpp"
#include "scirel/features.hpp"
#include "scirel/nn/attention.hpp"
#include "scirel/nn/lstm.hpp"
#include "scirel/nn/params.hpp"
#include "scirel/nn/tape.hpp"
#include "scirel/rng.hpp"
#include "scirel/util.hpp"

namespace scirel {

struct ModelConfig {
  int word_dim = 250;
  int lstm_hidden = 100;
  int char_hidden = 25;
  int char_dim = 25;  // character input embedding width
  int feature_dim = 20;
  int deprel_dim = 50;
  int distance_dim = 10;
  int projection_dim = 100;

  enum class LabelMode { kTwelve, kSix };
  LabelMode label_mode = LabelMode::kTwelve;

  // Ablation switches (all on = full model; baseline replaces the concept
  // selection layer with attention-weighted span states).
  bool dep_feat = true;
  bool dist_feat = true;
  bool dep_lstm = true;
  bool concept_layer = true;
  bool baseline_concept = false;

  bool exact_match_bypass = true;
  enum class ConceptQuery { kFirstLast, kWeightedAvg };
  ConceptQuery concept_query = ConceptQuery::kFirstLast;
  bool finetune_words = true;

  // Candidate pairs: same-sentence always, plus cross-sentence pairs up to
  // this many sentences apart.
  int pair_window = 1;
  std::uint64_t seed = 1;

  int num_labels() const { return label_mode == LabelMode::kTwelve ? kNumTwelveLabels : kNumRelationClasses; }

  void validate() const {
    auto positive = [](int v, const char* name) {
      if (v <= 0) throw ValidationError(std::string("model dimension ") + name + " must be positive");
    };
    positive(word_dim, "word_dim");
    positive(lstm_hidden, "lstm_hidden");
    positive(char_hidden, "char_hidden");
    positive(char_dim, "char_dim");
    positive(feature_dim, "feature_dim");
    positive(deprel_dim, "deprel_dim");
    positive(distance_dim, "distance_dim");
    positive(projection_dim, "projection_dim");
    if (pair_window < 0) throw ValidationError("pair_window must be non-negative");
    if (baseline_concept && concept_layer)
      throw ValidationError("baseline_concept and concept_layer are mutually exclusive");
  }

  std::string canonical() const {
    std::ostringstream s;
    s << "model-config-1"
      << ";word_dim=" << word_dim << ";lstm_hidden=" << lstm_hidden
      << ";char_hidden=" << char_hidden << ";char_dim=" << char_dim
      << ";feature_dim=" << feature_dim << ";deprel_dim=" << deprel_dim
      << ";distance_dim=" << distance_dim << ";projection_dim=" << projection_dim
      << ";label_mode=" << (label_mode == LabelMode::kTwelve ? "twelve" : "six")
      << ";dep_feat=" << dep_feat << ";dist_feat=" << dist_feat
      << ";dep_lstm=" << dep_lstm << ";concept_layer=" << concept_layer
      << ";baseline_concept=" << baseline_concept
      << ";exact_match_bypass=" << exact_match_bypass
      << ";concept_query="
      << (concept_query == ConceptQuery::kFirstLast ? "first_last" : "weighted_avg")
      << ";finetune_words=" << finetune_words << ";pair_window=" << pair_window
      << ";seed=" << seed;
    return s.str();
  }
};

// All unordered entity pairs of a document within the sentence window, in
// document order, labeled NONE (gold labels are joined on afterwards).
inline std::vector<RelationInstance> candidate_pairs(const AnnotatedAbstract& doc, int window) {
  std::vector<RelationInstance> out;
  const auto& es = doc.entities;
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      if (es[j].sentence_index - es[i].sentence_index > window) continue;
      RelationInstance inst;
      inst.doc_id = doc.doc_id;
      inst.left_id = es[i].id;
      inst.right_id = es[j].id;
      inst.type = RelationType::kNone;
      inst.direction = Direction::kForward;
      out.push_back(std::move(inst));
    }
  return out;
}

template <class T>
class RelationModel {
 public:
  using Tape = nn::Tape<T>;
  using Id = typename nn::Tape<T>::Id;

  struct EncodedSentence {
    std::vector<Id> states;  // h^S per token, dim 2*lstm_hidden
  };

  struct Prediction {
    int label_index = 0;
    RelationType type = RelationType::kNone;
    Direction direction = Direction::kForward;
    std::vector<double> probs;
  };

  RelationModel(const ModelConfig& cfg, const std::vector<AnnotatedAbstract>& train_docs,
                const ConceptVocabulary* concept_vocab, const EmbeddingTable* pretrained)
      : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.concept_layer) {
      if (concept_vocab == nullptr)
        throw ValidationError("concept layer enabled but no concept vocabulary given");
      vocab_ = *concept_vocab;
    }
    build_indexes(train_docs, pretrained);
    build_params(pretrained);
    compute_config_hash();
  }

  const ModelConfig& config() const { return cfg_; }
  nn::ParameterStore<T>& store() { return store_; }
  const nn::ParameterStore<T>& store() const { return store_; }
  std::uint64_t config_hash() const { return config_hash_; }
  const StringIndex& word_index() const { return words_; }
  const StringIndex& pos_index() const { return pos_; }
  const StringIndex& deprel_index() const { return deprels_; }
  const ConceptVocabulary& concept_vocab() const { return vocab_; }

  // Exact surface first, then lowercased, then the UNK row.
  int word_row(const std::string& surface) const {
    int id = words_.lookup(surface);
    if (id < 0) id = words_.lookup(lowercase(surface));
    return id < 0 ? 0 : id;
  }

  int classifier_input_dim() const {
    const int H = cfg_.lstm_hidden;
    int dim = cfg_.dep_lstm ? 8 * H : 4 * H;
    if (cfg_.baseline_concept) dim += 4 * H;
    else if (cfg_.concept_layer) dim += 2 * cfg_.word_dim;
    if (cfg_.dist_feat) dim += cfg_.distance_dim;
    return dim;
  }

  int token_input_dim() const {
    return 2 * cfg_.char_hidden + cfg_.word_dim + 2 * cfg_.feature_dim;
  }

  // -- encoders --------------------------------------------------------------

  Id token_input(Tape& tape, const Token& tok) {
    // Character BiLSTM final states.
    std::vector<Id> chars;
    for (unsigned char c : tok.surface) {
      int id = chars_.lookup(std::string(1, static_cast<char>(c)));
      chars.push_back(tape.row(*emb_char_, id < 0 ? 0 : id));
    }
    if (chars.empty()) chars.push_back(tape.row(*emb_char_, 0));
    Id char_fwd = nn::lstm_run(tape, char_lstm_.fwd, chars, false).back();
    Id char_bwd = nn::lstm_run(tape, char_lstm_.bwd, chars, true).front();

    Id word;
    const int wid = word_row(tok.surface);
    if (cfg_.finetune_words) word = tape.row(*emb_word_, wid);
    else word = tape.constant(row_copy(*emb_word_, wid));

    Id cap = tape.row(*emb_cap_, static_cast<int>(cap_class(tok.surface)));
    int pid = pos_.lookup(tok.pos);
    Id pos = tape.row(*emb_pos_, pid < 0 ? 0 : pid);
    return tape.concat({char_fwd, char_bwd, word, cap, pos});
  }

  EncodedSentence encode_tokens(Tape& tape, const Sentence& sent) {
    if (sent.size() == 0) throw ValidationError("cannot encode an empty sentence");
    std::vector<Id> inputs;
    inputs.reserve(sent.tokens.size());
    for (const auto& tok : sent.tokens) inputs.push_back(token_input(tape, tok));
    return {nn::bilstm_run(tape, token_lstm_, inputs).states};
  }

  // Plain values of the per-token layer input, for inspection.
  std::vector<T> token_input_values(const Token& tok) {
    Tape tape;
    return tape.value(token_input(tape, tok));
  }

  // h^DP over the headword-to-headword path: a forward-layer BiLSTM over
  // [ancestor .. right headword] and a backward-layer BiLSTM over
  // [ancestor .. left headword], inputs concat(h^S, deprel embedding) at
  // every position with the PATH_ROOT relation at the ancestor. The output
  // concatenates, in order: both directional states at the left headword
  // (backward layer), at the right headword (forward layer), and at the
  // ancestor in both layers. Dim 8*lstm_hidden.
  Id encode_dep_path(Tape& tape, const DepPath& path, const EncodedSentence& enc) {
    if (!cfg_.dep_lstm)
      throw ValidationError("encode_dep_path called with the dependency LSTM ablated");
    auto layer_inputs = [&](const std::vector<typename DepPath::Step>& steps) {
      std::vector<Id> inputs;
      inputs.push_back(path_input(tape, enc, path.ancestor_index, kPathRootDeprel));
      for (const auto& s : steps) inputs.push_back(path_input(tape, enc, s.token_index, s.deprel));
      return inputs;
    };
    auto fwd = nn::bilstm_run(tape, path_fwd_lstm_, layer_inputs(path.forward_steps));
    auto bwd = nn::bilstm_run(tape, path_bwd_lstm_, layer_inputs(path.backward_steps));
    const std::size_t lf = fwd.fwd.size() - 1;
    const std::size_t lb = bwd.fwd.size() - 1;
    return tape.concat({bwd.bwd[lb], bwd.fwd[lb],    // left headword, backward layer
                        fwd.bwd[lf], fwd.fwd[lf],    // right headword, forward layer
                        bwd.bwd[0], bwd.fwd[0],      // ancestor, backward layer
                        fwd.bwd[0], fwd.fwd[0]});    // ancestor, forward layer
  }

  // Learned stand-in for h^DP when the two concepts share no tree (different
  // sentences).
  Id no_path_vector(Tape& tape) {
    if (!cfg_.dep_lstm)
      throw ValidationError("no_path_vector called with the dependency LSTM ablated");
    return tape.param(*no_path_);
  }

  // Concept representation for one entity span. With the concept layer:
  // bilinear attention from the span query over pretrained candidate vectors
  // plus the trainable null vector (an exact vocabulary match short-circuits
  // to its pretrained row when the bypass is enabled). With the baseline:
  // attention-weighted sum of the span's h^S states.
  Id encode_concept(Tape& tape, const EntitySpan& span, const EncodedSentence& enc) {
    std::vector<Id> span_states(enc.states.begin() + span.token_begin,
                                enc.states.begin() + span.token_end);
    if (span_states.empty()) throw ValidationError("entity span covers no tokens: " + span.id);
    if (cfg_.baseline_concept)
      return nn::dot_attention(tape, tape.param(*base_query_), span_states).context;
    if (!cfg_.concept_layer)
      throw ValidationError("encode_concept called with the concept layer ablated");

    Id query;
    if (cfg_.concept_query == ModelConfig::ConceptQuery::kFirstLast)
      query = tape.concat({span_states.front(), span_states.back()});
    else
      query = nn::dot_attention(tape, tape.param(*span_query_), span_states).context;

    CandidateSet cand = generate_candidates(span.text, vocab_);
    if (cand.exact_match && cfg_.exact_match_bypass)
      return tape.constant(row_copy(*emb_concept_, *cand.exact_match));
    std::vector<int> rows = cand.candidates;
    if (cand.exact_match) {
      rows.push_back(*cand.exact_match);
      std::sort(rows.begin(), rows.end());
    }
    std::vector<Id> keys;
    keys.reserve(rows.size() + 1);
    for (int r : rows) keys.push_back(tape.constant(row_copy(*emb_concept_, r)));
    keys.push_back(tape.param(*att_null_));
    return nn::bilinear_attention(tape, query, tape.param(*att_w_), query_dim(), cfg_.word_dim, keys)
        .context;
  }

  // -- classification --------------------------------------------------------

  Id classify_logits(Tape& tape, const RelationInstance& instance, const AnnotatedAbstract& doc) {
    const RelationInstance inst = normalize_instance(instance, doc);
    const EntitySpan& le = doc.entity(inst.left_id);
    const EntitySpan& re = doc.entity(inst.right_id);
    const Sentence& ls = doc.sentences.at(static_cast<std::size_t>(le.sentence_index));
    const Sentence& rs = doc.sentences.at(static_cast<std::size_t>(re.sentence_index));
    const bool same_sentence = le.sentence_index == re.sentence_index;

    EncodedSentence el = encode_tokens(tape, ls);
    EncodedSentence er = same_sentence ? el : encode_tokens(tape, rs);

    std::vector<Id> parts;
    if (cfg_.dep_lstm) {
      if (same_sentence) {
        DepPath path = dep_path(headword(le, ls), headword(re, ls), ls);
        parts.push_back(encode_dep_path(tape, path, el));
      } else {
        parts.push_back(no_path_vector(tape));
      }
    } else {
      parts.push_back(tape.concat({el.states[static_cast<std::size_t>(headword(le, ls))],
                                   er.states[static_cast<std::size_t>(headword(re, rs))]}));
    }
    if (cfg_.concept_layer || cfg_.baseline_concept) {
      parts.push_back(encode_concept(tape, le, el));
      parts.push_back(encode_concept(tape, re, er));
    }
    if (cfg_.dist_feat)
      parts.push_back(tape.row(*emb_dist_, distance_bucket(concept_distance(le, re, doc))));

    Id feats = parts.size() == 1 ? parts[0] : tape.concat(parts);
    Id hidden = tape.tanh_op(tape.add(
        tape.matvec(tape.param(*cls_w1_), cfg_.projection_dim, classifier_input_dim(), feats),
        tape.param(*cls_b1_)));
    return tape.add(
        tape.matvec(tape.param(*cls_w2_), cfg_.num_labels(), cfg_.projection_dim, hidden),
        tape.param(*cls_b2_));
  }

  int gold_label_index(const RelationInstance& instance, const AnnotatedAbstract& doc) const {
    const RelationInstance inst = normalize_instance(instance, doc);
    if (cfg_.label_mode == ModelConfig::LabelMode::kTwelve)
      return twelve_label_index(inst.type, inst.direction);
    if (inst.type == RelationType::kNone)
      throw ValidationError("NONE instance in six-label mode: " + inst.left_id + "," + inst.right_id);
    return six_label_index(inst.type);
  }

  // Scalar loss node for one instance (cross-entropy against the gold label).
  Id loss_node(Tape& tape, const RelationInstance& instance, const AnnotatedAbstract& doc) {
    return tape.xent_loss(classify_logits(tape, instance, doc), gold_label_index(instance, doc));
  }

  Prediction predict(const RelationInstance& instance, const AnnotatedAbstract& doc) {
    Tape tape;
    Id probs_id = tape.softmax(classify_logits(tape, instance, doc));
    const auto& pv = tape.value(probs_id);
    Prediction pred;
    pred.probs.assign(pv.begin(), pv.end());
    for (std::size_t i = 1; i < pred.probs.size(); ++i)
      if (pred.probs[i] > pred.probs[static_cast<std::size_t>(pred.label_index)])
        pred.label_index = static_cast<int>(i);
    if (cfg_.label_mode == ModelConfig::LabelMode::kTwelve) {
      auto [t, d] = twelve_label_decode(pred.label_index);
      pred.type = t;
      pred.direction = d;
    } else {
      pred.type = static_cast<RelationType>(pred.label_index);
      // Gold-pair mode: the pair's argument order (hence direction) is given
      // by the input; only the class is predicted.
      pred.direction = normalize_instance(instance, doc).direction;
      if (pred.type == RelationType::kCompare) pred.direction = Direction::kForward;
    }
    return pred;
  }

  RelationInstance predicted_instance(const RelationInstance& instance,
                                      const AnnotatedAbstract& doc) {
    Prediction p = predict(instance, doc);
    RelationInstance out = normalize_instance(instance, doc);
    out.type = p.type;
    out.direction = p.type == RelationType::kNone ? Direction::kForward : p.direction;
    if (p.type == RelationType::kCompare) out.direction = Direction::kForward;
    return out;
  }

  // -- checkpointing ---------------------------------------------------------

  std::string save_checkpoint(const std::map<std::string, std::string>& state = {}) const {
    return store_.save_checkpoint(config_hash_, state);
  }

  std::map<std::string, std::string> load_checkpoint(const std::string& text) {
    return store_.load_checkpoint(text, config_hash_);
  }

 private:
  int query_dim() const {
    return cfg_.concept_query == ModelConfig::ConceptQuery::kFirstLast ? 4 * cfg_.lstm_hidden
                                                                       : 2 * cfg_.lstm_hidden;
  }

  static std::vector<T> row_copy(const nn::Parameter<T>& p, int r) {
    return {p.value.begin() + static_cast<std::size_t>(r) * p.cols,
            p.value.begin() + static_cast<std::size_t>(r + 1) * p.cols};
  }

  Id path_input(Tape& tape, const EncodedSentence& enc, int token_index,
                const std::string& deprel) {
    Id state = enc.states.at(static_cast<std::size_t>(token_index));
    if (!cfg_.dep_feat) return tape.concat({state, tape.zeros(cfg_.deprel_dim)});
    int id = deprels_.lookup(deprel);
    if (id < 0) id = deprels_.lookup("<UNK>");
    return tape.concat({state, tape.row(*emb_deprel_, id)});
  }

  void build_indexes(const std::vector<AnnotatedAbstract>& train_docs,
                     const EmbeddingTable* pretrained) {
    words_.add(kUnkToken);
    if (pretrained) {
      for (const auto& tok : pretrained->tokens())
        if (tok != kUnkToken) words_.add(tok);
    } else {
      for (const auto& doc : train_docs)
        for (const auto& sent : doc.sentences)
          for (const auto& tok : sent.tokens) words_.add(lowercase(tok.surface));
    }
    chars_.add("<UNK>");
    pos_.add("<UNK>");
    deprels_.add(kPathRootDeprel);
    deprels_.add("<UNK>");
    for (const auto& doc : train_docs)
      for (const auto& sent : doc.sentences) {
        for (const auto& tok : sent.tokens) {
          for (char c : tok.surface) chars_.add(std::string(1, c));
          pos_.add(tok.pos);
        }
        for (const auto& rel : sent.deprels) deprels_.add(rel);
      }
  }

  void build_params(const EmbeddingTable* pretrained) {
    RngStream base = RngStream::from_seed(cfg_.seed);
    const int H = cfg_.lstm_hidden;

    emb_word_ = &store_.add_matrix("emb.word", words_.size(), cfg_.word_dim, base);
    if (pretrained) {
      if (pretrained->dim() != cfg_.word_dim)
        throw ShapeError("pretrained embeddings have dim " + std::to_string(pretrained->dim()) +
                         ", model word_dim is " + std::to_string(cfg_.word_dim));
      copy_pretrained_words(*pretrained);
    }
    emb_char_ = &store_.add_matrix("emb.char", chars_.size(), cfg_.char_dim, base);
    emb_cap_ = &store_.add_matrix("emb.cap", kNumCapClasses, cfg_.feature_dim, base);
    emb_pos_ = &store_.add_matrix("emb.pos", pos_.size(), cfg_.feature_dim, base);
    if (cfg_.dep_lstm && cfg_.dep_feat)
      emb_deprel_ = &store_.add_matrix("emb.deprel", deprels_.size(), cfg_.deprel_dim, base);
    if (cfg_.dist_feat)
      emb_dist_ = &store_.add_matrix("emb.distance", kNumDistanceBuckets, cfg_.distance_dim, base);
    if (cfg_.concept_layer && vocab_.size() > 0) {
      emb_concept_ = &store_.add_matrix("emb.concept", vocab_.size(), cfg_.word_dim, base);
      copy_pretrained_concepts(pretrained);
    }

    char_lstm_ = nn::make_bilstm(store_, "char_lstm", cfg_.char_dim, cfg_.char_hidden, base);
    token_lstm_ = nn::make_bilstm(store_, "token_lstm", token_input_dim(), H, base);
    if (cfg_.dep_lstm) {
      const int path_in = 2 * H + cfg_.deprel_dim;
      path_fwd_lstm_ = nn::make_bilstm(store_, "path_fwd", path_in, H, base);
      path_bwd_lstm_ = nn::make_bilstm(store_, "path_bwd", path_in, H, base);
      no_path_ = &store_.add_random_vector("path.none", 8 * H, base,
                                           std::sqrt(6.0 / (8.0 * H + 1.0)));
    }
    if (cfg_.concept_layer) {
      att_w_ = &store_.add_matrix("att.w", query_dim(), cfg_.word_dim, base);
      att_null_ = &store_.add_random_vector("att.null", cfg_.word_dim, base,
                                            std::sqrt(6.0 / (cfg_.word_dim + 1.0)));
      if (cfg_.concept_query == ModelConfig::ConceptQuery::kWeightedAvg)
        span_query_ = &store_.add_random_vector("att.span_query", 2 * H, base,
                                                std::sqrt(6.0 / (2.0 * H + 1.0)));
    }
    if (cfg_.baseline_concept)
      base_query_ = &store_.add_random_vector("att.base_query", 2 * H, base,
                                              std::sqrt(6.0 / (2.0 * H + 1.0)));

    cls_w1_ = &store_.add_matrix("cls.w1", cfg_.projection_dim, classifier_input_dim(), base);
    cls_b1_ = &store_.add_vector("cls.b1", cfg_.projection_dim);
    cls_w2_ = &store_.add_matrix("cls.w2", cfg_.num_labels(), cfg_.projection_dim, base);
    cls_b2_ = &store_.add_vector("cls.b2", cfg_.num_labels());
  }

  void copy_pretrained_words(const EmbeddingTable& table) {
    for (int r = 0; r < words_.size(); ++r) {
      const std::string& tok = words_.name(r);
      int src = table.row_of(tok);
      if (src < 0) {
        for (int j = 0; j < cfg_.word_dim; ++j)
          emb_word_->value[static_cast<std::size_t>(r) * cfg_.word_dim + j] = T(0);
        continue;
      }
      const double* v = table.row(src);
      for (int j = 0; j < cfg_.word_dim; ++j)
        emb_word_->value[static_cast<std::size_t>(r) * cfg_.word_dim + j] = static_cast<T>(v[j]);
    }
  }

  // Pretrained concept vectors stay fixed during training: they live in the
  // store (so checkpoints are self-contained) but enter the tape only as
  // constants, so no gradient ever reaches them. Concepts missing from the
  // pretrained table fall back to zero vectors.
  void copy_pretrained_concepts(const EmbeddingTable* table) {
    for (int r = 0; r < vocab_.size(); ++r) {
      int src = table ? table->row_of(concept_token(vocab_.entry(r).text)) : -1;
      for (int j = 0; j < cfg_.word_dim; ++j)
        emb_concept_->value[static_cast<std::size_t>(r) * cfg_.word_dim + j] =
            src < 0 ? T(0) : static_cast<T>(table->row(src)[j]);
    }
  }

  void compute_config_hash() {
    std::uint64_t h = fnv1a64_bytes(cfg_.canonical());
    auto mix = [&h](const std::string& s) {
      h ^= fnv1a64_bytes(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix("words");
    for (const auto& s : words_.items()) mix(s);
    mix("chars");
    for (const auto& s : chars_.items()) mix(s);
    mix("pos");
    for (const auto& s : pos_.items()) mix(s);
    mix("deprels");
    for (const auto& s : deprels_.items()) mix(s);
    mix("concepts");
    for (int r = 0; r < vocab_.size(); ++r) mix(vocab_.entry(r).text);
    config_hash_ = h;
  }

  ModelConfig cfg_;
  ConceptVocabulary vocab_;
  StringIndex words_, chars_, pos_, deprels_;
  nn::ParameterStore<T> store_;

  nn::Parameter<T>* emb_word_ = nullptr;
  nn::Parameter<T>* emb_char_ = nullptr;
  nn::Parameter<T>* emb_cap_ = nullptr;
  nn::Parameter<T>* emb_pos_ = nullptr;
  nn::Parameter<T>* emb_deprel_ = nullptr;
  nn::Parameter<T>* emb_dist_ = nullptr;
  nn::Parameter<T>* emb_concept_ = nullptr;
  nn::BiLstmWeights<T> char_lstm_, token_lstm_, path_fwd_lstm_, path_bwd_lstm_;
  nn::Parameter<T>* no_path_ = nullptr;
  nn::Parameter<T>* att_w_ = nullptr;
  nn::Parameter<T>* att_null_ = nullptr;
  nn::Parameter<T>* span_query_ = nullptr;
  nn::Parameter<T>* base_query_ = nullptr;
  nn::Parameter<T>* cls_w1_ = nullptr;
  nn::Parameter<T>* cls_b1_ = nullptr;
  nn::Parameter<T>* cls_w2_ = nullptr;
  nn::Parameter<T>* cls_b2_ = nullptr;

  std::uint64_t config_hash_ = 0;
};

}  // namespace scirel
