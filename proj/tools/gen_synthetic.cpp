// Generates a small synthetic corpus for end-to-end runs: abstracts with
// inline entity markup, a CoNLL dependency sidecar, gold relation files and a
// pretraining text. Every relation label is signaled by its own verb cue, so
// a working model can separate the classes from lexical evidence alone.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scirel/corpus.hpp"
#include "scirel/errors.hpp"
#include "scirel/rng.hpp"
#include "scirel/util.hpp"

namespace {

using scirel::Direction;
using scirel::RelationType;

struct Cue {
  RelationType type;
  Direction dir;
  std::vector<std::string> tokens;
  // 0: [V] transitive, 1: [is V for], 2: [is V with], 3: [V to]
  int shape;
};

const std::vector<Cue>& cues() {
  static const std::vector<Cue> all = {
      {RelationType::kUsage, Direction::kForward, {"is", "used", "for"}, 1},
      {RelationType::kUsage, Direction::kReverse, {"uses"}, 0},
      {RelationType::kResult, Direction::kForward, {"yields"}, 0},
      {RelationType::kResult, Direction::kReverse, {"reflects"}, 0},
      {RelationType::kModelFeature, Direction::kForward, {"characterizes"}, 0},
      {RelationType::kModelFeature, Direction::kReverse, {"incorporates"}, 0},
      {RelationType::kPartWhole, Direction::kForward, {"belongs", "to"}, 3},
      {RelationType::kPartWhole, Direction::kReverse, {"contains"}, 0},
      {RelationType::kTopic, Direction::kForward, {"addresses"}, 0},
      {RelationType::kTopic, Direction::kReverse, {"motivates"}, 0},
      {RelationType::kCompare, Direction::kForward, {"is", "compared", "with"}, 2},
  };
  return all;
}

// Noun phrases with shared sub-ngrams so the concept vocabulary ends up with
// nested entries (e.g. "language model" inside "neural language model").
const std::vector<std::vector<std::string>>& phrases() {
  static const std::vector<std::vector<std::string>> all = {
      {"neural", "language", "model"},
      {"language", "model"},
      {"phone", "ngram", "model"},
      {"ngram", "model"},
      {"statistical", "parser"},
      {"dependency", "parser"},
      {"parse", "trees"},
      {"word", "embeddings"},
      {"translation", "system"},
      {"machine", "translation"},
      {"speech", "recognition"},
      {"speech", "recognizer"},
      {"training", "data"},
      {"test", "collection"},
      {"evaluation", "metric"},
      {"bleu", "score"},
      {"semantic", "relations"},
      {"relation", "extraction"},
      {"feature", "vectors"},
      {"kernel", "methods"},
      {"pos", "tagger"},
      {"information", "retrieval"},
      {"query", "expansion"},
      {"document", "ranking"},
  };
  return all;
}

std::string noun_pos(const std::string& surface) {
  return !surface.empty() && surface.back() == 's' ? "NNS" : "NN";
}

struct BuiltSentence {
  scirel::Sentence sent;
  std::vector<std::pair<int, int>> entity_ranges;  // token [begin, end) per entity
};

BuiltSentence build_sentence(const std::vector<std::string>& left, const Cue& cue,
                             const std::vector<std::string>& right,
                             const std::vector<std::string>* extra) {
  BuiltSentence out;
  auto& s = out.sent;
  auto push = [&s](const std::string& surface, const std::string& pos, int head,
                   const std::string& deprel) {
    scirel::Token t;
    t.surface = surface;
    t.pos = pos;
    s.tokens.push_back(t);
    s.heads.push_back(head);
    s.deprels.push_back(deprel);
  };

  const int ln = (int)left.size();
  const int cn = (int)cue.tokens.size();
  const int rn = (int)right.size();
  const int lh = ln - 1;
  const int verb = ln + (cue.shape == 1 || cue.shape == 2 ? 1 : 0);
  const int rb = ln + cn;
  const int rh = rb + rn - 1;

  out.entity_ranges.push_back({0, ln});
  for (int i = 0; i < ln; ++i) {
    if (i < lh)
      push(left[(std::size_t)i], "NN", lh, "compound");
    else
      push(left[(std::size_t)i], noun_pos(left[(std::size_t)i]), verb,
           cue.shape == 1 || cue.shape == 2 ? "nsubjpass" : "nsubj");
  }
  for (int i = 0; i < cn; ++i) {
    const std::string& tok = cue.tokens[(std::size_t)i];
    const int pos = ln + i;
    if (pos == verb) {
      push(tok, cue.shape == 1 || cue.shape == 2 ? "VBN" : "VBZ", scirel::kRootHead, "root");
    } else if (tok == "is") {
      push(tok, "VBZ", verb, "aux");
    } else {
      // trailing preposition of the cue marks the right argument
      push(tok, "IN", rh, "case");
    }
  }
  out.entity_ranges.push_back({rb, rb + rn});
  for (int i = 0; i < rn; ++i) {
    if (i < rn - 1)
      push(right[(std::size_t)i], "NN", rh, "compound");
    else
      push(right[(std::size_t)i], noun_pos(right[(std::size_t)i]), verb,
           cue.shape == 0 ? "obj" : "obl");
  }
  if (extra) {
    const int eb = (int)s.tokens.size() + 1;
    const int eh = eb + (int)extra->size() - 1;
    push("unlike", "IN", eh, "case");
    out.entity_ranges.push_back({eb, eb + (int)extra->size()});
    for (int i = 0; i < (int)extra->size(); ++i) {
      if (i < (int)extra->size() - 1)
        push((*extra)[(std::size_t)i], "NN", eh, "compound");
      else
        push((*extra)[(std::size_t)i], noun_pos((*extra)[(std::size_t)i]), verb, "obl");
    }
  }
  push(".", ".", verb, "punct");

  if (!s.tokens[0].surface.empty())
    s.tokens[0].surface[0] = (char)std::toupper((unsigned char)s.tokens[0].surface[0]);
  return out;
}

struct BuiltDoc {
  scirel::AbstractFragment frag;
  std::vector<scirel::Sentence> sentences;
  std::vector<scirel::RelationInstance> gold;
};

BuiltDoc build_doc(const std::string& doc_id, int sentence_count, std::size_t& cue_cursor,
                   scirel::RngStream& rng) {
  BuiltDoc doc;
  doc.frag.doc_id = doc_id;
  int entity_no = 0;
  std::string raw;

  for (int si = 0; si < sentence_count; ++si) {
    const Cue& cue = cues()[cue_cursor % cues().size()];
    ++cue_cursor;
    const auto& pool = phrases();
    std::size_t li = (std::size_t)rng.uniform_int(pool.size());
    std::size_t ri = (std::size_t)rng.uniform_int(pool.size());
    while (ri == li) ri = (std::size_t)rng.uniform_int(pool.size());
    const std::vector<std::string>* extra = nullptr;
    std::size_t ei = 0;
    if (rng.bernoulli(0.25)) {
      ei = (std::size_t)rng.uniform_int(pool.size());
      while (ei == li || ei == ri) ei = (std::size_t)rng.uniform_int(pool.size());
      extra = &pool[ei];
    }

    BuiltSentence built = build_sentence(pool[li], cue, pool[ri], extra);
    scirel::validate_tree(built.sent, doc_id);

    if (!raw.empty()) raw += "\n";
    const int base = (int)raw.size();
    std::vector<int> token_begin(built.sent.tokens.size());
    for (std::size_t t = 0; t < built.sent.tokens.size(); ++t) {
      if (t) raw += " ";
      token_begin[t] = (int)raw.size();
      raw += built.sent.tokens[t].surface;
      built.sent.tokens[t].char_begin = token_begin[t] - base;
      built.sent.tokens[t].char_end = (int)raw.size() - base;
    }

    std::vector<std::string> ids;
    for (const auto& [tb, te] : built.entity_ranges) {
      scirel::AbstractFragment::CharSpan span;
      span.id = doc_id + "." + std::to_string(++entity_no);
      span.begin = token_begin[(std::size_t)tb];
      span.end = token_begin[(std::size_t)(te - 1)] +
                 (int)built.sent.tokens[(std::size_t)(te - 1)].surface.size();
      span.text = raw.substr((std::size_t)span.begin, (std::size_t)(span.end - span.begin));
      doc.frag.entities.push_back(span);
      ids.push_back(span.id);
    }
    doc.gold.push_back({doc_id, ids[0], ids[1], cue.type, cue.dir});
    doc.sentences.push_back(built.sent);
  }
  doc.frag.raw_text = raw;
  return doc;
}

struct SplitFiles {
  std::string markup, conll, relations;
};

SplitFiles render(const std::vector<BuiltDoc>& docs) {
  SplitFiles out;
  std::vector<scirel::RelationInstance> gold;
  for (const auto& doc : docs) {
    out.markup += scirel::to_markup(doc.frag) + "\n";
    out.conll += "# doc " + doc.frag.doc_id + "\n";
    for (const auto& sent : doc.sentences) {
      for (int i = 0; i < sent.size(); ++i) {
        const int head = sent.heads[(std::size_t)i];
        out.conll += std::to_string(i + 1) + "\t" + sent.tokens[(std::size_t)i].surface + "\t" +
                     sent.tokens[(std::size_t)i].pos + "\t" +
                     std::to_string(head == scirel::kRootHead ? 0 : head + 1) + "\t" +
                     sent.deprels[(std::size_t)i] + "\n";
      }
      out.conll += "\n";
    }
    gold.insert(gold.end(), doc.gold.begin(), doc.gold.end());
  }
  out.relations = scirel::format_relation_file(gold);
  return out;
}

std::string pretrain_text(const std::vector<BuiltDoc>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    for (const auto& sent : doc.sentences) {
      std::vector<std::string> toks;
      for (const auto& t : sent.tokens)
        if (t.surface != ".") toks.push_back(scirel::lowercase(t.surface));
      out += scirel::join(toks, " ") + "\n";
    }
  }
  return out;
}

const char* kSampleConfig = R"(schema_version = 1
seed = 13
precision = f32
label_mode = twelve

word_dim = 40
lstm_hidden = 24
char_hidden = 8
char_dim = 8
feature_dim = 6
deprel_dim = 10
distance_dim = 6
projection_dim = 24
pair_window = 1

lr = 0.2
none_filter_p = 0.4
max_epochs = 200
patience = 200
batch_size = 4
tune_metric = macro_f1
stop_train_accuracy = 0.95

# inputs, relative to this file; build the first three with
# `scirel ingest`, `scirel concepts build` and `scirel embeddings train`
train_docs = train.jsonl
train_relations = train.rel
dev_docs = dev.jsonl
dev_relations = dev.rel
embeddings = embeddings.txt
concept_vocab = concepts.tsv

checkpoint_out = model.ckpt
log_out = train.log
)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic corpus generator"};
  std::string out_dir = "data/synthetic";
  std::uint64_t seed = 13;
  int train_docs = 20, dev_docs = 8;
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--train-docs", train_docs, "number of training abstracts");
  app.add_option("--dev-docs", dev_docs, "number of dev abstracts");
  CLI11_PARSE(app, argc, argv);

  try {
    auto rng = scirel::RngStream::from_seed(seed).derive("synthetic");
    std::size_t cue_cursor = 0;

    auto make_split = [&](const std::string& prefix, int count) {
      std::vector<BuiltDoc> docs;
      for (int i = 0; i < count; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "SYN-%s-%03d", prefix.c_str(), i + 1);
        docs.push_back(build_doc(id, 2 + i % 3, cue_cursor, rng));
      }
      return docs;
    };

    auto train = make_split("train", train_docs);
    auto dev = make_split("dev", dev_docs);

    SplitFiles tf = render(train), df = render(dev);
    scirel::write_file_atomic(out_dir + "/train.txt", tf.markup);
    scirel::write_file_atomic(out_dir + "/train.conll", tf.conll);
    scirel::write_file_atomic(out_dir + "/train.rel", tf.relations);
    scirel::write_file_atomic(out_dir + "/dev.txt", df.markup);
    scirel::write_file_atomic(out_dir + "/dev.conll", df.conll);
    scirel::write_file_atomic(out_dir + "/dev.rel", df.relations);
    scirel::write_file_atomic(out_dir + "/pretrain.txt",
                              pretrain_text(train) + pretrain_text(dev));
    scirel::write_file_atomic(out_dir + "/config.cfg", kSampleConfig);

    std::size_t train_gold = 0, dev_gold = 0;
    for (const auto& d : train) train_gold += d.gold.size();
    for (const auto& d : dev) dev_gold += d.gold.size();
    std::cerr << "wrote " << train.size() << " train docs (" << train_gold << " relations), "
              << dev.size() << " dev docs (" << dev_gold << " relations) -> " << out_dir << "\n";
  } catch (const scirel::Error& e) {
    std::cerr << e.error_class() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
