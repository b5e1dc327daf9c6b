// End-to-end acceptance audit. Ten independent checks over the library and
// the command line tool, one PASS/FAIL line each; exits nonzero when any
// check fails. Tolerances are pinned here, next to the checks that use them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <scirel/concepts.hpp>
#include <scirel/config.hpp>
#include <scirel/corpus.hpp>
#include <scirel/embeddings.hpp>
#include <scirel/errors.hpp>
#include <scirel/eval.hpp>
#include <scirel/model.hpp>
#include <scirel/nn/attention.hpp>
#include <scirel/nn/gradcheck.hpp>
#include <scirel/nn/tape.hpp>
#include <scirel/rng.hpp>
#include <scirel/train.hpp>
#include <scirel/util.hpp>

#include "support.hpp"

using namespace scirel;
using testsup::make_rel;

namespace {

int g_failed = 0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

struct Check {
  bool ok = false;
  std::string detail;
};

template <class F>
void criterion(int n, const char* name, F body) {
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  if (!c.ok) ++g_failed;
  std::printf("%s criterion %d: %s%s%s\n", c.ok ? "PASS" : "FAIL", n, name,
              c.detail.empty() ? "" : " ", c.detail.c_str());
  std::fflush(stdout);
}

testsup::RunResult cli(const std::string& args) {
  return testsup::run(testsup::scirel_binary() + " " + args);
}

std::string q(const std::string& s) { return testsup::shell_quote(s); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// First token after "key" on the line ("key" includes the '=').
std::string token_after(const std::string& line, const std::string& key) {
  auto pos = line.find(key);
  if (pos == std::string::npos) return "";
  pos += key.size();
  auto end = line.find_first_of(" \n", pos);
  return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& l : split(text, '\n'))
    if (!trim(l).empty()) out.push_back(l);
  return out;
}

// Macro F1 from a metric records file.
double macro_f1_of(const std::string& records) {
  for (const auto& l : nonempty_lines(records))
    if (l.rfind("summary=macro", 0) == 0) return std::stod(token_after(l, "f1="));
  throw std::runtime_error("no macro summary in records");
}

ModelConfig small_config() {
  ModelConfig cfg;
  cfg.word_dim = 6;
  cfg.lstm_hidden = 4;
  cfg.char_hidden = 3;
  cfg.char_dim = 3;
  cfg.feature_dim = 2;
  cfg.deprel_dim = 3;
  cfg.distance_dim = 2;
  cfg.projection_dim = 5;
  cfg.seed = 7;
  return cfg;
}

ConceptVocabulary small_vocab() {
  return ConceptVocabulary::build(
      {"deep parse", "deep parse", "models", "models", "parse", "parse"}, 1);
}

// ---------------------------------------------------------------------------
// Shared synthetic-corpus pipeline: ingest both splits, build the concept
// vocabulary, pretrain embeddings. Built once, reused by checks 6/7/9.

struct SynPipeline {
  std::optional<testsup::TempDir> dir;
  std::string src;  // bundled corpus directory
  std::string cfg, train_jsonl, dev_jsonl, vocab, corpus_txt, emb;
  std::string train_rel, dev_rel;
  std::string error;

  std::string file(const std::string& name) const { return dir->file(name); }
};

void bootstrap(SynPipeline& p) {
  p.dir.emplace("acceptance");
  p.src = testsup::source_dir() + "/data/synthetic";
  p.cfg = p.file("config.cfg");
  p.train_rel = p.file("train.rel");
  p.dev_rel = p.file("dev.rel");
  // relative input paths in the config resolve against its directory
  for (const char* name : {"config.cfg", "train.rel", "dev.rel"})
    write_file_atomic(p.dir->file(name), read_file(p.src + "/" + name));

  p.train_jsonl = p.file("train.jsonl");
  p.dev_jsonl = p.file("dev.jsonl");
  p.vocab = p.file("concepts.tsv");
  p.corpus_txt = p.file("corpus.txt");
  p.emb = p.file("embeddings.txt");

  auto step = [](const std::string& what, const testsup::RunResult& r) {
    if (r.status != 0)
      throw std::runtime_error("pipeline step '" + what + "' failed: " + r.out);
  };
  step("ingest train", cli("ingest --abstracts " + q(p.src + "/train.txt") + " --conll " +
                           q(p.src + "/train.conll") + " --out " + q(p.train_jsonl)));
  step("ingest dev", cli("ingest --abstracts " + q(p.src + "/dev.txt") + " --conll " +
                         q(p.src + "/dev.conll") + " --out " + q(p.dev_jsonl)));
  step("concepts build", cli("concepts build --docs " + q(p.train_jsonl) +
                             " --min-freq 2 --out " + q(p.vocab)));
  step("concepts rewrite", cli("concepts rewrite --vocab " + q(p.vocab) + " --in " +
                               q(p.src + "/pretrain.txt") + " --out " + q(p.corpus_txt)));
  step("embeddings train",
       cli("embeddings train --corpus " + q(p.corpus_txt) + " --out " + q(p.emb) +
           " --dim 40 --window 3 --negatives 5 --min-count 2 --epochs 10 --lr 0.025"
           " --seed 13"));
}

SynPipeline& syn() {
  static SynPipeline p;
  static bool ready = false;
  if (!ready) {
    ready = true;
    try {
      bootstrap(p);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// 1. Finite-difference gradient check of the whole model at small widths.

Check c1_whole_model_gradients() {
  auto doc = testsup::model_doc();
  auto vocab = small_vocab();
  auto cfg = small_config();

  EmbeddingTable pretrained(cfg.word_dim);
  auto rng = RngStream::from_seed(3).derive("acceptance/pretrained");
  for (const char* w : {"deep", "parse", "models", "beat", "taggers", "help"}) {
    std::vector<double> v((std::size_t)cfg.word_dim);
    for (auto& x : v) x = rng.uniform(-0.5, 0.5);
    pretrained.add(w, v);
  }

  RelationModel<double> model(cfg, {doc}, &vocab, &pretrained);
  auto insts = {make_rel("M01", "M01.1", "M01.2", RelationType::kUsage),
                make_rel("M01", "M01.1", "M01.3", RelationType::kResult, Direction::kReverse)};
  auto loss_fn = [&](bool compute_grad) {
    RelationModel<double>::Tape tape;
    std::vector<RelationModel<double>::Id> losses;
    for (const auto& inst : insts) losses.push_back(model.loss_node(tape, inst, doc));
    auto loss = tape.scale(0.5, tape.add_n(losses));
    if (compute_grad) tape.backward(loss);
    return (double)tape.value(loss)[0];
  };

  auto t0 = std::chrono::steady_clock::now();
  auto report = nn::grad_check(model.store(), loss_fn, 1e-5, 1e-4,
                               [](const std::string& n) { return n == "emb.concept"; });
  const double dt = seconds_since(t0);

  Check c;
  c.ok = report.pass(1e-4) && dt < 60.0;
  c.detail = fmt("(max rel err %.3g over %zu components in %.1f s, tolerance 1e-4)",
                 report.worst.rel_err, report.checked, dt);
  return c;
}

// ---------------------------------------------------------------------------
// 2. Candidate generation: worked example plus randomized n-gram oracle.

Check c2_candidate_generation() {
  auto vocab = ConceptVocabulary::build(
      {"phone n-gram", "n-gram model", "n-gram", "model", "phone",
       "phone model", "speech"},
      0);
  auto set = generate_candidates("phone n-gram model", vocab);
  std::set<std::string> got;
  for (int row : set.candidates) got.insert(vocab.entry(row).text);
  const std::set<std::string> want = {"phone n-gram", "n-gram model", "n-gram",
                                      "model", "phone"};
  if (got != want || set.exact_match.has_value())
    return {false, "(worked example produced a different candidate set)"};

  // randomized phrases and vocabularies against brute-force enumeration
  auto rng = RngStream::from_seed(20260825).derive("acceptance/candgen");
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f"};
  int mismatches = 0;
  const int cases = 1000;
  for (int iter = 0; iter < cases; ++iter) {
    std::vector<std::string> phrase;
    int len = 1 + (int)rng.uniform_int(5);
    for (int i = 0; i < len; ++i)
      phrase.push_back(words[(std::size_t)rng.uniform_int(words.size())]);

    std::set<std::string> entries;
    int vn = (int)rng.uniform_int(12);
    for (int i = 0; i < vn; ++i) {
      std::string g;
      int gl = 1 + (int)rng.uniform_int(3);
      for (int k = 0; k < gl; ++k) {
        if (k) g += " ";
        g += words[(std::size_t)rng.uniform_int(words.size())];
      }
      entries.insert(g);
    }
    auto v = ConceptVocabulary::build({entries.begin(), entries.end()}, 0);

    auto s = generate_candidates(join(phrase, " "), v);
    std::set<std::string> texts;
    for (int row : s.candidates) texts.insert(v.entry(row).text);
    if (s.exact_match) texts.insert(v.entry(*s.exact_match).text);

    const bool set_ok = texts == testsup::oracle_ngram_matches(phrase, entries);
    const bool exact_ok = s.exact_match.has_value() == (entries.count(join(phrase, " ")) != 0);
    if (!set_ok || !exact_ok) ++mismatches;
  }

  Check c;
  c.ok = mismatches == 0;
  c.detail = fmt("(worked example exact; %d/%d randomized cases match the oracle)",
                 cases - mismatches, cases);
  return c;
}

// ---------------------------------------------------------------------------
// 3. Attention normalization, uniform fallback at W = 0, null-vector path.

Check c3_attention_normalization() {
  using Tape = nn::Tape<double>;
  auto rng = RngStream::from_seed(99).derive("acceptance/attention");
  auto rand_vec = [&](int n, double r) {
    std::vector<double> v((std::size_t)n);
    for (auto& x : v) x = rng.uniform(-r, r);
    return v;
  };

  const int cases = 10000;
  double worst_dev = 0;
  for (int iter = 0; iter < cases; ++iter) {
    const int qd = 1 + (int)rng.uniform_int(6);
    const int kd = 1 + (int)rng.uniform_int(6);
    const int nk = 1 + (int)rng.uniform_int(8);
    Tape tape;
    auto query = tape.leaf(rand_vec(qd, 5.0));
    auto w = tape.leaf(rand_vec(qd * kd, 5.0));
    std::vector<Tape::Id> keys;
    for (int k = 0; k < nk; ++k) keys.push_back(tape.leaf(rand_vec(kd, 5.0)));
    auto out = nn::bilinear_attention(tape, query, w, qd, kd, keys);
    double sum = 0;
    for (double a : tape.value(out.alpha)) sum += a;
    worst_dev = std::max(worst_dev, std::fabs(sum - 1.0));
  }
  if (worst_dev > 1e-6)
    return {false, fmt("(weight sums drift: worst |sum-1| = %.3g)", worst_dev)};

  // zero bilinear form: exactly uniform over the K+1 keys
  for (int trial = 0; trial < 32; ++trial) {
    const int qd = 1 + (int)rng.uniform_int(6);
    const int kd = 1 + (int)rng.uniform_int(6);
    const int n = 1 + (int)rng.uniform_int(8);  // K candidates plus the null key
    Tape tape;
    auto query = tape.leaf(rand_vec(qd, 5.0));
    auto w = tape.leaf(std::vector<double>((std::size_t)(qd * kd), 0.0));
    std::vector<Tape::Id> keys;
    for (int k = 0; k < n; ++k) keys.push_back(tape.leaf(rand_vec(kd, 5.0)));
    auto out = nn::bilinear_attention(tape, query, w, qd, kd, keys);
    for (double a : tape.value(out.alpha))
      if (a != 1.0 / n) return {false, fmt("(W=0 weights not exactly 1/%d)", n)};
  }

  // entity without vocabulary candidates falls back to the learned null vector
  auto doc = testsup::model_doc();
  auto vocab = small_vocab();  // nothing matches "taggers"
  RelationModel<double> model(small_config(), {doc}, &vocab, nullptr);
  RelationModel<double>::Tape tape;
  auto enc = model.encode_tokens(tape, doc.sentences[0]);
  auto got = tape.value(model.encode_concept(tape, doc.entities[1], enc));
  if (got != model.store().get("att.null").value)
    return {false, "(null-vector fallback is not bit-exact)"};

  return {true, fmt("(worst |sum-1| = %.3g over %d cases; uniform and null paths exact)",
                    worst_dev, cases)};
}

// ---------------------------------------------------------------------------
// 4. Unlabeled-pair downsampling: keep rate and survival of labeled pairs.

Check c4_none_filtering() {
  auto doc = testsup::model_doc();
  auto none_inst = normalize_instance(
      make_rel("M01", "M01.1", "M01.2", RelationType::kNone), doc);
  std::vector<Example> examples;
  int labeled = 0;
  for (int i = 0; i < 10500; ++i) {
    if (i % 21 == 20) {
      auto t = static_cast<RelationType>(labeled++ % kNumRelationClasses);
      examples.push_back({normalize_instance(make_rel("M01", "M01.1", "M01.3", t), doc), &doc});
    } else {
      examples.push_back({none_inst, &doc});
    }
  }
  const long long total_none = 10000, total_labeled = labeled;

  auto rng = RngStream::from_seed(20260825).derive("acceptance/none-filter");
  const int epochs = 200;
  const double p = 0.4;
  long long none_kept = 0;
  bool labeled_always_kept = true;
  for (int e = 0; e < epochs; ++e) {
    auto kept = filter_none(examples, p, rng);
    long long nk = 0, lk = 0;
    for (const auto& ex : kept)
      (ex.inst.type == RelationType::kNone ? nk : lk)++;
    none_kept += nk;
    if (lk != total_labeled) labeled_always_kept = false;
  }
  const double rate = (double)none_kept / ((double)epochs * (double)total_none);

  Check c;
  c.ok = labeled_always_kept && rate >= 0.594 && rate <= 0.606;
  c.detail = fmt("(mean keep rate %.4f over %d epochs, bounds [0.594, 0.606]; "
                 "labeled pairs %s dropped)",
                 rate, epochs, labeled_always_kept ? "never" : "sometimes");
  return c;
}

// ---------------------------------------------------------------------------
// 5. Scoring against a brute-force counting oracle, plus the direction-flip
//    asymmetry between classification and extraction.

std::string label_string(const RelationInstance& inst) {
  const RelationInstance c = canonicalize_pair(inst);
  std::string s = relation_type_name(c.type);
  if (is_directional(c.type)) s += c.direction == Direction::kForward ? ":F" : ":R";
  return s;
}

void random_pair_sets(RngStream& rng, std::vector<RelationInstance>* gold,
                      std::vector<RelationInstance>* pred) {
  gold->clear();
  pred->clear();
  const int docs = 1 + (int)rng.uniform_int(3);
  for (int d = 0; d < docs; ++d) {
    const std::string doc = "D" + std::to_string(d + 1);
    const int ents = 2 + (int)rng.uniform_int(5);
    for (int i = 0; i < ents; ++i)
      for (int j = i + 1; j < ents; ++j) {
        if (rng.uniform() < 0.3) continue;
        const std::string l = doc + "." + std::to_string(i + 1);
        const std::string r = doc + "." + std::to_string(j + 1);
        auto [gt, gd] = twelve_label_decode((int)rng.uniform_int(12));
        auto [pt, pd] = twelve_label_decode((int)rng.uniform_int(12));
        gold->push_back(make_rel(doc, l, r, gt, gd));
        pred->push_back(make_rel(doc, l, r, pt, pd));
      }
  }
}

Check c5_metric_oracle() {
  auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9; };
  auto rng = RngStream::from_seed(424242).derive("acceptance/metrics");
  const int cases = 1000;
  int scored = 0;
  for (int iter = 0; iter < cases; ++iter) {
    std::vector<RelationInstance> gold, pred;
    random_pair_sets(rng, &gold, &pred);
    if (gold.empty()) continue;
    ++scored;

    std::vector<std::string> gl, pl;
    for (const auto& g : gold) gl.push_back(label_string(g));
    for (const auto& p : pred) pl.push_back(label_string(p));
    auto oracle = testsup::oracle_class_counts(gl, pl);

    auto rep = score_classification(gold, pred, ZeroSupport::kCountAsZero);
    long long tp = 0, fp = 0, fn = 0;
    double sum_f1 = 0;
    for (int k = 0; k < kNumRelationClasses; ++k) {
      const auto& got = rep.per_class[k];
      const auto& want = oracle.at(relation_type_name(static_cast<RelationType>(k)));
      if (got.tp != want.tp || got.fp != want.fp || got.fn != want.fn)
        return {false, fmt("(class count mismatch in case %d)", iter)};
      auto prf = testsup::oracle_prf(want.tp, want.fp, want.fn);
      if (!near(got.precision, prf.precision) || !near(got.recall, prf.recall) ||
          !near(got.f1, prf.f1))
        return {false, fmt("(class score mismatch in case %d)", iter)};
      tp += want.tp;
      fp += want.fp;
      fn += want.fn;
      sum_f1 += prf.f1;
    }

    auto micro = testsup::oracle_prf(tp, fp, fn);
    if (!near(rep.micro_precision, micro.precision) || !near(rep.micro_recall, micro.recall) ||
        !near(rep.micro_f1, micro.f1))
      return {false, fmt("(micro mismatch in case %d)", iter)};
    if (!near(rep.macro_f1, sum_f1 / kNumRelationClasses))
      return {false, fmt("(macro mismatch in case %d)", iter)};

    auto skip = score_classification(gold, pred, ZeroSupport::kSkip);
    double sum_sup = 0;
    int n_sup = 0;
    for (const auto& [name, cnt] : oracle) {
      if (cnt.tp + cnt.fp + cnt.fn == 0) continue;
      sum_sup += testsup::oracle_prf(cnt.tp, cnt.fp, cnt.fn).f1;
      ++n_sup;
    }
    const double want_skip = n_sup > 0 ? sum_sup / n_sup : 0.0;
    if (!near(skip.macro_f1, want_skip))
      return {false, fmt("(skip-mode macro mismatch in case %d)", iter)};

    long long etp = 0, efp = 0, efn = 0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const bool g = gl[i] != "NONE", p = pl[i] != "NONE";
      if (g && p) ++etp;
      else if (p) ++efp;
      else if (g) ++efn;
    }
    auto ext = score_extraction(gold, pred);
    auto eprf = testsup::oracle_prf(etp, efp, efn);
    if (ext.tp != etp || ext.fp != efp || ext.fn != efn || !near(ext.f1, eprf.f1))
      return {false, fmt("(extraction mismatch in case %d)", iter)};
  }

  // flipping the direction of a directional pair is a classification error
  // but still a correct extraction decision
  std::vector<RelationInstance> gold = {
      make_rel("D1", "D1.1", "D1.2", RelationType::kUsage, Direction::kForward)};
  std::vector<RelationInstance> pred = {
      make_rel("D1", "D1.1", "D1.2", RelationType::kUsage, Direction::kReverse)};
  auto cls = score_classification(gold, pred, ZeroSupport::kCountAsZero);
  auto ext = score_extraction(gold, pred);
  const bool flip_ok = cls.micro_f1 == 0.0 && cls.per_class[0].fp == 1 &&
                       cls.per_class[0].fn == 1 && ext.tp == 1 && ext.f1 == 100.0;
  if (!flip_ok) return {false, "(direction flip scored wrong)"};

  return {true, fmt("(%d randomized sets match exactly; direction flip: classification"
                    " micro F1 0, extraction F1 100)",
                    scored)};
}

// ---------------------------------------------------------------------------
// 6. Bundled synthetic corpus: the full model reaches 95% training accuracy
//    inside the epoch and wall-clock budget and beats the majority-class
//    baseline on dev macro F1 by at least 10 points.

Check c6_synthetic_overfit() {
  auto& p = syn();
  if (!p.error.empty()) return {false, "(" + p.error + ")"};

  const std::string ckpt = p.file("model.ckpt");
  const std::string log = p.file("train.log");
  auto t0 = std::chrono::steady_clock::now();
  auto tr = cli("train --config " + q(p.cfg) + " --checkpoint-out " + q(ckpt) +
                " --log-out " + q(log));
  const double dt = seconds_since(t0);
  if (tr.status != 0) return {false, "(training failed: " + tr.out + ")"};

  auto lines = nonempty_lines(read_file(log));
  if (lines.empty()) return {false, "(empty training log)"};
  const int epochs = (int)lines.size();
  const std::string acc_tok = token_after(lines.back(), "train_acc=");
  if (acc_tok.empty()) return {false, "(no train_acc in the log)"};
  const double train_acc = std::stod(acc_tok);

  const std::string pred = p.file("dev.pred");
  auto pr = cli("predict --config " + q(p.cfg) + " --checkpoint " + q(ckpt) + " --docs " +
                q(p.dev_jsonl) + " --out " + q(pred));
  if (pr.status != 0) return {false, "(predict failed: " + pr.out + ")"};
  const std::string rec = p.file("dev.records");
  auto ev = cli("eval --mode classification --gold " + q(p.dev_rel) + " --pred " + q(pred) +
                " --complete-none --out " + q(rec));
  if (ev.status != 0) return {false, "(eval failed: " + ev.out + ")"};
  const double model_macro = macro_f1_of(read_file(rec));

  // majority-class baseline: most frequent training label on every dev pair
  auto kv = KeyValueConfig::from_file(p.cfg);
  auto pc = PipelineConfig::from_kv(kv);
  auto train_docs = documents_from_jsonl(read_file(p.train_jsonl));
  auto train_gold = parse_relation_file(read_file(p.train_rel));
  auto train_ex = build_examples(train_docs, train_gold, pc.model.label_mode,
                                 pc.model.pair_window);
  std::vector<long long> counts((std::size_t)kNumTwelveLabels, 0);
  for (const auto& ex : train_ex)
    ++counts[(std::size_t)twelve_label_index(ex.inst.type, ex.inst.direction)];
  const int majority =
      (int)(std::max_element(counts.begin(), counts.end()) - counts.begin());

  auto dev_docs = documents_from_jsonl(read_file(p.dev_jsonl));
  auto dev_gold = parse_relation_file(read_file(p.dev_rel));
  auto dev_ex = build_examples(dev_docs, dev_gold, pc.model.label_mode, pc.model.pair_window);
  std::vector<RelationInstance> gold, base;
  auto [mt, md] = twelve_label_decode(majority);
  for (const auto& ex : dev_ex) {
    gold.push_back(ex.inst);
    auto b = ex.inst;
    b.type = mt;
    b.direction = md;
    base.push_back(b);
  }
  const double base_macro =
      score_classification(gold, base, ZeroSupport::kCountAsZero).macro_f1;

  Check c;
  c.ok = train_acc >= 0.95 && epochs <= 200 && dt < 300.0 &&
         model_macro >= base_macro + 10.0;
  c.detail = fmt("(train acc %.3f after %d epochs in %.0f s; dev macro F1 %.1f vs"
                 " majority baseline %.1f, margin >= 10 required)",
                 train_acc, epochs, dt, model_macro, base_macro);
  return c;
}

// ---------------------------------------------------------------------------
// 7. Ablation switches: documented classifier input widths and complete
//    end-to-end runs for every variant.

Check c7_ablations() {
  auto& p = syn();
  if (!p.error.empty()) return {false, "(" + p.error + ")"};

  auto kv = KeyValueConfig::from_file(p.cfg);
  auto pc = PipelineConfig::from_kv(kv);
  const int H = pc.model.lstm_hidden, W = pc.model.word_dim, D = pc.model.distance_dim;

  struct Variant {
    const char* label;
    const char* flag;  // extra CLI arguments
    int want_dim;
  };
  const Variant variants[] = {
      {"full", "", 8 * H + 2 * W + D},
      {"no-dep-feat", "--ablate dep_feat", 8 * H + 2 * W + D},
      {"no-dist-feat", "--ablate dist_feat", 8 * H + 2 * W},
      {"no-dep-lstm", "--ablate dep_lstm", 4 * H + 2 * W + D},
      {"no-concept", "--ablate concept", 8 * H + D},
      {"baseline", "--baseline", 8 * H + 4 * H + D},
  };

  auto docs = documents_from_jsonl(read_file(p.train_jsonl));
  auto vocab = ConceptVocabulary::from_file(read_file(p.vocab));

  std::string widths;
  for (const auto& v : variants) {
    ModelConfig mc = pc.model;
    const std::string f = v.flag;
    if (f == "--ablate dep_feat") mc.dep_feat = false;
    if (f == "--ablate dist_feat") mc.dist_feat = false;
    if (f == "--ablate dep_lstm") mc.dep_lstm = false;
    if (f == "--ablate concept") mc.concept_layer = false;
    if (f == "--baseline") {
      mc.concept_layer = false;
      mc.baseline_concept = true;
    }
    RelationModel<float> model(mc, docs, &vocab, nullptr);
    if (model.classifier_input_dim() != v.want_dim)
      return {false, fmt("(%s: classifier input %d, expected %d)", v.label,
                         model.classifier_input_dim(), v.want_dim)};
    if (!widths.empty()) widths += ", ";
    widths += fmt("%s %d", v.label, v.want_dim);

    // short but complete train/predict/eval cycle per variant
    if (f.empty()) continue;  // the full model already ran end to end
    const std::string tag = v.label;
    const std::string ckpt = p.file(tag + ".ckpt");
    const std::string pred = p.file(tag + ".pred");
    const std::string rec = p.file(tag + ".records");
    auto tr = cli("train --config " + q(p.cfg) + " " + f +
                  " --set max_epochs=2 --set stop_train_accuracy=0 --checkpoint-out " +
                  q(ckpt));
    if (tr.status != 0) return {false, fmt("(%s: training failed)", v.label)};
    auto pr = cli("predict --config " + q(p.cfg) + " " + f + " --checkpoint " + q(ckpt) +
                  " --docs " + q(p.dev_jsonl) + " --out " + q(pred));
    if (pr.status != 0) return {false, fmt("(%s: predict failed)", v.label)};
    auto ev = cli("eval --mode classification --gold " + q(p.dev_rel) + " --pred " +
                  q(pred) + " --complete-none --out " + q(rec));
    if (ev.status != 0) return {false, fmt("(%s: eval failed)", v.label)};
    const std::string records = read_file(rec);
    if (records.find("summary=macro") == std::string::npos)
      return {false, fmt("(%s: incomplete metrics report)", v.label)};
  }

  return {true, "(classifier input widths: " + widths + "; every variant trained,"
                " predicted and scored)"};
}

// ---------------------------------------------------------------------------
// 8. Pretraining geometry: planted co-occurrence pairs end up closer than
//    unpaired tokens, and the pair loss passes a finite-difference check.

Check c8_embedding_geometry() {
  const int P = 10;
  std::vector<std::vector<std::string>> sents;
  auto crng = RngStream::from_seed(9).derive("multi");
  for (int rep = 0; rep < 200; ++rep)
    for (int i = 0; i < P; ++i) {
      // each pair shares a private three-token context pool
      std::string c1 = "c" + std::to_string(i) + "_" + std::to_string(crng.uniform_int(3));
      std::string c2 = "c" + std::to_string(i) + "_" + std::to_string(crng.uniform_int(3));
      sents.push_back({c1, "a" + std::to_string(i), "b" + std::to_string(i), c2});
    }

  SkipgramConfig cfg;
  cfg.dim = 16;
  cfg.window = 2;
  cfg.negatives = 5;
  cfg.min_count = 1;
  cfg.epochs = 6;

  int good = 0, total = 0;
  for (int s = 0; s < 5; ++s) {
    cfg.seed = 1 + (std::uint64_t)s;
    auto r = train_skipgram(sents, cfg);
    const auto& t = r.table;
    for (int i = 0; i < P; ++i) {
      const auto a = t.vec(t.row_of("a" + std::to_string(i)));
      const double close = cosine(a, t.vec(t.row_of("b" + std::to_string(i))));
      const double far = cosine(a, t.vec(t.row_of("b" + std::to_string((i + 1) % P))));
      ++total;
      if (close > far) ++good;
    }
  }
  const bool geometry_ok = good * 10 >= total * 9;  // at least 90%

  // finite differences on the pair loss
  auto rng = RngStream::from_seed(31).derive("acceptance/sgns-fd");
  auto rand_vec = [&](int n) {
    std::vector<double> v((std::size_t)n);
    for (auto& x : v) x = rng.uniform(-1.5, 1.5);
    return v;
  };
  const double eps = 1e-6;
  double worst = 0;
  for (int iter = 0; iter < 20; ++iter) {
    const int d = 5;
    std::vector<double> in = rand_vec(d), pos = rand_vec(d);
    std::vector<std::vector<double>> negs = {rand_vec(d), rand_vec(d), rand_vec(d)};
    std::vector<double> g_in(d, 0.0), g_pos(d, 0.0);
    std::vector<std::vector<double>> g_negs(negs.size(), std::vector<double>(d, 0.0));
    sgns_pair_loss(in, pos, negs, &g_in, &g_pos, &g_negs);

    auto probe = [&](std::vector<double>& v, const std::vector<double>& g) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double save = v[i];
        v[i] = save + eps;
        const double lp = sgns_pair_loss(in, pos, negs);
        v[i] = save - eps;
        const double lm = sgns_pair_loss(in, pos, negs);
        v[i] = save;
        const double fd = (lp - lm) / (2 * eps);
        const double rel =
            std::fabs(fd - g[i]) / std::max({std::fabs(fd), std::fabs(g[i]), 1e-4});
        worst = std::max(worst, rel);
      }
    };
    probe(in, g_in);
    probe(pos, g_pos);
    for (std::size_t k = 0; k < negs.size(); ++k) probe(negs[k], g_negs[k]);
  }
  const bool fd_ok = worst < 1e-4;

  Check c;
  c.ok = geometry_ok && fd_ok;
  c.detail = fmt("(%d/%d planted pairs closer than unpaired across 5 seeds;"
                 " pair-loss FD max rel err %.2g)",
                 good, total, worst);
  return c;
}

// ---------------------------------------------------------------------------
// 9. Determinism: every subcommand, rerun with identical inputs and seed,
//    produces byte-identical outputs.

Check c9_determinism() {
  auto& p = syn();
  if (!p.error.empty()) return {false, "(" + p.error + ")"};
  testsup::TempDir rd("acceptance-rerun");

  int commands = 0;
  std::string mismatch;
  // run the same command twice with output paths a/b, compare file hashes
  auto twice = [&](const std::string& what, const std::string& head,
                   const std::string& tail) {
    if (!mismatch.empty()) return;
    for (const char* side : {"a", "b"}) {
      auto r = testsup::run(head + q(rd.file(what + "." + side)) + tail);
      if (r.status != 0) {
        mismatch = what + " failed: " + r.out;
        return;
      }
    }
    ++commands;
    if (testsup::file_hash(rd.file(what + ".a")) != testsup::file_hash(rd.file(what + ".b")))
      mismatch = what + " outputs differ";
  };
  const std::string bin = testsup::scirel_binary() + " ";

  twice("ingest", bin + "ingest --abstracts " + q(p.src + "/train.txt") + " --conll " +
                      q(p.src + "/train.conll") + " --out ", "");
  twice("features", bin + "features --docs " + q(p.train_jsonl) + " --window 1 --out ", "");
  twice("vocab", bin + "concepts build --docs " + q(p.train_jsonl) + " --min-freq 2 --out ",
        "");
  twice("rewrite", bin + "concepts rewrite --vocab " + q(p.vocab) + " --in " +
                       q(p.src + "/pretrain.txt") + " --out ", "");
  twice("candidates",
        bin + "concepts candidates 'recurrent parser states' --vocab " + q(p.vocab) +
            " --out ", "");
  twice("embeddings", bin + "embeddings train --corpus " + q(p.corpus_txt) +
                          " --dim 8 --window 2 --negatives 3 --min-count 2 --epochs 2"
                          " --seed 5 --out ", "");
  twice("train", bin + "train --config " + q(p.cfg) +
                     " --set max_epochs=2 --set stop_train_accuracy=0 --seed 17"
                     " --log-out " + q(rd.file("train.log")) + " --checkpoint-out ", "");
  if (mismatch.empty() &&
      testsup::file_hash(rd.file("train.a.final")) != testsup::file_hash(rd.file("train.b.final")))
    mismatch = "final checkpoints differ";
  twice("predict", bin + "predict --config " + q(p.cfg) + " --seed 17 --checkpoint " +
                       q(rd.file("train.a")) + " --docs " + q(p.dev_jsonl) + " --out ", "");
  twice("eval", bin + "eval --mode classification --gold " + q(p.dev_rel) + " --pred " +
                    q(rd.file("predict.a")) + " --complete-none --out ", "");

  if (mismatch.empty()) {
    auto g1 = cli("gradcheck --dims tiny --seed 4");
    auto g2 = cli("gradcheck --dims tiny --seed 4");
    ++commands;
    if (g1.status != 0 || g2.status != 0)
      mismatch = "gradcheck failed";
    else if (g1.out != g2.out)
      mismatch = "gradcheck output differs";
  }

  if (!mismatch.empty()) return {false, "(" + mismatch + ")"};
  return {true, fmt("(%d subcommands rerun, all outputs byte-identical)", commands)};
}

// ---------------------------------------------------------------------------
// 10. Malformed inputs fail with the documented error classes.

Check c10_error_classes() {
  testsup::TempDir td("acceptance-errors");
  const std::string out = td.file("out.jsonl");

  write_file_atomic(td.file("nested.txt"),
                    "<abstract><entity id=\"X.1\"><entity id=\"X.2\">a"
                    "</entity></entity></abstract>\n");
  auto nested = cli("ingest --abstracts " + q(td.file("nested.txt")) +
                    " --degenerate --out " + q(out));
  if (nested.status != 1 || nested.out.find("unsupported-structure:") == std::string::npos)
    return {false, "(nested entities not rejected as unsupported-structure)"};

  write_file_atomic(td.file("ab.txt"),
                    "<text id=\"C1\"><abstract>Deep parsing .</abstract></text>\n");
  write_file_atomic(td.file("cycle.conll"),
                    "# doc C1\n"
                    "1\tDeep\tJJ\t2\tamod\n"
                    "2\tparsing\tNN\t1\tdep\n"
                    "3\t.\t.\t0\troot\n");
  auto cyc = cli("ingest --abstracts " + q(td.file("ab.txt")) + " --conll " +
                 q(td.file("cycle.conll")) + " --out " + q(out));
  if (cyc.status != 1 || cyc.out.find("tree-validation:") == std::string::npos)
    return {false, "(dependency cycle not rejected as tree-validation)"};

  write_file_atomic(td.file("mis.conll"),
                    "# doc C1\n"
                    "1\tTotally\tRB\t0\troot\n");
  auto mis = cli("ingest --abstracts " + q(td.file("ab.txt")) + " --conll " +
                 q(td.file("mis.conll")) + " --out " + q(out));
  if (mis.status != 1 || mis.out.find("alignment-error:") == std::string::npos)
    return {false, "(token mismatch not rejected as alignment-error)"};

  return {true, "(nested markup, dependency cycle and token mismatch each exit 1"
                " with their error class)"};
}

}  // namespace

int main() {
  criterion(1, "whole-model gradients match finite differences", c1_whole_model_gradients);
  criterion(2, "concept candidates equal the n-gram oracle", c2_candidate_generation);
  criterion(3, "attention weights normalize; uniform and null fallbacks exact",
            c3_attention_normalization);
  criterion(4, "NONE downsampling keeps the expected fraction", c4_none_filtering);
  criterion(5, "scores match brute-force counting", c5_metric_oracle);
  criterion(6, "synthetic corpus: overfits and beats the majority baseline",
            c6_synthetic_overfit);
  criterion(7, "ablation variants: audited widths, complete runs", c7_ablations);
  criterion(8, "planted co-occurrences shape the embedding space", c8_embedding_geometry);
  criterion(9, "identical reruns are byte-identical", c9_determinism);
  criterion(10, "malformed input fails with documented error classes", c10_error_classes);

  if (g_failed > 0) {
    std::printf("acceptance: %d of 10 criteria failed\n", g_failed);
    return 1;
  }
  std::printf("acceptance: all 10 criteria passed\n");
  return 0;
}
