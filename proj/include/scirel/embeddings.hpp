#pragma once

// Word/concept embedding table with a plain-text format, and a single-threaded
// skip-gram negative-sampling trainer. The trainer follows the classic
// word2vec recipe (dynamic window, unigram^0.75 noise, linear learning-rate
// decay) but runs strictly sequentially with one owned RNG stream, so the
// resulting table is a pure function of (corpus, config, seed).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "scirel/errors.hpp"
#include "scirel/rng.hpp"
#include "scirel/util.hpp"

namespace scirel {

inline constexpr const char* kUnkToken = "<UNK>";

class EmbeddingTable {
 public:
  // Provenance of a trained table; kept in memory only (the file format stays
  // minimal so other tools can read it).
  struct Metadata {
    std::string corpus_id;
    int window = 0;
    int negatives = 0;
    int epochs = 0;
    std::uint64_t seed = 0;
  };

  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  Metadata& metadata() { return metadata_; }
  const Metadata& metadata() const { return metadata_; }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int row) const { return tokens_.at(static_cast<std::size_t>(row)); }

  int add(const std::string& token, std::vector<double> vec) {
    if (static_cast<int>(vec.size()) != dim_)
      throw ShapeError("embedding for '" + token + "' has dimension " +
                       std::to_string(vec.size()) + ", table expects " + std::to_string(dim_));
    if (index_.count(token)) throw ValidationError("duplicate embedding token '" + token + "'");
    for (double v : vec)
      if (!std::isfinite(v))
        throw NumericError("non-finite component in embedding for '" + token + "'");
    int row = size();
    index_[token] = row;
    tokens_.push_back(token);
    data_.insert(data_.end(), vec.begin(), vec.end());
    return row;
  }

  // -1 when absent.
  int row_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : it->second;
  }

  bool has(const std::string& token) const { return index_.count(token) != 0; }

  const double* row(int r) const {
    if (r < 0 || r >= size()) throw LookupError("embedding row " + std::to_string(r) + " out of range");
    return data_.data() + static_cast<std::size_t>(r) * dim_;
  }

  std::vector<double> vec(int r) const {
    const double* p = row(r);
    return {p, p + dim_};
  }

  double* mutable_row(int r) {
    return const_cast<double*>(static_cast<const EmbeddingTable&>(*this).row(r));
  }

  // Format: "<row_count> <dim>\n" then one "<token> <v1> ... <vdim>\n" per
  // row. Values use shortest round-trip decimal, so save/load is bit-exact.
  std::string to_text() const {
    std::ostringstream out;
    out << size() << " " << dim_ << "\n";
    for (int r = 0; r < size(); ++r) {
      out << tokens_[static_cast<std::size_t>(r)];
      const double* p = row(r);
      for (int j = 0; j < dim_; ++j) out << " " << format_double(p[j]);
      out << "\n";
    }
    return out.str();
  }

  static EmbeddingTable from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty embedding file");
    std::vector<std::string> head = split_ws(line);
    if (head.size() != 2) throw FormatError("embedding header must be '<rows> <dim>'");
    long long rows = 0;
    int dim = 0;
    try {
      rows = std::stoll(head[0]);
      dim = std::stoi(head[1]);
    } catch (const std::exception&) {
      throw FormatError("embedding header must be '<rows> <dim>', got: " + line);
    }
    if (rows < 0 || dim <= 0) throw FormatError("embedding header has non-positive sizes");
    EmbeddingTable table(dim);
    long long seen = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      std::vector<std::string> f = split_ws(line);
      if (static_cast<int>(f.size()) != dim + 1)
        throw FormatError("embedding line " + std::to_string(line_no) + " has " +
                          std::to_string(f.size() - 1) + " values, expected " +
                          std::to_string(dim));
      std::vector<double> v(static_cast<std::size_t>(dim));
      for (int j = 0; j < dim; ++j) {
        char* end = nullptr;
        v[static_cast<std::size_t>(j)] = std::strtod(f[static_cast<std::size_t>(j) + 1].c_str(), &end);
        if (end == nullptr || *end != '\0')
          throw FormatError("bad number on embedding line " + std::to_string(line_no));
      }
      try {
        table.add(f[0], std::move(v));
      } catch (const ValidationError& e) {
        throw FormatError(std::string(e.what()) + " on line " + std::to_string(line_no));
      } catch (const NumericError& e) {
        throw FormatError(std::string(e.what()) + " on line " + std::to_string(line_no));
      }
      ++seen;
    }
    if (seen != rows)
      throw FormatError("embedding header declares " + std::to_string(rows) + " rows, file has " +
                        std::to_string(seen));
    return table;
  }

 private:
  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::unordered_map<std::string, int> index_;
  Metadata metadata_;
};

// -- skip-gram with negative sampling ----------------------------------------

struct SkipgramConfig {
  int dim = 250;
  int window = 5;       // maximum one-sided window; effective size is drawn per center
  int negatives = 5;
  int min_count = 5;    // tokens with count < min_count collapse to <UNK>
  int epochs = 5;
  double lr = 0.025;    // linearly decayed, floored at lr * 1e-4
  double unigram_power = 0.75;
  std::uint64_t seed = 1;

  void validate() const {
    if (dim <= 0) throw ValidationError("skipgram dim must be positive");
    if (window <= 0) throw ValidationError("skipgram window must be positive");
    if (negatives <= 0) throw ValidationError("skipgram negatives must be positive");
    if (min_count < 1) throw ValidationError("skipgram min_count must be >= 1");
    if (epochs <= 0) throw ValidationError("skipgram epochs must be positive");
    if (!(lr > 0)) throw ValidationError("skipgram learning rate must be positive");
  }
};

// Noise distribution proportional to count^power, sampled exactly via a
// cumulative table and binary search on a uniform draw.
class NegativeSampler {
 public:
  NegativeSampler(const std::vector<long long>& counts, double power) {
    cumulative_.reserve(counts.size());
    double acc = 0;
    for (long long c : counts) {
      acc += std::pow(static_cast<double>(c), power);
      cumulative_.push_back(acc);
    }
    if (cumulative_.empty() || acc <= 0)
      throw ValidationError("negative sampler needs at least one positive count");
  }

  int draw(RngStream& rng) const {
    double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<int>(it - cumulative_.begin());
  }

  double probability(int row) const {
    double lo = row == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(row) - 1];
    return (cumulative_[static_cast<std::size_t>(row)] - lo) / cumulative_.back();
  }

  int size() const { return static_cast<int>(cumulative_.size()); }

 private:
  std::vector<double> cumulative_;
};

namespace sgns_detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace sgns_detail

// Loss and gradients for one (input, positive, negatives) triple:
//   L = -log sigmoid(in . pos) - sum_k log sigmoid(-(in . neg_k))
// Exposed so finite-difference tests can probe the exact update the trainer
// applies. Gradient buffers must be pre-sized and are accumulated into.
inline double sgns_pair_loss(const std::vector<double>& in, const std::vector<double>& pos,
                             const std::vector<std::vector<double>>& negs,
                             std::vector<double>* g_in = nullptr,
                             std::vector<double>* g_pos = nullptr,
                             std::vector<std::vector<double>>* g_negs = nullptr) {
  const std::size_t d = in.size();
  auto dotp = [d](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
  };
  double loss = 0;
  {
    const double f = sgns_detail::sigmoid(dotp(in, pos));
    loss += -std::log(std::max(f, 1e-300));
    if (g_in) {
      const double g = f - 1.0;  // d loss / d (in . pos)
      for (std::size_t i = 0; i < d; ++i) {
        (*g_in)[i] += g * pos[i];
        (*g_pos)[i] += g * in[i];
      }
    }
  }
  for (std::size_t k = 0; k < negs.size(); ++k) {
    const double f = sgns_detail::sigmoid(dotp(in, negs[k]));
    loss += -std::log(std::max(1.0 - f, 1e-300));
    if (g_in) {
      const double g = f;
      for (std::size_t i = 0; i < d; ++i) {
        (*g_in)[i] += g * negs[k][i];
        (*g_negs)[k][i] += g * in[i];
      }
    }
  }
  return loss;
}

struct SkipgramResult {
  EmbeddingTable table;          // input vectors, one row per vocabulary token
  std::vector<double> epoch_losses;  // mean pair loss per epoch
  long long vocab_size = 0;
  long long train_tokens = 0;   // token occurrences per epoch after mapping
};

// sentences: token sequences; windows never cross sentence boundaries.
inline SkipgramResult train_skipgram(const std::vector<std::vector<std::string>>& sentences,
                                     const SkipgramConfig& cfg) {
  cfg.validate();

  // Vocabulary: count, collapse sub-min-count tokens into <UNK>, order by
  // (count desc, token asc) for a stable layout.
  std::map<std::string, long long> counts;
  long long total_tokens = 0;
  for (const auto& sent : sentences)
    for (const auto& tok : sent) {
      ++counts[tok];
      ++total_tokens;
    }
  if (total_tokens == 0) throw ValidationError("skipgram corpus has no tokens");
  long long unk_count = 0;
  std::vector<std::pair<std::string, long long>> kept;
  for (const auto& [tok, c] : counts) {
    if (tok == kUnkToken) { unk_count += c; continue; }
    if (c >= cfg.min_count) kept.emplace_back(tok, c);
    else unk_count += c;
  }
  if (kept.empty() && unk_count == 0)
    throw ValidationError("skipgram vocabulary is empty after min-count filtering");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> vocab;
  std::vector<long long> vocab_counts;
  std::unordered_map<std::string, int> vocab_index;
  for (const auto& [tok, c] : kept) {
    vocab_index[tok] = static_cast<int>(vocab.size());
    vocab.push_back(tok);
    vocab_counts.push_back(c);
  }
  const int unk_id = static_cast<int>(vocab.size());
  vocab_index[kUnkToken] = unk_id;
  vocab.push_back(kUnkToken);
  vocab_counts.push_back(std::max<long long>(unk_count, 1));
  const int V = static_cast<int>(vocab.size());
  const int D = cfg.dim;

  // Map the corpus to ids once.
  std::vector<std::vector<int>> ids;
  ids.reserve(sentences.size());
  for (const auto& sent : sentences) {
    if (sent.empty()) continue;
    std::vector<int> s;
    s.reserve(sent.size());
    for (const auto& tok : sent) {
      auto it = vocab_index.find(tok);
      s.push_back(it == vocab_index.end() ? unk_id : it->second);
    }
    ids.push_back(std::move(s));
  }

  RngStream rng = RngStream::from_seed(cfg.seed).derive("skipgram");
  NegativeSampler sampler(vocab_counts, cfg.unigram_power);

  // Input vectors: U(-0.5/dim, 0.5/dim); output (context) vectors: zeros.
  std::vector<double> syn0(static_cast<std::size_t>(V) * D);
  std::vector<double> syn1(static_cast<std::size_t>(V) * D, 0.0);
  for (auto& v : syn0) v = rng.uniform(-0.5 / D, 0.5 / D);

  const double total_steps =
      static_cast<double>(cfg.epochs) * static_cast<double>(total_tokens) + 1.0;
  long long processed = 0;
  std::vector<double> work(static_cast<std::size_t>(D));

  SkipgramResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0;
    long long epoch_pairs = 0;
    for (const auto& sent : ids) {
      const int n = static_cast<int>(sent.size());
      for (int c = 0; c < n; ++c) {
        ++processed;
        double alpha = cfg.lr * (1.0 - static_cast<double>(processed) / total_steps);
        alpha = std::max(alpha, cfg.lr * 1e-4);
        const int center = sent[static_cast<std::size_t>(c)];
        // Dynamic window: effective one-sided size in [1, window].
        const int b = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.window)));
        for (int o = c - b; o <= c + b; ++o) {
          if (o == c || o < 0 || o >= n) continue;
          const int context = sent[static_cast<std::size_t>(o)];
          // Input vector of the context word, output vectors of the center
          // word and of sampled noise words (the word2vec arrangement).
          double* in = syn0.data() + static_cast<std::size_t>(context) * D;
          std::fill(work.begin(), work.end(), 0.0);
          double pair_loss = 0;
          for (int d = 0; d < cfg.negatives + 1; ++d) {
            int target;
            double label;
            if (d == 0) {
              target = center;
              label = 1.0;
            } else {
              target = sampler.draw(rng);
              if (target == center) continue;
              label = 0.0;
            }
            double* out = syn1.data() + static_cast<std::size_t>(target) * D;
            double f = 0;
            for (int j = 0; j < D; ++j) f += in[j] * out[j];
            const double s = sgns_detail::sigmoid(f);
            pair_loss += label > 0.5 ? -std::log(std::max(s, 1e-300))
                                     : -std::log(std::max(1.0 - s, 1e-300));
            const double g = (label - s) * alpha;
            for (int j = 0; j < D; ++j) {
              work[static_cast<std::size_t>(j)] += g * out[j];
              out[j] += g * in[j];
            }
          }
          for (int j = 0; j < D; ++j) in[j] += work[static_cast<std::size_t>(j)];
          epoch_loss += pair_loss;
          ++epoch_pairs;
        }
      }
    }
    const double mean = epoch_pairs ? epoch_loss / static_cast<double>(epoch_pairs) : 0.0;
    if (!std::isfinite(mean))
      throw NumericError("non-finite skip-gram loss in epoch " + std::to_string(epoch + 1));
    result.epoch_losses.push_back(mean);
  }

  EmbeddingTable table(D);
  for (int r = 0; r < V; ++r) {
    std::vector<double> v(syn0.begin() + static_cast<std::size_t>(r) * D,
                          syn0.begin() + static_cast<std::size_t>(r + 1) * D);
    table.add(vocab[static_cast<std::size_t>(r)], std::move(v));
  }
  table.metadata() = {"", cfg.window, cfg.negatives, cfg.epochs, cfg.seed};
  result.table = std::move(table);
  result.vocab_size = V;
  result.train_tokens = total_tokens;
  return result;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace scirel
