#pragma once

// Named parameter collection: deterministic initialization, SGD with global
// gradient-norm clipping, and a text checkpoint format. Checkpoint values are
// written as hexfloats so save/load round-trips bitwise.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "scirel/errors.hpp"
#include "scirel/nn/tape.hpp"
#include "scirel/rng.hpp"
#include "scirel/util.hpp"

namespace scirel::nn {

template <class T>
class ParameterStore {
 public:
  // Glorot-uniform matrix: U(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
  // Each parameter draws from its own stream keyed by name, so creating or
  // skipping one parameter never shifts another's initial values.
  Parameter<T>& add_matrix(const std::string& name, int rows, int cols, RngStream& base) {
    Parameter<T>& p = emplace(name, rows, cols);
    RngStream rng = base.derive("init/" + name);
    const double r = std::sqrt(6.0 / (static_cast<double>(rows) + static_cast<double>(cols)));
    for (auto& v : p.value) v = static_cast<T>(rng.uniform(-r, r));
    return p;
  }

  // Zero-initialized vector (biases, the shared no-path input, etc.).
  Parameter<T>& add_vector(const std::string& name, int n) {
    return emplace(name, n, 1);
  }

  // Small random vector for learned query/null embeddings that would be
  // useless at exactly zero.
  Parameter<T>& add_random_vector(const std::string& name, int n, RngStream& base, double r) {
    Parameter<T>& p = emplace(name, n, 1);
    RngStream rng = base.derive("init/" + name);
    for (auto& v : p.value) v = static_cast<T>(rng.uniform(-r, r));
    return p;
  }

  // LSTM bias with the forget-gate block set to +1 (gate order i, f, g, o).
  Parameter<T>& add_lstm_bias(const std::string& name, int hidden) {
    Parameter<T>& p = emplace(name, 4 * hidden, 1);
    for (int i = hidden; i < 2 * hidden; ++i) p.value[static_cast<std::size_t>(i)] = T(1);
    return p;
  }

  bool has(const std::string& name) const { return by_name_.count(name) != 0; }

  Parameter<T>& get(const std::string& name) {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw LookupError("no parameter named '" + name + "'");
    return *it->second;
  }

  const Parameter<T>& get(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw LookupError("no parameter named '" + name + "'");
    return *it->second;
  }

  // Creation order; stable across runs by construction.
  const std::vector<Parameter<T>*>& all() { return order_; }
  std::vector<const Parameter<T>*> all() const {
    return {order_.begin(), order_.end()};
  }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto* p : order_) n += p->value.size();
    return n;
  }

  void zero_grads() {
    for (auto* p : order_)
      for (auto& g : p->grad) g = T(0);
  }

  void scale_grads(T s) {
    for (auto* p : order_)
      for (auto& g : p->grad) g *= s;
  }

  double grad_norm() const {
    double acc = 0;
    for (const auto* p : order_)
      for (const T g : p->grad) acc += static_cast<double>(g) * static_cast<double>(g);
    return std::sqrt(acc);
  }

  // One SGD update over all parameters. If clip > 0 and the global gradient
  // norm exceeds it, every gradient is scaled by clip/norm first. Non-finite
  // gradients abort with the offending parameter named.
  void sgd_step(T lr, T clip) {
    for (const auto* p : order_)
      for (const T g : p->grad)
        if (!std::isfinite(static_cast<double>(g)))
          throw NumericError("non-finite gradient in parameter '" + p->name + "'");
    double norm = grad_norm();
    T s = T(1);
    if (clip > T(0) && norm > static_cast<double>(clip))
      s = static_cast<T>(static_cast<double>(clip) / norm);
    for (auto* p : order_)
      for (std::size_t i = 0; i < p->value.size(); ++i)
        p->value[i] -= lr * s * p->grad[i];
    zero_grads();
  }

  // -- checkpoint ------------------------------------------------------------
  //
  // Line-oriented text:
  //   scirel-checkpoint 1
  //   config_hash <hex64>
  //   state <key> <value>          (repeated; values must be whitespace-free)
  //   param <name> <rows> <cols>
  //   <hexfloat> per value, one row per line
  //   end

  std::string save_checkpoint(std::uint64_t config_hash,
                              const std::map<std::string, std::string>& state) const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash));
    out << "scirel-checkpoint 1\n";
    out << "config_hash " << buf << "\n";
    for (const auto& [k, v] : state) out << "state " << k << " " << v << "\n";
    for (const auto* p : order_) {
      out << "param " << p->name << " " << p->rows << " " << p->cols << "\n";
      for (int r = 0; r < p->rows; ++r) {
        for (int c = 0; c < p->cols; ++c) {
          std::snprintf(buf, sizeof(buf), "%a",
                        static_cast<double>(p->value[static_cast<std::size_t>(r) * p->cols + c]));
          out << (c ? " " : "") << buf;
        }
        out << "\n";
      }
    }
    out << "end\n";
    return out.str();
  }

  // The store must already hold parameters with matching names and shapes
  // (they are rebuilt from the model configuration before loading).
  std::map<std::string, std::string> load_checkpoint(const std::string& text,
                                                     std::uint64_t expect_config_hash) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "scirel-checkpoint 1")
      throw FormatError("not a checkpoint file (bad magic line)");
    std::map<std::string, std::string> state;
    std::size_t loaded = 0;
    bool saw_hash = false, saw_end = false;
    while (std::getline(in, line)) {
      line = std::string(trim(line));
      if (line.empty()) continue;
      std::vector<std::string> f = split_ws(line);
      if (f[0] == "config_hash") {
        if (f.size() != 2) throw FormatError("malformed config_hash line");
        std::uint64_t h = std::stoull(f[1], nullptr, 16);
        if (h != expect_config_hash)
          throw ConfigError("checkpoint was written with a different configuration "
                            "(config hash mismatch)");
        saw_hash = true;
      } else if (f[0] == "state") {
        if (f.size() != 3) throw FormatError("malformed state line: " + line);
        state[f[1]] = f[2];
      } else if (f[0] == "param") {
        if (f.size() != 4) throw FormatError("malformed param header: " + line);
        if (!has(f[1])) throw FormatError("checkpoint has unknown parameter '" + f[1] + "'");
        Parameter<T>& p = get(f[1]);
        int rows = std::stoi(f[2]), cols = std::stoi(f[3]);
        if (rows != p.rows || cols != p.cols)
          throw FormatError("shape mismatch for parameter '" + f[1] + "': file says " +
                            f[2] + "x" + f[3] + ", model has " + std::to_string(p.rows) +
                            "x" + std::to_string(p.cols));
        for (int r = 0; r < rows; ++r) {
          if (!std::getline(in, line))
            throw FormatError("truncated checkpoint in parameter '" + f[1] + "'");
          std::vector<std::string> vals = split_ws(line);
          if (static_cast<int>(vals.size()) != cols)
            throw FormatError("row length mismatch in parameter '" + f[1] + "'");
          for (int c = 0; c < cols; ++c) {
            double d = std::strtod(vals[static_cast<std::size_t>(c)].c_str(), nullptr);
            p.value[static_cast<std::size_t>(r) * cols + c] = static_cast<T>(d);
          }
        }
        ++loaded;
      } else if (f[0] == "end") {
        saw_end = true;
        break;
      } else {
        throw FormatError("unexpected checkpoint line: " + line);
      }
    }
    if (!saw_hash) throw FormatError("checkpoint missing config_hash");
    if (!saw_end) throw FormatError("checkpoint missing end marker");
    if (loaded != order_.size())
      throw FormatError("checkpoint holds " + std::to_string(loaded) + " parameters, model has " +
                        std::to_string(order_.size()));
    return state;
  }

 private:
  Parameter<T>& emplace(const std::string& name, int rows, int cols) {
    if (has(name)) throw ValidationError("duplicate parameter name '" + name + "'");
    if (rows <= 0 || cols <= 0)
      throw ShapeError("parameter '" + name + "' has non-positive shape");
    auto p = std::make_unique<Parameter<T>>();
    p->name = name;
    p->rows = rows;
    p->cols = cols;
    p->value.assign(static_cast<std::size_t>(rows) * cols, T(0));
    p->grad.assign(p->value.size(), T(0));
    Parameter<T>* raw = p.get();
    storage_.push_back(std::move(p));
    order_.push_back(raw);
    by_name_[name] = raw;
    return *raw;
  }

  std::vector<std::unique_ptr<Parameter<T>>> storage_;
  std::vector<Parameter<T>*> order_;
  std::map<std::string, Parameter<T>*> by_name_;
};

}  // namespace scirel::nn
