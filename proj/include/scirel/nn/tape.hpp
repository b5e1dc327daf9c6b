#pragma once

// Tape-based reverse-mode autodiff over flat vectors. Ops are a closed enum
// rather than callbacks so the backward pass is a single switch and the node
// layout stays POD-ish. Values are computed eagerly on construction; backward()
// walks nodes in reverse creation order (creation order is topological).

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "scirel/errors.hpp"

namespace scirel::nn {

// Named tensor with accumulated gradient. Shape is rows x cols, row-major;
// vectors use cols == 1 with rows == length.
template <class T>
struct Parameter {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<T> value;
  std::vector<T> grad;

  int size() const { return rows * cols; }
};

template <class T>
class Tape {
 public:
  using Id = int;
  static constexpr Id kNoId = -1;

  // -- graph construction ----------------------------------------------------

  Id constant(std::vector<T> v) { return push(Op::kConstant, std::move(v)); }

  Id zeros(int n) { return constant(std::vector<T>(static_cast<std::size_t>(n), T(0))); }

  // Grad-tracked input that is not a parameter (gradient readable via grad()).
  Id leaf(std::vector<T> v) { return push(Op::kLeaf, std::move(v)); }

  // Whole parameter as a node; backward accumulates into p.grad.
  Id param(Parameter<T>& p) {
    Id id = push(Op::kParam, p.value);
    nodes_[id].param = &p;
    return id;
  }

  // Single row of a parameter matrix (embedding lookup).
  Id row(Parameter<T>& table, int r) {
    if (r < 0 || r >= table.rows)
      throw ShapeError("row " + std::to_string(r) + " out of range for parameter '" +
                       table.name + "' with " + std::to_string(table.rows) + " rows");
    std::vector<T> v(table.value.begin() + static_cast<std::size_t>(r) * table.cols,
                     table.value.begin() + static_cast<std::size_t>(r + 1) * table.cols);
    Id id = push(Op::kRow, std::move(v));
    nodes_[id].param = &table;
    nodes_[id].i0 = r;
    return id;
  }

  // y = W x with W given as a flat row-major (rows x cols) node.
  Id matvec(Id w, int rows, int cols, Id x) {
    check_len(w, rows * cols, "matvec weight");
    check_len(x, cols, "matvec input");
    std::vector<T> y(static_cast<std::size_t>(rows), T(0));
    const auto& wv = nodes_[w].value;
    const auto& xv = nodes_[x].value;
    for (int i = 0; i < rows; ++i) {
      T acc = 0;
      const T* wrow = wv.data() + static_cast<std::size_t>(i) * cols;
      for (int j = 0; j < cols; ++j) acc += wrow[j] * xv[j];
      y[static_cast<std::size_t>(i)] = acc;
    }
    Id id = push(Op::kMatVec, std::move(y), w, x);
    nodes_[id].i0 = rows;
    nodes_[id].i1 = cols;
    return id;
  }

  // y = W^T x; W flat row-major (rows x cols), x length rows, y length cols.
  Id matvec_t(Id w, int rows, int cols, Id x) {
    check_len(w, rows * cols, "matvec_t weight");
    check_len(x, rows, "matvec_t input");
    std::vector<T> y(static_cast<std::size_t>(cols), T(0));
    const auto& wv = nodes_[w].value;
    const auto& xv = nodes_[x].value;
    for (int i = 0; i < rows; ++i) {
      const T* wrow = wv.data() + static_cast<std::size_t>(i) * cols;
      const T xi = xv[static_cast<std::size_t>(i)];
      for (int j = 0; j < cols; ++j) y[static_cast<std::size_t>(j)] += wrow[j] * xi;
    }
    Id id = push(Op::kMatVecT, std::move(y), w, x);
    nodes_[id].i0 = rows;
    nodes_[id].i1 = cols;
    return id;
  }

  Id add(Id a, Id b) {
    check_same(a, b, "add");
    std::vector<T> y = nodes_[a].value;
    const auto& bv = nodes_[b].value;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += bv[i];
    return push(Op::kAdd, std::move(y), a, b);
  }

  Id add_n(const std::vector<Id>& xs) {
    if (xs.empty()) throw ShapeError("add_n needs at least one input");
    if (xs.size() == 1) return xs[0];
    std::vector<T> y = nodes_[xs[0]].value;
    for (std::size_t k = 1; k < xs.size(); ++k) {
      check_same(xs[0], xs[k], "add_n");
      const auto& v = nodes_[xs[k]].value;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += v[i];
    }
    Id id = push(Op::kAddN, std::move(y));
    attach_aux(id, xs);
    return id;
  }

  // Elementwise product.
  Id mul(Id a, Id b) {
    check_same(a, b, "mul");
    std::vector<T> y = nodes_[a].value;
    const auto& bv = nodes_[b].value;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= bv[i];
    return push(Op::kMul, std::move(y), a, b);
  }

  Id scale(T k, Id a) {
    std::vector<T> y = nodes_[a].value;
    for (auto& v : y) v *= k;
    Id id = push(Op::kScale, std::move(y), a);
    nodes_[id].scalar = k;
    return id;
  }

  // y = s * v where s is a length-1 node.
  Id scalar_mul(Id s, Id v) {
    check_len(s, 1, "scalar_mul scalar");
    const T sv = nodes_[s].value[0];
    std::vector<T> y = nodes_[v].value;
    for (auto& x : y) x *= sv;
    return push(Op::kScalarMul, std::move(y), s, v);
  }

  Id sigmoid(Id a) {
    std::vector<T> y = nodes_[a].value;
    for (auto& v : y) v = T(1) / (T(1) + std::exp(-v));
    return push(Op::kSigmoid, std::move(y), a);
  }

  Id tanh_op(Id a) {
    std::vector<T> y = nodes_[a].value;
    for (auto& v : y) v = std::tanh(v);
    return push(Op::kTanh, std::move(y), a);
  }

  Id concat(const std::vector<Id>& xs) {
    if (xs.empty()) throw ShapeError("concat needs at least one input");
    std::vector<T> y;
    std::size_t total = 0;
    for (Id x : xs) total += nodes_[x].value.size();
    y.reserve(total);
    for (Id x : xs) {
      const auto& v = nodes_[x].value;
      y.insert(y.end(), v.begin(), v.end());
    }
    Id id = push(Op::kConcat, std::move(y));
    attach_aux(id, xs);
    return id;
  }

  Id slice(Id a, int begin, int len) {
    const auto& av = nodes_[a].value;
    if (begin < 0 || len < 0 || static_cast<std::size_t>(begin + len) > av.size())
      throw ShapeError("slice [" + std::to_string(begin) + "," + std::to_string(begin + len) +
                       ") out of range for length " + std::to_string(av.size()));
    std::vector<T> y(av.begin() + begin, av.begin() + begin + len);
    Id id = push(Op::kSlice, std::move(y), a);
    nodes_[id].i0 = begin;
    nodes_[id].i1 = len;
    return id;
  }

  Id dot(Id a, Id b) {
    check_same(a, b, "dot");
    const auto& av = nodes_[a].value;
    const auto& bv = nodes_[b].value;
    T acc = 0;
    for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
    return push(Op::kDot, std::vector<T>{acc}, a, b);
  }

  // Numerically stable softmax (max subtraction). A single-entry input yields
  // exactly 1.0, which downstream code relies on for bit-exact pass-through.
  Id softmax(Id a) {
    std::vector<T> y = nodes_[a].value;
    if (y.empty()) throw ShapeError("softmax on empty vector");
    T mx = y[0];
    for (T v : y) mx = std::max(mx, v);
    T sum = 0;
    for (auto& v : y) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (auto& v : y) v /= sum;
    return push(Op::kSoftmax, std::move(y), a);
  }

  // Fused softmax + cross-entropy: value is [-log p_gold], gradient w.r.t.
  // logits is (p - onehot). Probabilities are cached on the node.
  Id xent_loss(Id logits, int gold) {
    const auto& lv = nodes_[logits].value;
    if (gold < 0 || static_cast<std::size_t>(gold) >= lv.size())
      throw ShapeError("cross-entropy gold index " + std::to_string(gold) +
                       " out of range for " + std::to_string(lv.size()) + " logits");
    std::vector<T> p = lv;
    T mx = p[0];
    for (T v : p) mx = std::max(mx, v);
    T sum = 0;
    for (auto& v : p) {
      v = std::exp(v - mx);
      sum += v;
    }
    // log-domain loss: stays finite even when p_gold underflows to zero
    T loss = -(lv[static_cast<std::size_t>(gold)] - mx) + std::log(sum);
    for (auto& v : p) v /= sum;
    Id id = push(Op::kXent, std::vector<T>{loss}, logits);
    nodes_[id].i0 = gold;
    nodes_[id].payload = std::move(p);
    return id;
  }

  // -- inspection ------------------------------------------------------------

  const std::vector<T>& value(Id id) const { return nodes_[check_id(id)].value; }
  const std::vector<T>& grad(Id id) const { return nodes_[check_id(id)].grad; }
  // Softmax probabilities cached by xent_loss.
  const std::vector<T>& cached_probs(Id id) const { return nodes_[check_id(id)].payload; }
  std::size_t node_count() const { return nodes_.size(); }

  // -- backward --------------------------------------------------------------

  void backward(Id loss, T seed = T(1)) {
    const Node& ln = nodes_[check_id(loss)];
    if (ln.value.size() != 1)
      throw ShapeError("backward requires a scalar loss, got length " +
                       std::to_string(ln.value.size()));
    nodes_[loss].grad[0] += seed;
    for (Id i = loss; i >= 0; --i) step_backward(nodes_[static_cast<std::size_t>(i)]);
  }

 private:
  enum class Op {
    kConstant,
    kLeaf,
    kParam,
    kRow,
    kMatVec,
    kMatVecT,
    kAdd,
    kAddN,
    kMul,
    kScale,
    kScalarMul,
    kSigmoid,
    kTanh,
    kConcat,
    kSlice,
    kDot,
    kSoftmax,
    kXent,
  };

  struct Node {
    Op op;
    std::vector<T> value;
    std::vector<T> grad;
    Id a = kNoId;
    Id b = kNoId;
    int i0 = 0;  // rows / begin / gold index / param row
    int i1 = 0;  // cols / slice length
    T scalar = 0;
    int aux_begin = 0;
    int aux_count = 0;
    Parameter<T>* param = nullptr;
    std::vector<T> payload;
  };

  Id push(Op op, std::vector<T> value, Id a = kNoId, Id b = kNoId) {
    Node n;
    n.op = op;
    n.grad.assign(value.size(), T(0));
    n.value = std::move(value);
    n.a = a;
    n.b = b;
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size() - 1);
  }

  void attach_aux(Id id, const std::vector<Id>& xs) {
    nodes_[id].aux_begin = static_cast<int>(aux_.size());
    nodes_[id].aux_count = static_cast<int>(xs.size());
    aux_.insert(aux_.end(), xs.begin(), xs.end());
  }

  Id check_id(Id id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
      throw ShapeError("invalid tape node id " + std::to_string(id));
    return id;
  }

  void check_len(Id id, int n, const char* what) const {
    if (nodes_[check_id(id)].value.size() != static_cast<std::size_t>(n))
      throw ShapeError(std::string(what) + ": expected length " + std::to_string(n) +
                       ", got " + std::to_string(nodes_[id].value.size()));
  }

  void check_same(Id a, Id b, const char* what) const {
    if (nodes_[check_id(a)].value.size() != nodes_[check_id(b)].value.size())
      throw ShapeError(std::string(what) + ": length mismatch " +
                       std::to_string(nodes_[a].value.size()) + " vs " +
                       std::to_string(nodes_[b].value.size()));
  }

  void step_backward(Node& n) {
    const std::vector<T>& g = n.grad;
    switch (n.op) {
      case Op::kConstant:
      case Op::kLeaf:
        break;
      case Op::kParam: {
        auto& pg = n.param->grad;
        for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
        break;
      }
      case Op::kRow: {
        T* pg = n.param->grad.data() + static_cast<std::size_t>(n.i0) * n.param->cols;
        for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
        break;
      }
      case Op::kMatVec: {
        const int rows = n.i0, cols = n.i1;
        auto& wg = nodes_[n.a].grad;
        auto& xg = nodes_[n.b].grad;
        const auto& wv = nodes_[n.a].value;
        const auto& xv = nodes_[n.b].value;
        for (int i = 0; i < rows; ++i) {
          const T gi = g[static_cast<std::size_t>(i)];
          if (gi == T(0)) continue;
          T* wgr = wg.data() + static_cast<std::size_t>(i) * cols;
          const T* wvr = wv.data() + static_cast<std::size_t>(i) * cols;
          for (int j = 0; j < cols; ++j) {
            wgr[j] += gi * xv[static_cast<std::size_t>(j)];
            xg[static_cast<std::size_t>(j)] += wvr[j] * gi;
          }
        }
        break;
      }
      case Op::kMatVecT: {
        const int rows = n.i0, cols = n.i1;
        auto& wg = nodes_[n.a].grad;
        auto& xg = nodes_[n.b].grad;
        const auto& wv = nodes_[n.a].value;
        const auto& xv = nodes_[n.b].value;
        for (int i = 0; i < rows; ++i) {
          const T xi = xv[static_cast<std::size_t>(i)];
          T* wgr = wg.data() + static_cast<std::size_t>(i) * cols;
          const T* wvr = wv.data() + static_cast<std::size_t>(i) * cols;
          T acc = 0;
          for (int j = 0; j < cols; ++j) {
            const T gj = g[static_cast<std::size_t>(j)];
            wgr[j] += xi * gj;
            acc += wvr[j] * gj;
          }
          xg[static_cast<std::size_t>(i)] += acc;
        }
        break;
      }
      case Op::kAdd: {
        auto& ag = nodes_[n.a].grad;
        auto& bg = nodes_[n.b].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
          ag[i] += g[i];
          bg[i] += g[i];
        }
        break;
      }
      case Op::kAddN: {
        for (int k = 0; k < n.aux_count; ++k) {
          auto& cg = nodes_[aux_[static_cast<std::size_t>(n.aux_begin + k)]].grad;
          for (std::size_t i = 0; i < g.size(); ++i) cg[i] += g[i];
        }
        break;
      }
      case Op::kMul: {
        auto& ag = nodes_[n.a].grad;
        auto& bg = nodes_[n.b].grad;
        const auto& av = nodes_[n.a].value;
        const auto& bv = nodes_[n.b].value;
        for (std::size_t i = 0; i < g.size(); ++i) {
          ag[i] += g[i] * bv[i];
          bg[i] += g[i] * av[i];
        }
        break;
      }
      case Op::kScale: {
        auto& ag = nodes_[n.a].grad;
        for (std::size_t i = 0; i < g.size(); ++i) ag[i] += n.scalar * g[i];
        break;
      }
      case Op::kScalarMul: {
        auto& sg = nodes_[n.a].grad;
        auto& vg = nodes_[n.b].grad;
        const T sv = nodes_[n.a].value[0];
        const auto& vv = nodes_[n.b].value;
        T acc = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          acc += g[i] * vv[i];
          vg[i] += sv * g[i];
        }
        sg[0] += acc;
        break;
      }
      case Op::kSigmoid: {
        auto& ag = nodes_[n.a].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
          ag[i] += g[i] * n.value[i] * (T(1) - n.value[i]);
        break;
      }
      case Op::kTanh: {
        auto& ag = nodes_[n.a].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
          ag[i] += g[i] * (T(1) - n.value[i] * n.value[i]);
        break;
      }
      case Op::kConcat: {
        std::size_t off = 0;
        for (int k = 0; k < n.aux_count; ++k) {
          auto& cg = nodes_[aux_[static_cast<std::size_t>(n.aux_begin + k)]].grad;
          for (std::size_t i = 0; i < cg.size(); ++i) cg[i] += g[off + i];
          off += cg.size();
        }
        break;
      }
      case Op::kSlice: {
        auto& ag = nodes_[n.a].grad;
        for (std::size_t i = 0; i < g.size(); ++i)
          ag[static_cast<std::size_t>(n.i0) + i] += g[i];
        break;
      }
      case Op::kDot: {
        auto& ag = nodes_[n.a].grad;
        auto& bg = nodes_[n.b].grad;
        const auto& av = nodes_[n.a].value;
        const auto& bv = nodes_[n.b].value;
        const T g0 = g[0];
        for (std::size_t i = 0; i < av.size(); ++i) {
          ag[i] += g0 * bv[i];
          bg[i] += g0 * av[i];
        }
        break;
      }
      case Op::kSoftmax: {
        auto& ag = nodes_[n.a].grad;
        T dotgy = 0;
        for (std::size_t i = 0; i < g.size(); ++i) dotgy += g[i] * n.value[i];
        for (std::size_t i = 0; i < g.size(); ++i)
          ag[i] += n.value[i] * (g[i] - dotgy);
        break;
      }
      case Op::kXent: {
        auto& ag = nodes_[n.a].grad;
        const T g0 = g[0];
        for (std::size_t i = 0; i < ag.size(); ++i) {
          T delta = n.payload[i];
          if (static_cast<int>(i) == n.i0) delta -= T(1);
          ag[i] += g0 * delta;
        }
        break;
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<Id> aux_;
};

}  // namespace scirel::nn
