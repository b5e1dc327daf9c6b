#pragma once

// Attention building blocks. Bilinear scoring s_k = (W^T q) . v_k with a
// stable softmax over keys; the key list always includes whatever fallback
// the caller appends (the learned null vector, for concept selection), so a
// single-key call collapses to alpha = [1] and passes that key through
// bit-exactly (multiplication by an exact 1.0).

#include <vector>

#include "scirel/errors.hpp"
#include "scirel/nn/tape.hpp"

namespace scirel::nn {

template <class T>
struct AttentionOut {
  typename Tape<T>::Id alpha;    // weights over keys, sums to 1
  typename Tape<T>::Id context;  // sum_k alpha_k * key_k
};

// query: length q_dim; w: flat (q_dim x key_dim); keys: each length key_dim.
template <class T>
AttentionOut<T> bilinear_attention(Tape<T>& tape, typename Tape<T>::Id query,
                                   typename Tape<T>::Id w, int q_dim, int key_dim,
                                   const std::vector<typename Tape<T>::Id>& keys) {
  using Id = typename Tape<T>::Id;
  if (keys.empty()) throw ShapeError("attention needs at least one key");
  Id probe = tape.matvec_t(w, q_dim, key_dim, query);
  std::vector<Id> scores;
  scores.reserve(keys.size());
  for (Id k : keys) scores.push_back(tape.dot(probe, k));
  Id alpha = tape.softmax(tape.concat(scores));
  std::vector<Id> weighted;
  weighted.reserve(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k)
    weighted.push_back(tape.scalar_mul(tape.slice(alpha, static_cast<int>(k), 1), keys[k]));
  return {alpha, tape.add_n(weighted)};
}

// Plain dot-product attention with a learned query vector; used for the
// span-state averaging variants (no bilinear matrix).
template <class T>
AttentionOut<T> dot_attention(Tape<T>& tape, typename Tape<T>::Id query,
                              const std::vector<typename Tape<T>::Id>& keys) {
  using Id = typename Tape<T>::Id;
  if (keys.empty()) throw ShapeError("attention needs at least one key");
  std::vector<Id> scores;
  scores.reserve(keys.size());
  for (Id k : keys) scores.push_back(tape.dot(query, k));
  Id alpha = tape.softmax(tape.concat(scores));
  std::vector<Id> weighted;
  weighted.reserve(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k)
    weighted.push_back(tape.scalar_mul(tape.slice(alpha, static_cast<int>(k), 1), keys[k]));
  return {alpha, tape.add_n(weighted)};
}

}  // namespace scirel::nn
