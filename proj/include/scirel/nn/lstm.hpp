#pragma once

// LSTM cell and sequence runners on top of the tape. Weight layout follows the
// common packed convention: W (4H x input), U (4H x H), b (4H), with gate
// blocks ordered i, f, g, o. The bias carries the +1 forget-gate offset at
// initialization time (see ParameterStore::add_lstm_bias).

#include <string>
#include <vector>

#include "scirel/errors.hpp"
#include "scirel/nn/params.hpp"
#include "scirel/nn/tape.hpp"

namespace scirel::nn {

template <class T>
struct LstmWeights {
  Parameter<T>* w = nullptr;
  Parameter<T>* u = nullptr;
  Parameter<T>* b = nullptr;
  int input_dim = 0;
  int hidden_dim = 0;
};

// Creates (or fetches, if already present) the three parameters for one
// directional LSTM under names "<prefix>.w", "<prefix>.u", "<prefix>.b".
template <class T>
LstmWeights<T> make_lstm(ParameterStore<T>& store, const std::string& prefix, int input_dim,
                         int hidden_dim, RngStream& base) {
  LstmWeights<T> lw;
  lw.input_dim = input_dim;
  lw.hidden_dim = hidden_dim;
  lw.w = store.has(prefix + ".w") ? &store.get(prefix + ".w")
                                  : &store.add_matrix(prefix + ".w", 4 * hidden_dim, input_dim, base);
  lw.u = store.has(prefix + ".u") ? &store.get(prefix + ".u")
                                  : &store.add_matrix(prefix + ".u", 4 * hidden_dim, hidden_dim, base);
  lw.b = store.has(prefix + ".b") ? &store.get(prefix + ".b")
                                  : &store.add_lstm_bias(prefix + ".b", hidden_dim);
  return lw;
}

template <class T>
struct LstmStep {
  typename Tape<T>::Id h;
  typename Tape<T>::Id c;
};

template <class T>
LstmStep<T> lstm_cell(Tape<T>& tape, const LstmWeights<T>& lw, typename Tape<T>::Id x,
                      const LstmStep<T>& prev) {
  using Id = typename Tape<T>::Id;
  const int H = lw.hidden_dim;
  Id w = tape.param(*lw.w);
  Id u = tape.param(*lw.u);
  Id b = tape.param(*lw.b);
  Id gates = tape.add(tape.add(tape.matvec(w, 4 * H, lw.input_dim, x),
                               tape.matvec(u, 4 * H, H, prev.h)),
                      b);
  Id ig = tape.sigmoid(tape.slice(gates, 0, H));
  Id fg = tape.sigmoid(tape.slice(gates, H, H));
  Id gg = tape.tanh_op(tape.slice(gates, 2 * H, H));
  Id og = tape.sigmoid(tape.slice(gates, 3 * H, H));
  Id c = tape.add(tape.mul(fg, prev.c), tape.mul(ig, gg));
  Id h = tape.mul(og, tape.tanh_op(c));
  return {h, c};
}

// Runs the sequence left-to-right (backward_dir=false) or right-to-left
// (backward_dir=true). Output states are indexed by input position either
// way, so out[i] is always the state at inputs[i].
template <class T>
std::vector<typename Tape<T>::Id> lstm_run(Tape<T>& tape, const LstmWeights<T>& lw,
                                           const std::vector<typename Tape<T>::Id>& inputs,
                                           bool backward_dir) {
  using Id = typename Tape<T>::Id;
  if (inputs.empty()) throw ShapeError("lstm_run on empty sequence");
  const int n = static_cast<int>(inputs.size());
  std::vector<Id> out(inputs.size());
  LstmStep<T> state{tape.zeros(lw.hidden_dim), tape.zeros(lw.hidden_dim)};
  for (int k = 0; k < n; ++k) {
    const int pos = backward_dir ? n - 1 - k : k;
    state = lstm_cell(tape, lw, inputs[static_cast<std::size_t>(pos)], state);
    out[static_cast<std::size_t>(pos)] = state.h;
  }
  return out;
}

template <class T>
struct BiLstmWeights {
  LstmWeights<T> fwd;
  LstmWeights<T> bwd;
};

template <class T>
BiLstmWeights<T> make_bilstm(ParameterStore<T>& store, const std::string& prefix, int input_dim,
                             int hidden_dim, RngStream& base) {
  return {make_lstm(store, prefix + ".fwd", input_dim, hidden_dim, base),
          make_lstm(store, prefix + ".bwd", input_dim, hidden_dim, base)};
}

template <class T>
struct BiLstmOut {
  // Direction-specific states, indexed by input position.
  std::vector<typename Tape<T>::Id> fwd;
  std::vector<typename Tape<T>::Id> bwd;
  // concat(fwd[i], bwd[i]) per position.
  std::vector<typename Tape<T>::Id> states;
};

template <class T>
BiLstmOut<T> bilstm_run(Tape<T>& tape, const BiLstmWeights<T>& bw,
                        const std::vector<typename Tape<T>::Id>& inputs) {
  BiLstmOut<T> out;
  out.fwd = lstm_run(tape, bw.fwd, inputs, false);
  out.bwd = lstm_run(tape, bw.bwd, inputs, true);
  out.states.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    out.states.push_back(tape.concat({out.fwd[i], out.bwd[i]}));
  return out;
}

}  // namespace scirel::nn
