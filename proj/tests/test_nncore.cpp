#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "scirel/nn/attention.hpp"
#include "scirel/nn/gradcheck.hpp"
#include "scirel/nn/lstm.hpp"
#include "scirel/nn/params.hpp"
#include "scirel/nn/tape.hpp"
#include "scirel/rng.hpp"
#include "support.hpp"

using namespace scirel;
using nn::Tape;
using Id = Tape<double>::Id;

static std::vector<double> rand_vec(RngStream& rng, int n, double r = 1.0) {
  std::vector<double> v((std::size_t)n);
  for (auto& x : v) x = rng.uniform(-r, r);
  return v;
}

// Finite-difference check of d(scalar graph)/d(input leaf) for one op graph.
static void check_leaf_grad(const std::vector<double>& x,
                            const std::function<Id(Tape<double>&, Id)>& build,
                            double tol = 1e-6) {
  Tape<double> tape;
  Id leaf = tape.leaf(x);
  Id loss = build(tape, leaf);
  tape.backward(loss);
  std::vector<double> analytic = tape.grad(leaf);

  const double eps = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto eval = [&](double delta) {
      std::vector<double> xp = x;
      xp[i] += delta;
      Tape<double> t2;
      return t2.value(build(t2, t2.leaf(xp)))[0];
    };
    double fd = (eval(eps) - eval(-eps)) / (2 * eps);
    INFO("component " << i);
    CHECK(nn::grad_rel_err(analytic[i], fd) < tol);
  }
}

TEST_CASE("elementwise and linear ops match finite differences") {
  auto rng = RngStream::from_seed(17).derive("opsfd");
  std::vector<double> probe = rand_vec(rng, 4);
  std::vector<double> other = rand_vec(rng, 4);
  std::vector<double> w = rand_vec(rng, 12);  // 3x4

  auto scalarize = [probe](Tape<double>& t, Id v) {
    // fixed-coefficient dot, so every component reaches the loss
    return t.dot(v, t.constant(probe));
  };

  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.add(x, t.constant(other)));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.mul(x, t.constant(other)));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.scale(-1.7, x));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.sigmoid(x));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.tanh_op(x));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.add_n({x, x, t.constant(other)}));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return t.dot(x, t.constant(other));
  });
  check_leaf_grad(rand_vec(rng, 5), [&](Tape<double>& t, Id x) {
    // scalar_mul: first element scales the rest
    return scalarize(t, t.scalar_mul(t.slice(x, 0, 1), t.slice(x, 1, 4)));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    auto y = t.concat({t.slice(x, 2, 2), t.slice(x, 0, 2)});
    return scalarize(t, y);
  });
  // matvec over the input; then over the weight itself
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    Id y = t.matvec(t.constant(w), 3, 4, x);
    return t.dot(y, t.constant({0.3, -0.9, 0.5}));
  });
  check_leaf_grad(w, [&](Tape<double>& t, Id wfree) {
    Id y = t.matvec(wfree, 3, 4, t.constant(probe));
    return t.dot(y, t.constant({0.3, -0.9, 0.5}));
  });
  check_leaf_grad(rand_vec(rng, 3), [&](Tape<double>& t, Id x) {
    Id y = t.matvec_t(t.constant(w), 3, 4, x);
    return t.dot(y, t.constant(probe));
  });
  check_leaf_grad(rand_vec(rng, 4), [&](Tape<double>& t, Id x) {
    return scalarize(t, t.softmax(x));
  });
  check_leaf_grad(rand_vec(rng, 5), [&](Tape<double>& t, Id x) {
    return t.xent_loss(x, 2);
  });
}

TEST_CASE("shape violations are rejected") {
  Tape<double> tape;
  Id a = tape.constant({1, 2, 3});
  Id b = tape.constant({1, 2});
  CHECK_THROWS_AS(tape.add(a, b), ShapeError);
  CHECK_THROWS_AS(tape.mul(a, b), ShapeError);
  CHECK_THROWS_AS(tape.dot(a, b), ShapeError);
  CHECK_THROWS_AS(tape.matvec(a, 2, 2, b), ShapeError);
  CHECK_THROWS_AS(tape.slice(a, 1, 3), ShapeError);
  CHECK_THROWS_AS(tape.concat({}), ShapeError);
  CHECK_THROWS_AS(tape.add_n({}), ShapeError);
  CHECK_THROWS_AS(tape.xent_loss(a, 3), ShapeError);
  CHECK_THROWS_AS(tape.xent_loss(a, -1), ShapeError);
  CHECK_THROWS_AS(tape.backward(a), ShapeError);  // non-scalar loss
}

TEST_CASE("softmax worked example") {
  Tape<double> tape;
  auto p = tape.value(tape.softmax(tape.constant({2, 0, 0})));
  REQUIRE(p.size() == 3);
  CHECK(p[0] == Catch::Approx(0.7870).margin(5e-5));
  CHECK(p[1] == Catch::Approx(0.1065).margin(5e-5));
  CHECK(p[2] == Catch::Approx(0.1065).margin(5e-5));
  CHECK(p[0] + p[1] + p[2] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("softmax of one entry is exactly one") {
  Tape<double> tape;
  auto p = tape.value(tape.softmax(tape.constant({-3.7})));
  CHECK(p[0] == 1.0);
}

TEST_CASE("cross entropy of uniform logits is log of the class count") {
  Tape<double> tape;
  Id loss = tape.xent_loss(tape.constant(std::vector<double>(12, 0.0)), 4);
  CHECK(tape.value(loss)[0] == Catch::Approx(std::log(12.0)).epsilon(1e-12));
  CHECK(tape.value(loss)[0] == Catch::Approx(2.4849).margin(5e-5));
}

TEST_CASE("cross entropy gradient is probabilities minus one-hot") {
  auto rng = RngStream::from_seed(2).derive("xentg");
  std::vector<double> logits = rand_vec(rng, 6, 3.0);
  Tape<double> tape;
  Id in = tape.leaf(logits);
  Id loss = tape.xent_loss(in, 3);
  tape.backward(loss);
  auto probs = tape.cached_probs(loss);
  auto g = tape.grad(in);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    double want = probs[i] - (i == 3 ? 1.0 : 0.0);
    CHECK(g[i] == Catch::Approx(want).margin(1e-12));
  }
}

TEST_CASE("extreme logits stay finite in value and gradient") {
  Tape<double> tape;
  Id in = tape.leaf({1000.0, -1000.0, 0.0});
  Id loss = tape.xent_loss(in, 1);
  tape.backward(loss);
  CHECK(std::isfinite(tape.value(loss)[0]));
  for (double g : tape.grad(in)) CHECK(std::isfinite(g));

  Tape<double> t2;
  Id x = t2.leaf({-1000.0, 1000.0});
  Id y = t2.dot(t2.sigmoid(x), t2.constant({1.0, 1.0}));
  t2.backward(y);
  CHECK(std::isfinite(t2.value(y)[0]));
  for (double g : t2.grad(x)) CHECK(std::isfinite(g));
}

TEST_CASE("zero lstm weights give zero states") {
  auto rng = RngStream::from_seed(8).derive("lstmzero");
  nn::ParameterStore<double> store;
  auto lw = nn::make_lstm(store, "z", 3, 4, rng);
  for (auto* p : store.all()) std::fill(p->value.begin(), p->value.end(), 0.0);
  Tape<double> tape;
  std::vector<Id> inputs = {tape.constant(rand_vec(rng, 3)), tape.constant(rand_vec(rng, 3))};
  auto out = nn::lstm_run(tape, lw, inputs, false);
  for (Id h : out)
    for (double v : tape.value(h)) CHECK(v == 0.0);
}

TEST_CASE("single step forward and backward runs agree") {
  auto rng = RngStream::from_seed(9).derive("lstm1");
  nn::ParameterStore<double> store;
  auto lw = nn::make_lstm(store, "s", 3, 4, rng);
  Tape<double> tape;
  std::vector<Id> inputs = {tape.constant(rand_vec(rng, 3))};
  auto f = nn::lstm_run(tape, lw, inputs, false);
  auto b = nn::lstm_run(tape, lw, inputs, true);
  CHECK(tape.value(f[0]) == tape.value(b[0]));
}

TEST_CASE("backward run equals forward run on the reversed sequence") {
  auto rng = RngStream::from_seed(10).derive("lstmrev");
  nn::ParameterStore<double> store;
  auto lw = nn::make_lstm(store, "r", 3, 4, rng);
  std::vector<std::vector<double>> xs = {rand_vec(rng, 3), rand_vec(rng, 3), rand_vec(rng, 3)};

  Tape<double> ta;
  std::vector<Id> fwd_in;
  for (const auto& x : xs) fwd_in.push_back(ta.constant(x));
  auto fwd = nn::lstm_run(ta, lw, fwd_in, false);

  Tape<double> tb;
  std::vector<Id> rev_in;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) rev_in.push_back(tb.constant(*it));
  auto bwd = nn::lstm_run(tb, lw, rev_in, true);

  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(ta.value(fwd[i]) == tb.value(bwd[xs.size() - 1 - i]));
}

TEST_CASE("bidirectional states concatenate both directions") {
  auto rng = RngStream::from_seed(11).derive("bilstm");
  nn::ParameterStore<double> store;
  auto bw = nn::make_bilstm(store, "bi", 3, 2, rng);
  Tape<double> tape;
  std::vector<Id> inputs = {tape.constant(rand_vec(rng, 3)), tape.constant(rand_vec(rng, 3))};
  auto out = nn::bilstm_run(tape, bw, inputs);
  REQUIRE(out.states.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    auto s = tape.value(out.states[i]);
    REQUIRE(s.size() == 4);
    auto f = tape.value(out.fwd[i]);
    auto b = tape.value(out.bwd[i]);
    CHECK(std::vector<double>(s.begin(), s.begin() + 2) == f);
    CHECK(std::vector<double>(s.begin() + 2, s.end()) == b);
  }
}

TEST_CASE("three step lstm gradients pass the checker") {
  auto rng = RngStream::from_seed(12).derive("lstmfd");
  nn::ParameterStore<double> store;
  auto lw = nn::make_lstm(store, "g", 3, 4, rng);
  std::vector<std::vector<double>> xs = {rand_vec(rng, 3), rand_vec(rng, 3), rand_vec(rng, 3)};
  std::vector<double> probe = rand_vec(rng, 4);

  auto loss_fn = [&](bool compute_grad) {
    Tape<double> tape;
    std::vector<Id> inputs;
    for (const auto& x : xs) inputs.push_back(tape.constant(x));
    auto out = nn::lstm_run(tape, lw, inputs, false);
    Id loss = tape.dot(out.back(), tape.constant(probe));
    if (compute_grad) tape.backward(loss);
    return (double)tape.value(loss)[0];
  };
  auto report = nn::grad_check(store, loss_fn);
  INFO(report.to_string());
  CHECK(report.pass(1e-4));
  CHECK(report.checked == store.total_size());
}

TEST_CASE("attention weights reproduce the softmax example") {
  Tape<double> tape;
  // dot products with the query come out as (2, 0, 0)
  Id query = tape.constant({2.0, 0.0});
  std::vector<Id> keys = {tape.constant({1.0, 0.0}), tape.constant({0.0, 0.0}),
                          tape.constant({0.0, 5.0})};
  auto att = nn::dot_attention(tape, query, keys);
  auto alpha = tape.value(att.alpha);
  CHECK(alpha[0] == Catch::Approx(0.7870).margin(5e-5));
  CHECK(alpha[1] == Catch::Approx(0.1065).margin(5e-5));
  CHECK(alpha[2] == Catch::Approx(0.1065).margin(5e-5));
  auto ctx = tape.value(att.context);
  CHECK(ctx[0] == Catch::Approx(alpha[0]).epsilon(1e-12));
  CHECK(ctx[1] == Catch::Approx(5 * alpha[2]).epsilon(1e-12));
}

TEST_CASE("bilinear scoring with an identity matrix matches plain dot") {
  Tape<double> tape;
  Id query = tape.constant({0.3, -0.7});
  Id eye = tape.constant({1.0, 0.0, 0.0, 1.0});
  std::vector<Id> keys = {tape.constant({0.5, 0.1}), tape.constant({-0.2, 0.9})};
  auto bil = nn::bilinear_attention(tape, query, eye, 2, 2, keys);
  auto dot = nn::dot_attention(tape, query, keys);
  CHECK(tape.value(bil.alpha) == tape.value(dot.alpha));
}

TEST_CASE("zero bilinear matrix gives uniform weights") {
  auto rng = RngStream::from_seed(33).derive("attzero");
  for (int trial = 0; trial < 10; ++trial) {
    Tape<double> tape;
    int nk = 1 + (int)rng.uniform_int(6);
    Id query = tape.constant(rand_vec(rng, 3));
    Id w = tape.zeros(3 * 2);
    std::vector<Id> keys;
    for (int k = 0; k < nk; ++k) keys.push_back(tape.constant(rand_vec(rng, 2)));
    auto att = nn::bilinear_attention(tape, query, w, 3, 2, keys);
    for (double a : tape.value(att.alpha))
      CHECK(a == Catch::Approx(1.0 / nk).epsilon(1e-12));
  }
}

TEST_CASE("attention weights always sum to one") {
  auto rng = RngStream::from_seed(34).derive("attsum");
  for (int trial = 0; trial < 300; ++trial) {
    Tape<double> tape;
    int nk = 1 + (int)rng.uniform_int(8);
    Id query = tape.constant(rand_vec(rng, 4, 5.0));
    Id w = tape.constant(rand_vec(rng, 4 * 3, 5.0));
    std::vector<Id> keys;
    for (int k = 0; k < nk; ++k) keys.push_back(tape.constant(rand_vec(rng, 3, 5.0)));
    auto att = nn::bilinear_attention(tape, query, w, 4, 3, keys);
    double sum = 0;
    for (double a : tape.value(att.alpha)) sum += a;
    CHECK(std::fabs(sum - 1.0) < 1e-6);
  }
}

TEST_CASE("single key passes through bit exactly") {
  Tape<double> tape;
  std::vector<double> key = {0.123456789, -3.25, 7.0};
  Id q = tape.constant({9.0, -2.0, 0.5});
  Id w = tape.constant(std::vector<double>(9, 0.25));
  auto att = nn::bilinear_attention(tape, q, w, 3, 3, {tape.constant(key)});
  CHECK(tape.value(att.alpha) == std::vector<double>{1.0});
  CHECK(tape.value(att.context) == key);
  CHECK_THROWS_AS(nn::bilinear_attention(tape, q, w, 3, 3, {}), ShapeError);
}

TEST_CASE("attention gradients match finite differences") {
  auto rng = RngStream::from_seed(35).derive("attfd");
  std::vector<double> key1 = rand_vec(rng, 3), key2 = rand_vec(rng, 3);
  std::vector<double> query = rand_vec(rng, 4);
  std::vector<double> probe = rand_vec(rng, 3);
  check_leaf_grad(rand_vec(rng, 4 * 3), [&](Tape<double>& t, Id w) {
    auto att = nn::bilinear_attention(t, t.constant(query), w, 4, 3,
                                      {t.constant(key1), t.constant(key2)});
    return t.dot(att.context, t.constant(probe));
  });
}

TEST_CASE("sgd applies lr times gradient") {
  nn::ParameterStore<double> store;
  auto& p = store.add_vector("theta", 1);
  p.value[0] = 1.0;
  p.grad[0] = 2.0;
  store.sgd_step(0.05, 0.0);
  CHECK(p.value[0] == 0.9);
  CHECK(p.grad[0] == 0.0);  // gradients cleared by the step
}

TEST_CASE("zero gradients are a fixed point") {
  auto rng = RngStream::from_seed(40).derive("sgdzero");
  nn::ParameterStore<double> store;
  auto& m = store.add_matrix("m", 3, 3, rng);
  auto before = m.value;
  store.sgd_step(0.5, 5.0);
  CHECK(m.value == before);
}

TEST_CASE("global norm clipping rescales the update") {
  nn::ParameterStore<double> store;
  auto& p = store.add_vector("p", 2);
  p.value = {0.0, 0.0};
  p.grad = {30.0, 40.0};  // norm 50
  store.sgd_step(1.0, 5.0);  // scale 5/50 = 0.1
  CHECK(p.value[0] == Catch::Approx(-3.0).epsilon(1e-12));
  CHECK(p.value[1] == Catch::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("clipping is inactive below the threshold") {
  nn::ParameterStore<double> store;
  auto& p = store.add_vector("p", 2);
  p.grad = {3.0, 4.0};  // norm 5 < 50
  store.sgd_step(1.0, 50.0);
  CHECK(p.value[0] == -3.0);
  CHECK(p.value[1] == -4.0);
}

TEST_CASE("non-finite gradients abort with the parameter named") {
  nn::ParameterStore<double> store;
  store.add_vector("fine", 2);
  auto& bad = store.add_vector("exploded", 1);
  bad.grad[0] = std::nan("");
  try {
    store.sgd_step(0.1, 0.0);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("exploded") != std::string::npos);
  }
}

TEST_CASE("gradient checker confirms a correct quadratic") {
  nn::ParameterStore<double> store;
  auto& theta = store.add_vector("theta", 1);
  theta.value[0] = 3.0;
  auto loss_fn = [&](bool compute_grad) {
    double v = theta.value[0];
    if (compute_grad) theta.grad[0] += 2.0 * v;
    return v * v;
  };
  auto report = nn::grad_check(store, loss_fn);
  CHECK(report.pass(1e-4));
  CHECK(report.worst.numeric == Catch::Approx(6.0).margin(1e-8));
  CHECK(report.worst.analytic == 6.0);
  CHECK(report.checked == 1);
}

TEST_CASE("gradient checker flags a doubled gradient") {
  nn::ParameterStore<double> store;
  auto& theta = store.add_vector("theta", 1);
  theta.value[0] = 3.0;
  auto loss_fn = [&](bool compute_grad) {
    double v = theta.value[0];
    if (compute_grad) theta.grad[0] += 4.0 * v;  // wrong by a factor of two
    return v * v;
  };
  auto report = nn::grad_check(store, loss_fn);
  CHECK_FALSE(report.pass(1e-4));
  CHECK(report.worst.param == "theta");

  // skipping the broken parameter leaves nothing to fail
  auto skipped = nn::grad_check(store, loss_fn, 1e-5, 1e-4,
                                [](const std::string& name) { return name == "theta"; });
  CHECK(skipped.checked == 0);
}

TEST_CASE("initialization draws a per name stream") {
  auto rng_a = RngStream::from_seed(77);
  nn::ParameterStore<double> a;
  a.add_matrix("first", 2, 3, rng_a);
  a.add_matrix("second", 3, 3, rng_a);

  auto rng_b = RngStream::from_seed(77);
  nn::ParameterStore<double> b;
  b.add_matrix("second", 3, 3, rng_b);  // creation order reversed
  b.add_matrix("first", 2, 3, rng_b);

  CHECK(a.get("first").value == b.get("first").value);
  CHECK(a.get("second").value == b.get("second").value);

  double bound = std::sqrt(6.0 / (2 + 3));
  for (double v : a.get("first").value) {
    CHECK(v >= -bound);
    CHECK(v <= bound);
  }
}

TEST_CASE("lstm bias starts with the forget block at one") {
  nn::ParameterStore<double> store;
  auto& b = store.add_lstm_bias("b", 3);
  REQUIRE(b.value.size() == 12);
  for (int i = 0; i < 12; ++i)
    CHECK(b.value[(std::size_t)i] == ((i >= 3 && i < 6) ? 1.0 : 0.0));
}

TEST_CASE("duplicate and malformed parameters are rejected") {
  auto rng = RngStream::from_seed(1);
  nn::ParameterStore<double> store;
  store.add_vector("v", 2);
  CHECK_THROWS_AS(store.add_vector("v", 2), ValidationError);
  CHECK_THROWS_AS(store.add_vector("w", 0), ShapeError);
  CHECK_THROWS_AS(store.get("missing"), LookupError);
  CHECK_THROWS_AS(store.add_matrix("m", -1, 2, rng), ShapeError);
}

template <class T>
static void fill_params(nn::ParameterStore<T>& store, std::uint64_t seed) {
  auto rng = RngStream::from_seed(seed).derive("fill");
  for (auto* p : store.all())
    for (auto& v : p->value) v = (T)rng.uniform(-2.0, 2.0);
}

TEST_CASE("checkpoints round trip bitwise") {
  auto rng = RngStream::from_seed(50);
  nn::ParameterStore<double> a;
  a.add_matrix("w", 3, 4, rng);
  a.add_vector("b", 3);
  fill_params(a, 123);
  std::map<std::string, std::string> state = {{"epoch", "7"}, {"rng", "deadbeef"}};
  std::string text = a.save_checkpoint(0xabcdef0011223344ull, state);

  nn::ParameterStore<double> b;
  b.add_matrix("w", 3, 4, rng);
  b.add_vector("b", 3);
  auto loaded_state = b.load_checkpoint(text, 0xabcdef0011223344ull);
  CHECK(loaded_state == state);
  CHECK(b.get("w").value == a.get("w").value);
  CHECK(b.get("b").value == a.get("b").value);
  // saving again reproduces the identical file
  CHECK(b.save_checkpoint(0xabcdef0011223344ull, loaded_state) == text);
}

TEST_CASE("float checkpoints also round trip bitwise") {
  auto rng = RngStream::from_seed(51);
  nn::ParameterStore<float> a;
  a.add_matrix("w", 2, 5, rng);
  fill_params(a, 9);
  std::string text = a.save_checkpoint(1, {});
  nn::ParameterStore<float> b;
  b.add_matrix("w", 2, 5, rng);
  b.load_checkpoint(text, 1);
  CHECK(b.get("w").value == a.get("w").value);
}

TEST_CASE("checkpoint loading rejects mismatches") {
  nn::ParameterStore<double> a;
  a.add_vector("v", 2);
  std::string text = a.save_checkpoint(42, {{"epoch", "1"}});

  nn::ParameterStore<double> same;
  same.add_vector("v", 2);
  CHECK_THROWS_AS(same.load_checkpoint(text, 43), ConfigError);  // config hash
  CHECK_THROWS_AS(same.load_checkpoint("garbage\n", 42), FormatError);

  nn::ParameterStore<double> shape;
  shape.add_vector("v", 3);
  CHECK_THROWS_AS(shape.load_checkpoint(text, 42), FormatError);

  nn::ParameterStore<double> missing;
  missing.add_vector("other", 2);
  CHECK_THROWS_AS(missing.load_checkpoint(text, 42), FormatError);

  nn::ParameterStore<double> extra;
  extra.add_vector("v", 2);
  extra.add_vector("more", 1);
  CHECK_THROWS_AS(extra.load_checkpoint(text, 42), FormatError);  // count mismatch

  std::string no_end = text.substr(0, text.size() - 4);
  CHECK_THROWS_AS(same.load_checkpoint(no_end, 42), FormatError);
}

TEST_CASE("parameter rows feed the tape as constants") {
  auto rng = RngStream::from_seed(60);
  nn::ParameterStore<double> store;
  auto& table = store.add_matrix("table", 3, 2, rng);
  Tape<double> tape;
  Id r1 = tape.row(table, 1);
  CHECK(tape.value(r1) == std::vector<double>(table.value.begin() + 2, table.value.begin() + 4));
  CHECK_THROWS_AS(tape.row(table, 3), ShapeError);
  CHECK_THROWS_AS(tape.row(table, -1), ShapeError);

  // params accumulate gradients; rows do not touch the store
  Id p = tape.param(table);
  Id loss = tape.dot(tape.slice(p, 0, 2), r1);
  tape.backward(loss);
  double gsum = 0;
  for (double g : table.grad) gsum += std::fabs(g);
  CHECK(gsum > 0);
}
