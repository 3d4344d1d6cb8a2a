// Copyright 2026 The mvawe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include <doctest.h>

#include "mvawe/gradcheck.hpp"
#include "mvawe/lstm.hpp"

using namespace mvawe;

namespace {

// Independent scalar-loop recomputation of one LSTM step: no matrices, no
// tape, per-index arithmetic only.
void oracle_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                 const std::vector<double>& c_prev, const Tensor& w,
                 const Tensor& b, std::vector<double>* h_out,
                 std::vector<double>* c_out) {
  size_t H = h_prev.size();
  size_t in = x.size();
  std::vector<double> z(4 * H);
  for (size_t r = 0; r < 4 * H; ++r) {
    double acc = b.data[r];
    for (size_t k = 0; k < in; ++k) acc += w.at(r, k) * x[k];
    for (size_t k = 0; k < H; ++k) acc += w.at(r, in + k) * h_prev[k];
    z[r] = acc;
  }
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  h_out->resize(H);
  c_out->resize(H);
  for (size_t j = 0; j < H; ++j) {
    double i = sig(z[j]);
    double f = sig(z[H + j]);
    double g = std::tanh(z[2 * H + j]);
    double o = sig(z[3 * H + j]);
    (*c_out)[j] = f * c_prev[j] + i * g;
    (*h_out)[j] = o * std::tanh((*c_out)[j]);
  }
}

}  // namespace

TEST_SUITE_BEGIN("lstm");

TEST_CASE("cell matches the scalar-loop oracle over random steps") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    size_t H = 1 + rng.below(5), in = 1 + rng.below(6);
    Tensor w({4 * H, in + H});
    Tensor b({4 * H});
    for (double& v : w.data) v = rng.uniform(-1.0, 1.0);
    for (double& v : b.data) v = rng.uniform(-1.0, 1.0);
    std::vector<double> x(in), h0(H), c0(H);
    for (double& v : x) v = rng.normal();
    for (double& v : h0) v = rng.normal();
    for (double& v : c0) v = rng.normal();

    auto [h1, c1] = lstm_cell(Tensor::vec(x), Tensor::vec(h0), Tensor::vec(c0), w, b);
    std::vector<double> oh, oc;
    oracle_step(x, h0, c0, w, b, &oh, &oc);
    for (size_t j = 0; j < H; ++j) {
      CHECK(h1.data[j] == doctest::Approx(oh[j]).epsilon(1e-14));
      CHECK(c1.data[j] == doctest::Approx(oc[j]).epsilon(1e-14));
    }
  }
}

TEST_CASE("multi-step chain gradients pass a finite-difference check") {
  const size_t H = 3, in = 2, T = 4;
  Rng rng(4242);
  ParamSet params;
  params["W"] = Tensor::uniform_fan_in({4 * H, in + H}, in + H, rng);
  params["b"] = Tensor({4 * H});
  for (double& v : params["b"].data) v = rng.uniform(-0.5, 0.5);
  std::vector<std::vector<double>> inputs(T, std::vector<double>(in));
  for (auto& row : inputs)
    for (double& v : row) v = rng.normal();

  LossFn fn = [&](const ParamSet& p, ParamSet* grads) {
    Tape t;
    Var w = t.leaf(p.at("W"), grads != nullptr);
    Var b = t.leaf(p.at("b"), grads != nullptr);
    LstmState s{t.constant(Tensor({H})), t.constant(Tensor({H}))};
    for (size_t step = 0; step < T; ++step)
      s = lstm_cell(t, t.constant(Tensor::vec(inputs[step])), s, w, b);
    Var loss = t.add(t.sum(s.h), t.sum(t.mul(s.c, s.c)));
    double v = t.scalar_value(loss);
    if (grads) {
      t.backward(loss);
      Tensor gw = p.at("W");
      Tensor gb = p.at("b");
      std::copy(t.grad(w).begin(), t.grad(w).end(), gw.data.begin());
      std::copy(t.grad(b).begin(), t.grad(b).end(), gb.data.begin());
      (*grads)["W"] = std::move(gw);
      (*grads)["b"] = std::move(gb);
    }
    return v;
  };
  CHECK(gradient_check(fn, params, 1e-5) < 1e-7);
}

TEST_CASE("mismatched weight shape is a configuration error") {
  Tensor w({8, 5});  // 4H=8 -> H=2, so in+H must be 5 -> in=3
  Tensor b({8});
  CHECK_THROWS_AS(lstm_cell(Tensor::vec({1.0}), Tensor::vec({0.0, 0.0}),
                            Tensor::vec({0.0, 0.0}), w, b),
                  ConfigError);
}

TEST_SUITE_END();
