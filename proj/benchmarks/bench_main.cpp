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

#include <benchmark/benchmark.h>

#include "mvawe/evaluation.hpp"
#include "mvawe/losses.hpp"
#include "mvawe/model.hpp"

using namespace mvawe;

namespace {

AcousticSegment random_segment(Rng& rng, size_t frames) {
  AcousticSegment seg;
  seg.frames = Tensor({frames, kFeatureDim});
  for (double& v : seg.frames.data) v = rng.normal();
  seg.source_id = "bench";
  return seg;
}

void BM_LstmStep(benchmark::State& state) {
  size_t H = static_cast<size_t>(state.range(0));
  Rng rng(1);
  Tensor w = Tensor::uniform_fan_in({4 * H, kFeatureDim + H}, kFeatureDim + H, rng);
  Tensor b({4 * H});
  Tensor x({kFeatureDim}), h({H}), c({H});
  for (double& v : x.data) v = rng.normal();
  for (auto _ : state) {
    auto [h1, c1] = lstm_cell(x, h, c, w, b);
    benchmark::DoNotOptimize(h1.data.data());
  }
}
BENCHMARK(BM_LstmStep)->Arg(16)->Arg(64)->Arg(256);

void BM_EncodeAcoustic(benchmark::State& state) {
  size_t H = static_cast<size_t>(state.range(0));
  ModelConfig cfg;
  cfg.layers = 1;
  cfg.hidden = H;
  ParamSet params = init_params(cfg, 2);
  Rng rng(3);
  AcousticSegment seg = random_segment(rng, 40);
  for (auto _ : state) {
    Tensor e = encode_acoustic(seg, params, cfg);
    benchmark::DoNotOptimize(e.data.data());
  }
}
BENCHMARK(BM_EncodeAcoustic)->Arg(16)->Arg(64);

void BM_TripletGradient(benchmark::State& state) {
  size_t H = static_cast<size_t>(state.range(0));
  ModelConfig cfg;
  cfg.layers = 1;
  cfg.hidden = H;
  ParamSet params = init_params(cfg, 4);
  Rng rng(5);
  AcousticSegment xp = random_segment(rng, 20), xn = random_segment(rng, 20);
  TextLabel cp = one_hot_encode("window"), cn = one_hot_encode("glass");
  for (auto _ : state) {
    Tape t;
    TapeParams tp = bind_params(t, params, cfg, true);
    Var fxp = encode_on_tape(t, tp, "f", xp.frames, Mode::kEval, nullptr).embedding;
    Var fxn = encode_on_tape(t, tp, "f", xn.frames, Mode::kEval, nullptr).embedding;
    Var gcp = encode_on_tape(t, tp, "g", cp.onehot, Mode::kEval, nullptr).embedding;
    Var gcn = encode_on_tape(t, tp, "g", cn.onehot, Mode::kEval, nullptr).embedding;
    Var loss = multiview_triplet_pair_t(t, fxp, gcp, gcn, fxn, 0.5);
    t.backward(loss);
    benchmark::DoNotOptimize(t.grad(tp.at("f.l0.fwd.W")).data());
  }
}
BENCHMARK(BM_TripletGradient)->Arg(16)->Arg(32);

void BM_AveragePrecision(benchmark::State& state) {
  size_t n = static_cast<size_t>(state.range(0));
  Rng rng(6);
  std::vector<double> scores(n);
  std::vector<uint8_t> match(n);
  for (size_t i = 0; i < n; ++i) {
    scores[i] = rng.normal();
    match[i] = rng.below(2);
  }
  match[0] = 1;
  match[1] = 0;
  for (auto _ : state) {
    double ap = average_precision(scores, match);
    benchmark::DoNotOptimize(ap);
  }
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(100000)->Arg(1000000);

void BM_MelFilterbank(benchmark::State& state) {
  const int sr = 16000;
  size_t n = static_cast<size_t>(state.range(0));
  Rng rng(7);
  std::vector<double> wave(n);
  for (double& v : wave) v = rng.uniform(-0.9, 0.9);
  for (auto _ : state) {
    AcousticSegment seg = mel_filterbank(wave, sr);
    benchmark::DoNotOptimize(seg.frames.data.data());
  }
}
BENCHMARK(BM_MelFilterbank)->Arg(8000)->Arg(16000)->Arg(160000);

}  // namespace

BENCHMARK_MAIN();
