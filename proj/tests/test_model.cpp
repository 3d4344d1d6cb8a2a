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

#include <filesystem>
#include <fstream>

#include "mvawe/model.hpp"

using namespace mvawe;

namespace {

AcousticSegment rand_segment(Rng& rng, size_t frames) {
  AcousticSegment seg;
  seg.frames = Tensor({frames, kFeatureDim});
  for (double& v : seg.frames.data) v = rng.normal();
  seg.source_id = "t";
  return seg;
}

ParamSet zeroed(const ParamSet& params) {
  ParamSet out = params;
  for (auto& [name, t] : out) std::fill(t.data.begin(), t.data.end(), 0.0);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("fresh parameters have the documented shapes") {
  ModelConfig cfg;
  cfg.layers = 2;
  cfg.hidden = 8;
  ParamSet p = init_params(cfg, 1);
  size_t H = 8, K = cfg.num_classes();
  CHECK(p.at("f.l0.fwd.W").shape == std::vector<size_t>{4 * H, kFeatureDim + H});
  CHECK(p.at("f.l1.fwd.W").shape == std::vector<size_t>{4 * H, 2 * H + H});
  CHECK(p.at("g.l0.bwd.W").shape == std::vector<size_t>{4 * H, kAlphabetSize + H});
  CHECK(p.at("h.l0.uni.W").shape == std::vector<size_t>{4 * H, 2 * H + K + H});
  CHECK(p.at("h.l1.uni.W").shape == std::vector<size_t>{4 * H, H + H});
  CHECK(p.at("proj.W1").shape == std::vector<size_t>{cfg.proj_hidden, H});
  CHECK(p.at("proj.W2").shape == std::vector<size_t>{K, cfg.proj_hidden});
  // forget-gate bias block is +1, the rest 0
  const Tensor& b = p.at("f.l0.fwd.b");
  for (size_t i = 0; i < H; ++i) CHECK(b.data[i] == 0.0);
  for (size_t i = H; i < 2 * H; ++i) CHECK(b.data[i] == 1.0);
  for (size_t i = 2 * H; i < 4 * H; ++i) CHECK(b.data[i] == 0.0);
}

TEST_CASE("parameter init is deterministic in the seed") {
  ModelConfig cfg;
  cfg.hidden = 4;
  ParamSet a = init_params(cfg, 7);
  ParamSet b = init_params(cfg, 7);
  ParamSet c = init_params(cfg, 8);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("embeddings have dimension 2H and are eval-deterministic") {
  ModelConfig cfg;
  cfg.layers = 2;
  cfg.hidden = 6;
  ParamSet p = init_params(cfg, 3);
  Rng rng(9);
  AcousticSegment seg = rand_segment(rng, 7);
  Tensor e1 = encode_acoustic(seg, p, cfg);
  Tensor e2 = encode_acoustic(seg, p, cfg);
  CHECK(e1.shape == std::vector<size_t>{2 * cfg.hidden});
  CHECK(e1.data == e2.data);

  Tensor g = encode_text(one_hot_encode("word"), p, cfg);
  CHECK(g.shape == std::vector<size_t>{2 * cfg.hidden});
}

TEST_CASE("all-zero parameters give zero embeddings and uniform decoding") {
  ModelConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 5;
  ParamSet p = zeroed(init_params(cfg, 1));
  Rng rng(2);
  AcousticSegment seg = rand_segment(rng, 4);
  Tensor e = encode_acoustic(seg, p, cfg);
  for (double v : e.data) CHECK(v == 0.0);

  DecodedSequence dec = decode_embedding(&seg, nullptr, p, cfg, 3,
                                         /*teacher_target=*/nullptr);
  REQUIRE(dec.probs.rows() >= 1);
  for (size_t r = 0; r < dec.probs.rows(); ++r)
    for (size_t c = 0; c < dec.probs.cols(); ++c)
      CHECK(dec.probs.at(r, c) ==
            doctest::Approx(1.0 / cfg.num_classes()).epsilon(1e-12));
  // uniform rows tie-break to class 0 = 'a'
  for (char ch : dec.argmax_text) CHECK(ch == 'a');
}

TEST_CASE("dropout exemption: text encoder layer-0 inputs are never dropped") {
  ModelConfig cfg;
  cfg.layers = 1;  // only layer 0 exists, so g must be dropout-free
  cfg.hidden = 4;
  cfg.dropout = 0.4;
  ParamSet p = init_params(cfg, 5);
  TextLabel label = one_hot_encode("abcde");
  Rng drop1(123), drop2(456);
  Tensor train1 = encode_text(label, p, cfg, Mode::kTrain, &drop1);
  Tensor train2 = encode_text(label, p, cfg, Mode::kTrain, &drop2);
  Tensor eval = encode_text(label, p, cfg);
  CHECK(train1.data == eval.data);
  CHECK(train2.data == eval.data);

  // the acoustic encoder's layer 0 IS dropped in train mode
  Rng rng(6);
  AcousticSegment seg = rand_segment(rng, 6);
  Rng drop3(123);
  Tensor f_train = encode_acoustic(seg, p, cfg, Mode::kTrain, &drop3);
  Tensor f_eval = encode_acoustic(seg, p, cfg);
  CHECK(f_train.data != f_eval.data);
}

TEST_CASE("teacher-forced decoding emits target length plus end-of-word") {
  ModelConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 4;
  ParamSet p = init_params(cfg, 11);
  Rng rng(8);
  AcousticSegment seg = rand_segment(rng, 5);
  TextLabel target = one_hot_encode("dog");
  // 3 teacher-forced characters + 1 end-of-word step
  DecodedSequence dec = decode_embedding(&seg, nullptr, p, cfg,
                                         target.length() + 1, &target);
  CHECK(dec.probs.rows() == 4);  // 3 characters + end-of-word step
  CHECK(dec.probs.cols() == 27);
  for (size_t r = 0; r < dec.probs.rows(); ++r) {
    double sum = 0;
    for (size_t c = 0; c < dec.probs.cols(); ++c) sum += dec.probs.at(r, c);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("free-running decode never exceeds the cap") {
  ModelConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 4;
  ParamSet p = init_params(cfg, 13);
  Rng rng(10);
  AcousticSegment seg = rand_segment(rng, 5);
  DecodedSequence dec = decode_embedding(&seg, nullptr, p, cfg, 6);
  CHECK(dec.probs.rows() <= 6);
  CHECK(dec.argmax_text.size() <= 6);
}

TEST_CASE("strict-26 configuration decodes without an end-of-word class") {
  ModelConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 4;
  cfg.eos_enabled = false;
  CHECK(cfg.num_classes() == 26);
  ParamSet p = init_params(cfg, 17);
  Rng rng(12);
  AcousticSegment seg = rand_segment(rng, 5);
  DecodedSequence dec = decode_embedding(&seg, nullptr, p, cfg, 4);
  CHECK(dec.probs.rows() == 4);  // exact length, no early stop possible
  CHECK(dec.probs.cols() == 26);
  CHECK(dec.argmax_text.size() == 4);
}

TEST_CASE("checkpoints round-trip bit-exactly with their sidecar") {
  ModelConfig cfg;
  cfg.layers = 2;
  cfg.hidden = 5;
  cfg.eos_enabled = false;
  ParamSet p = init_params(cfg, 23);
  std::string path =
      (std::filesystem::temp_directory_path() / "mvawe_ckpt_test.mvawe").string();
  save_checkpoint(path, p);
  cfg.save_sidecar(path);
  ParamSet q = load_checkpoint(path);
  REQUIRE(q.size() == p.size());
  for (const auto& [name, t] : p) {
    REQUIRE(q.count(name) == 1);
    CHECK(q.at(name).shape == t.shape);
    CHECK(q.at(name).data == t.data);
  }
  ModelConfig back = ModelConfig::load_sidecar(path);
  CHECK(back.layers == cfg.layers);
  CHECK(back.hidden == cfg.hidden);
  CHECK(back.eos_enabled == cfg.eos_enabled);
  CHECK(back.dropout == cfg.dropout);
}

TEST_CASE("loading garbage is a data error") {
  std::string path =
      (std::filesystem::temp_directory_path() / "mvawe_ckpt_garbage").string();
  std::ofstream(path, std::ios::binary) << "not a checkpoint at all";
  CHECK_THROWS_AS(load_checkpoint(path), DataError);
  CHECK_THROWS_AS(load_checkpoint(path + "_nonexistent"), DataError);
}

TEST_CASE("invalid model configs are rejected") {
  ModelConfig cfg;
  cfg.layers = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ModelConfig{};
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ModelConfig{};
  cfg.hidden = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_SUITE_END();
