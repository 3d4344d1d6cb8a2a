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

#include "mvawe/gradcheck.hpp"
#include "mvawe/synth.hpp"
#include "mvawe/train.hpp"

using namespace mvawe;
namespace fs = std::filesystem;

namespace {

// Small synthetic corpus shared by the training tests, generated once.
struct Corpus {
  std::string dir;
  Dataset train, dev;
  Corpus()
      : dir((fs::temp_directory_path() / "mvawe_train_tests").string()),
        train((prepare(dir), Dataset::load(dir, "train"))),
        dev(Dataset::load(dir, "dev")) {}

  static void prepare(const std::string& dir) {
    if (fs::exists(dir + "/train.manifest.json")) return;
    fs::create_directories(dir);
    SynthConfig cfg;
    cfg.vocab_size = 6;
    cfg.samples_per_word = 4;
    cfg.dev_samples_per_word = 2;
    cfg.test_samples_per_word = 2;
    cfg.oov_fraction = 0.0;
    cfg.word_len_min = 2;
    cfg.word_len_max = 4;
    cfg.duration_mean = 3.0;
    cfg.seed = 11;
    generate_synthetic_corpus(cfg, dir);
  }
};

const Corpus& corpus() {
  static Corpus c;
  return c;
}

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.model.layers = 1;
  cfg.model.hidden = 6;
  cfg.loss.batch_size = 6;
  cfg.epochs = 2;
  cfg.seed = 3;
  cfg.workers = 2;
  return cfg;
}

TripletBatch first_batch(const Dataset& train_set, size_t n, uint64_t seed) {
  auto schedule = epoch_schedule(train_set.size(), n, seed);
  return sample_batch(train_set, schedule[0], seed + 1);
}

double max_abs_grad_matching(const ParamSet& grads, const std::string& prefix) {
  double mx = 0.0;
  for (const auto& [name, g] : grads)
    if (name.rfind(prefix, 0) == 0)
      for (double v : g.data) mx = std::max(mx, std::abs(v));
  return mx;
}

}  // namespace

TEST_SUITE_BEGIN("train");

TEST_CASE("alpha zero produces exactly zero decoder and projection gradients") {
  TrainConfig cfg = tiny_config();
  cfg.loss.alpha = 0.0;
  ParamSet params = init_params(cfg.model, cfg.seed);
  for (uint64_t s = 0; s < 5; ++s) {
    TripletBatch batch = first_batch(corpus().train, 6, s);
    BatchGradResult r = compute_batch_gradients(corpus().train, batch, params, cfg, s);
    CHECK(max_abs_grad_matching(r.grads, "h.") == 0.0);
    CHECK(max_abs_grad_matching(r.grads, "proj.") == 0.0);
    // encoder gradients must still flow
    CHECK(max_abs_grad_matching(r.grads, "f.") > 0.0);
    CHECK(max_abs_grad_matching(r.grads, "g.") > 0.0);
  }
}

TEST_CASE("with alpha positive the decoder gradients are live") {
  TrainConfig cfg = tiny_config();
  cfg.loss.alpha = 0.1;
  ParamSet params = init_params(cfg.model, cfg.seed);
  TripletBatch batch = first_batch(corpus().train, 6, 0);
  BatchGradResult r = compute_batch_gradients(corpus().train, batch, params, cfg, 0);
  CHECK(max_abs_grad_matching(r.grads, "h.") > 0.0);
  CHECK(max_abs_grad_matching(r.grads, "proj.") > 0.0);
  CHECK(r.loss == doctest::Approx(r.triplet + 0.1 * r.decoding).epsilon(1e-12));
}

TEST_CASE("batch gradients do not depend on the worker count") {
  TrainConfig cfg = tiny_config();
  ParamSet params = init_params(cfg.model, cfg.seed);
  TripletBatch batch = first_batch(corpus().train, 6, 7);
  cfg.workers = 1;
  BatchGradResult a = compute_batch_gradients(corpus().train, batch, params, cfg, 9);
  cfg.workers = 4;
  BatchGradResult b = compute_batch_gradients(corpus().train, batch, params, cfg, 9);
  CHECK(a.loss == b.loss);
  REQUIRE(a.grads.size() == b.grads.size());
  for (const auto& [name, g] : a.grads) CHECK(g.data == b.grads.at(name).data);
}

TEST_CASE("the full training objective passes a gradient check") {
  TrainConfig cfg;
  cfg.model.layers = 1;
  cfg.model.hidden = 3;
  cfg.loss.alpha = 0.1;
  cfg.loss.batch_size = 2;
  cfg.workers = 1;
  ParamSet params = init_params(cfg.model, 31);
  TripletBatch batch = first_batch(corpus().train, 2, 3);
  batch.items.resize(2);

  LossFn fn = [&](const ParamSet& p, ParamSet* grads) {
    // dropout off for determinism: gradient_check requires a pure function
    TrainConfig c = cfg;
    c.model.dropout = 0.0;
    BatchGradResult r = compute_batch_gradients(corpus().train, batch, p, c, 1);
    if (grads) *grads = r.grads;
    return r.loss;
  };
  CHECK(gradient_check(fn, params, 1e-5) < 1e-4);
}

TEST_CASE("training is bit-deterministic in the seed") {
  TrainConfig cfg = tiny_config();
  TrainResult a = train(corpus().train, corpus().dev, cfg);
  TrainResult b = train(corpus().train, corpus().dev, cfg);
  CHECK(a.best_params == b.best_params);
  CHECK(a.report.to_json(false) == b.report.to_json(false));
  CHECK(a.report.best_epoch == b.report.best_epoch);
}

TEST_CASE("best epoch is the argmax of dev acoustic AP, first max wins") {
  TrainConfig cfg = tiny_config();
  cfg.epochs = 3;
  TrainResult r = train(corpus().train, corpus().dev, cfg);
  REQUIRE(r.report.epochs.size() == 3);
  size_t argmax = 0;
  for (size_t e = 1; e < 3; ++e)
    if (r.report.epochs[e].dev_acoustic_ap >
        r.report.epochs[argmax].dev_acoustic_ap)
      argmax = e;
  CHECK(r.report.best_epoch == argmax);
  CHECK(r.best_dev_acoustic_ap ==
        r.report.epochs[r.report.best_epoch].dev_acoustic_ap);
}

TEST_CASE("train loss drops over a short run") {
  TrainConfig cfg = tiny_config();
  cfg.epochs = 6;
  cfg.adam.lr = 5e-3;  // aggressive rate so 6 epochs show movement
  TrainResult r = train(corpus().train, corpus().dev, cfg);
  CHECK(r.report.epochs.back().train_loss < r.report.epochs.front().train_loss);
}

TEST_CASE("config JSON round-trips") {
  TrainConfig cfg = tiny_config();
  cfg.loss.margin = 0.37;
  cfg.teacher_forcing = true;
  TrainConfig back = TrainConfig::from_json(cfg.to_json());
  CHECK(back.model.layers == cfg.model.layers);
  CHECK(back.model.hidden == cfg.model.hidden);
  CHECK(back.loss.margin == cfg.loss.margin);
  CHECK(back.loss.batch_size == cfg.loss.batch_size);
  CHECK(back.epochs == cfg.epochs);
  CHECK(back.seed == cfg.seed);
  CHECK(back.teacher_forcing == cfg.teacher_forcing);
}

TEST_CASE("coordinate sweep varies one parameter at a time and sorts by AP") {
  TrainConfig base = tiny_config();
  base.epochs = 1;
  SweepGrid grid;
  grid.alpha = {0.0, 0.1};
  grid.margin = {0.3};
  std::vector<SweepRow> rows = sweep(grid, base, corpus().train, corpus().dev);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK_FALSE(r.failed);
  for (size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i - 1].dev_acoustic_ap >= rows[i].dev_acoustic_ap);
}

TEST_SUITE_END();
