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

#include "mvawe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mvawe/dataset.hpp"

namespace mvawe {

using nlohmann::json;

void SynthConfig::validate() const {
  if (vocab_size < 2) throw ConfigError("synth: vocab_size must be >= 2");
  if (samples_per_word < 2) throw ConfigError("synth: samples_per_word must be >= 2");
  if (duration_std < 0 || jitter_std < 0)
    throw ConfigError("synth: standard deviations must be >= 0");
  if (oov_fraction < 0.0 || oov_fraction >= 1.0)
    throw ConfigError("synth: oov_fraction must be in [0, 1)");
  if (warp_lo <= 0.0 || warp_hi < warp_lo)
    throw ConfigError("synth: bad warp range");
  if (word_len_min < 1 || word_len_max < word_len_min)
    throw ConfigError("synth: bad word length range");
}

SynthConfig synth_config_from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("synth: cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("synth: bad config JSON: " + std::string(e.what()));
  }
  static const std::set<std::string> known = {
      "vocab_size",   "samples_per_word", "dev_samples_per_word",
      "test_samples_per_word", "oov_fraction", "duration_mean",
      "duration_std", "jitter_std", "warp_lo", "warp_hi",
      "word_len_min", "word_len_max", "seed"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw ConfigError("synth: unknown config key \"" + key + "\"");
  SynthConfig cfg;
  cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
  cfg.samples_per_word = j.value("samples_per_word", cfg.samples_per_word);
  cfg.dev_samples_per_word = j.value("dev_samples_per_word", cfg.dev_samples_per_word);
  cfg.test_samples_per_word = j.value("test_samples_per_word", cfg.test_samples_per_word);
  cfg.oov_fraction = j.value("oov_fraction", cfg.oov_fraction);
  cfg.duration_mean = j.value("duration_mean", cfg.duration_mean);
  cfg.duration_std = j.value("duration_std", cfg.duration_std);
  cfg.jitter_std = j.value("jitter_std", cfg.jitter_std);
  cfg.warp_lo = j.value("warp_lo", cfg.warp_lo);
  cfg.warp_hi = j.value("warp_hi", cfg.warp_hi);
  cfg.word_len_min = j.value("word_len_min", cfg.word_len_min);
  cfg.word_len_max = j.value("word_len_max", cfg.word_len_max);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.validate();
  return cfg;
}

namespace {

std::vector<std::string> make_vocabulary(const SynthConfig& cfg, Rng& rng) {
  std::set<std::string> seen;
  std::vector<std::string> vocab;
  while (vocab.size() < cfg.vocab_size) {
    size_t len = cfg.word_len_min +
                 rng.below(cfg.word_len_max - cfg.word_len_min + 1);
    std::string w;
    for (size_t i = 0; i < len; ++i)
      w += static_cast<char>('a' + rng.below(26));
    if (seen.insert(w).second) vocab.push_back(std::move(w));
  }
  return vocab;
}

AcousticSegment make_segment(const std::string& word, const Tensor& prototypes,
                             const SynthConfig& cfg, uint64_t seed,
                             const std::string& source_id) {
  Rng rng(seed);
  double warp = rng.uniform(cfg.warp_lo, cfg.warp_hi);
  std::vector<size_t> durations;
  size_t total = 0;
  for (char ch : word) {
    (void)ch;
    double d = (cfg.duration_mean + cfg.duration_std * rng.normal()) * warp;
    size_t frames = static_cast<size_t>(std::max(1.0, std::round(d)));
    durations.push_back(frames);
    total += frames;
  }
  AcousticSegment seg;
  seg.source_id = source_id;
  seg.frames = Tensor({total, kFeatureDim});
  size_t t = 0;
  for (size_t c = 0; c < word.size(); ++c) {
    size_t proto_row = static_cast<size_t>(word[c] - 'a');
    for (size_t rep = 0; rep < durations[c]; ++rep, ++t)
      for (size_t k = 0; k < kFeatureDim; ++k)
        seg.frames.at(t, k) =
            prototypes.at(proto_row, k) + cfg.jitter_std * rng.normal();
  }
  return seg;
}

}  // namespace

SynthSummary generate_synthetic_corpus(const SynthConfig& cfg,
                                       const std::string& out_dir) {
  cfg.validate();
  uint64_t root = split_seed(cfg.seed, static_cast<uint64_t>(SeedStream::kSynth));

  Rng vocab_rng(split_seed(root, 1));
  std::vector<std::string> vocab = make_vocabulary(cfg, vocab_rng);
  size_t num_oov = static_cast<size_t>(
      std::ceil(cfg.oov_fraction * static_cast<double>(cfg.vocab_size)));
  if (cfg.vocab_size - num_oov < 2)
    throw ConfigError("synth: not enough in-vocabulary words after OOV holdout");

  Rng proto_rng(split_seed(root, 2));
  Tensor prototypes({kAlphabetSize, kFeatureDim});
  for (double& v : prototypes.data) v = proto_rng.normal();

  SynthSummary summary;
  summary.vocabulary = vocab;
  summary.num_oov_words = num_oov;
  size_t num_iv = cfg.vocab_size - num_oov;

  struct SplitSpec {
    const char* name;
    uint64_t tag;
    size_t per_word;
    bool include_oov;
  };
  const SplitSpec splits[] = {
      {"train", 10, cfg.samples_per_word, false},
      {"dev", 11, cfg.dev_samples_per_word, true},
      {"test", 12, cfg.test_samples_per_word, true},
  };
  for (const auto& sp : splits) {
    DatasetWriter writer(out_dir, sp.name);
    size_t count = 0;
    size_t limit = sp.include_oov ? cfg.vocab_size : num_iv;
    for (size_t w = 0; w < limit; ++w) {
      for (size_t s = 0; s < sp.per_word; ++s) {
        char sid[64];
        std::snprintf(sid, sizeof(sid), "%s-w%04zu-s%04zu", sp.name, w, s);
        uint64_t seed = split_seed(root, sp.tag, w, s);
        writer.add(vocab[w], make_segment(vocab[w], prototypes, cfg, seed, sid));
        ++count;
      }
    }
    writer.finalize();
    if (sp.tag == 10) summary.train_records = count;
    if (sp.tag == 11) summary.dev_records = count;
    if (sp.tag == 12) summary.test_records = count;
  }
  // OOV words are the tail of the vocabulary: vocab[num_iv..V)
  (void)num_iv;
  return summary;
}

}  // namespace mvawe
