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

#ifndef MVAWE_SYNTH_HPP
#define MVAWE_SYNTH_HPP

#include <string>
#include <vector>

#include "mvawe/common.hpp"

namespace mvawe {

// Deterministic speech-like corpus at desk scale.  Each character gets a
// fixed random 40-dim prototype; a word segment is the concatenation of
// per-character prototype blocks with random durations, additive Gaussian
// jitter, and a global tempo warp.  Same-word segments are perturbations of
// one template and share structure with their spelling.
struct SynthConfig {
  size_t vocab_size = 50;        // V, >= 2
  size_t samples_per_word = 20;  // S (train samples per in-vocabulary word)
  size_t dev_samples_per_word = 3;
  size_t test_samples_per_word = 3;
  double oov_fraction = 0.1;     // fraction of words held out of train
  double duration_mean = 4.0;    // frames per character
  double duration_std = 1.0;
  double jitter_std = 0.5;       // additive noise on prototype frames
  double warp_lo = 0.8;          // tempo warp factor range
  double warp_hi = 1.2;
  size_t word_len_min = 3;
  size_t word_len_max = 8;
  uint64_t seed = 0;

  void validate() const;
};

SynthConfig synth_config_from_json_file(const std::string& path);

struct SynthSummary {
  std::vector<std::string> vocabulary;  // in-vocabulary first, then OOV
  size_t num_oov_words = 0;
  size_t train_records = 0, dev_records = 0, test_records = 0;
};

// Writes train/dev/test manifests + feature files into out_dir.
// Byte-identical output for identical configs.
SynthSummary generate_synthetic_corpus(const SynthConfig& cfg,
                                       const std::string& out_dir);

}  // namespace mvawe

#endif  // MVAWE_SYNTH_HPP
