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

#ifndef MVAWE_FEATURES_HPP
#define MVAWE_FEATURES_HPP

#include <string>
#include <vector>

#include "mvawe/tensor.hpp"

namespace mvawe {

inline constexpr size_t kFeatureDim = 40;   // log Mel-filterbank energies
inline constexpr size_t kAlphabetSize = 26; // a-z one-hot
inline constexpr double kLogFloor = 1e-10;  // energy floor before the log

// Variable-length sequence of per-frame feature vectors.
struct AcousticSegment {
  Tensor frames;  // [T, 40]
  int frame_period_ms = 10;
  int window_ms = 25;
  std::string source_id;

  size_t num_frames() const { return frames.rows(); }
  void validate() const;
};

// Normalized lowercase word plus its one-hot matrix.
struct TextLabel {
  std::string text;  // [a-z]+
  Tensor onehot;     // [W, 26], exactly one 1 per row

  size_t length() const { return text.size(); }
};

struct NormalizedText {
  std::vector<std::string> words;
  size_t dropped = 0;  // tokens that normalized to the empty string
};

// Lowercases, deletes punctuation/apostrophes, spells digits out
// digit-by-digit ("7" -> "seven", "1999" -> "onenineninenine"), then keeps
// only a-z.  Tokens that end up empty are dropped and counted.
NormalizedText normalize_text(const std::string& raw);

// word must match [a-z]+; out-of-alphabet characters are a validation error.
TextLabel one_hot_encode(const std::string& word);

// Recovers the word from a one-hot (or row-stochastic) matrix by per-row
// argmax, ties to the lowest index.
std::string argmax_text(const Tensor& rows, size_t num_classes = kAlphabetSize);

// 40 triangular Mel filters from 0 Hz to Nyquist, 25 ms Hamming window,
// 10 ms hop, power spectrum via FFT (512-point at 16 kHz, longer windows
// round up to the next power of two), log with floor 1e-10.
AcousticSegment mel_filterbank(const std::vector<double>& samples,
                               int sample_rate_hz,
                               const std::string& source_id = "");

// Frame count for a waveform of `num_samples` under the 25 ms / 10 ms rule.
size_t mel_num_frames(size_t num_samples, int sample_rate_hz);

// Center frequency (Hz) of filter k (0-based) at the given rate; exposed so
// tests can synthesize probe tones.
double mel_filter_center_hz(size_t k, int sample_rate_hz);

}  // namespace mvawe

#endif  // MVAWE_FEATURES_HPP
