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

#ifndef MVAWE_MODEL_HPP
#define MVAWE_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "mvawe/dataset.hpp"
#include "mvawe/features.hpp"
#include "mvawe/lstm.hpp"
#include "mvawe/params.hpp"
#include "mvawe/tape.hpp"

namespace mvawe {

inline constexpr size_t kEosClass = 26;  // index of the end-of-word symbol

// Architecture: acoustic encoder f and text encoder g are L-layer
// bidirectional LSTMs; the shared decoder h is an L-layer unidirectional
// LSTM whose per-layer initial states are the forward-direction final states
// of whichever encoder produced the embedding being decoded.  The output
// projection is hidden -> 128 linear -> K linear -> softmax.
struct ModelConfig {
  size_t layers = 2;
  size_t hidden = 64;  // per-direction hidden size H; also decoder hidden
  size_t proj_hidden = 128;
  double dropout = 0.4;
  bool eos_enabled = true;  // adds a 27th end-of-word class to the decoder head

  size_t num_classes() const { return eos_enabled ? kAlphabetSize + 1 : kAlphabetSize; }
  size_t embedding_dim() const { return 2 * hidden; }
  void validate() const;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
  void save_sidecar(const std::string& checkpoint_path) const;
  static ModelConfig load_sidecar(const std::string& checkpoint_path);
};

enum class Mode { kTrain, kEval };

// Fresh parameters: weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
// zero biases, forget-gate bias +1.
ParamSet init_params(const ModelConfig& cfg, uint64_t seed);

// Parameters bound onto a tape as leaves (requires_grad for training) or
// constants (evaluation).
struct TapeParams {
  ModelConfig cfg;
  std::map<std::string, Var> vars;
  Var at(const std::string& name) const;
};
TapeParams bind_params(Tape& tape, const ParamSet& params,
                       const ModelConfig& cfg, bool requires_grad);

struct EncoderResult {
  Var embedding;                        // 2H
  std::vector<LstmState> forward_final; // per layer, forward direction
};

// view prefix is "f" (acoustic, [T,40] input) or "g" (text, [W,26] input).
// Dropout applies to the inputs of every LSTM layer except the text
// encoder's first layer; pass a seeded rng in train mode, nullptr otherwise.
EncoderResult encode_on_tape(Tape& tape, const TapeParams& p,
                             const std::string& view, const Tensor& input,
                             Mode mode, Rng* dropout_rng);

struct DecodeStepVars {
  std::vector<Var> probs;  // per output step, K-dim row-stochastic
};

// Teacher forcing replaces the soft previous-output feedback with the target
// one-hot rows.  In training the step count is the target length (plus the
// end-of-word step when enabled); at inference decoding runs until the
// end-of-word class wins the argmax or max_steps is reached.
DecodeStepVars decode_on_tape(Tape& tape, const TapeParams& p, Var embedding,
                              const std::vector<LstmState>& init,
                              size_t num_steps, const TextLabel* teacher,
                              Mode mode, Rng* dropout_rng);

// --- plain-tensor wrappers (evaluation path) -------------------------------

struct DecodedSequence {
  Tensor probs;             // [Y, K], rows sum to 1
  std::string argmax_text;  // per-row argmax over letter classes, ties low
};

Tensor encode_acoustic(const AcousticSegment& x, const ParamSet& params,
                       const ModelConfig& cfg, Mode mode = Mode::kEval,
                       Rng* dropout_rng = nullptr);
Tensor encode_text(const TextLabel& c, const ParamSet& params,
                   const ModelConfig& cfg, Mode mode = Mode::kEval,
                   Rng* dropout_rng = nullptr);

// Decodes from one view's embedding, initial states handed off from that
// same encoder.  `target_length_or_max` is the exact output length when
// `teacher_target` is given or eos is disabled, otherwise a cap.
DecodedSequence decode_embedding(const AcousticSegment* x, const TextLabel* c,
                                 const ParamSet& params, const ModelConfig& cfg,
                                 size_t target_length_or_max,
                                 const TextLabel* teacher_target = nullptr);

}  // namespace mvawe

#endif  // MVAWE_MODEL_HPP
