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

#ifndef MVAWE_LOSSES_HPP
#define MVAWE_LOSSES_HPP

#include <vector>

#include "mvawe/features.hpp"
#include "mvawe/tape.hpp"

namespace mvawe {

inline constexpr double kProbFloor = 1e-12;  // floor inside the log

struct LossConfig {
  double margin = 0.5;       // m
  double alpha = 0.1;        // decoding-loss weight
  size_t batch_size = 256;   // N

  void validate() const {
    if (!(margin >= 0.0) || !std::isfinite(margin))
      throw ConfigError("loss: margin must be finite and >= 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
      throw ConfigError("loss: alpha must be finite and >= 0");
    if (batch_size < 1) throw ConfigError("loss: batch size must be >= 1");
  }
};

// --- plain-value forms ------------------------------------------------------

// d(p, q) = 1 - p.q / (|p| |q|), in [0, 2].  Zero vectors are rejected.
double cosine_distance(const Tensor& p, const Tensor& q);

// [m + d(fx, fx_pos) - d(fx, fx_neg)]_+
double single_view_triplet(const Tensor& fx, const Tensor& fx_pos,
                           const Tensor& fx_neg, double m);

// [m + d(f(x+), g(c+)) - d(f(x+), g(c-))]_+
//   + [m + d(g(c+), f(x+)) - d(g(c+), f(x-))]_+
double multiview_triplet_pair(const Tensor& f_xpos, const Tensor& g_cpos,
                              const Tensor& g_cneg, const Tensor& f_xneg,
                              double m);

struct TripletQuad {
  Tensor f_xpos, g_cpos, g_cneg, f_xneg;
};
double batch_triplet_loss(const std::vector<TripletQuad>& batch, double m);

// Sum over the batch of the two per-step cross-entropies (natural log,
// probability floor 1e-12).  Each item supplies the step probabilities of
// the acoustic-to-text and text-to-text paths; rows must match the target
// length (plus the end-of-word step when those rows carry 27 classes).
struct DecodingItem {
  Tensor probs_from_acoustic;  // [Y, K]
  Tensor probs_from_text;      // [Y, K]
  TextLabel target;
};
double decoding_loss(const std::vector<DecodingItem>& batch);

// L_total = L_triplet + alpha * L_decoding
double total_loss(double triplet, double decoding, double alpha);

// --- tape forms (gradients flow through everything, norms included) --------

Var cosine_distance_t(Tape& t, Var p, Var q);
Var single_view_triplet_t(Tape& t, Var fx, Var fx_pos, Var fx_neg, double m);
Var multiview_triplet_pair_t(Tape& t, Var f_xpos, Var g_cpos, Var g_cneg,
                             Var f_xneg, double m);
// Cross-entropy of one decoder path against the target characters; when
// `with_eos` the final step's target is the end-of-word class.
Var decode_cross_entropy_t(Tape& t, const std::vector<Var>& step_probs,
                           const TextLabel& target, bool with_eos);

}  // namespace mvawe

#endif  // MVAWE_LOSSES_HPP
