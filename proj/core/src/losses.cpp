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

#include "mvawe/losses.hpp"

#include <cmath>

#include "mvawe/model.hpp"

namespace mvawe {

double cosine_distance(const Tensor& p, const Tensor& q) {
  if (p.numel() != q.numel())
    throw ConfigError("cosine_distance: dimension mismatch");
  double pq = 0.0, pp = 0.0, qq = 0.0;
  for (size_t i = 0; i < p.numel(); ++i) {
    pq += p.data[i] * q.data[i];
    pp += p.data[i] * p.data[i];
    qq += q.data[i] * q.data[i];
  }
  if (pp == 0.0 || qq == 0.0)
    throw DataError("cosine_distance: zero vector has no direction");
  return 1.0 - pq / (std::sqrt(pp) * std::sqrt(qq));
}

double single_view_triplet(const Tensor& fx, const Tensor& fx_pos,
                           const Tensor& fx_neg, double m) {
  double v = m + cosine_distance(fx, fx_pos) - cosine_distance(fx, fx_neg);
  return v > 0.0 ? v : 0.0;
}

double multiview_triplet_pair(const Tensor& f_xpos, const Tensor& g_cpos,
                              const Tensor& g_cneg, const Tensor& f_xneg,
                              double m) {
  double a = m + cosine_distance(f_xpos, g_cpos) - cosine_distance(f_xpos, g_cneg);
  double b = m + cosine_distance(g_cpos, f_xpos) - cosine_distance(g_cpos, f_xneg);
  return (a > 0.0 ? a : 0.0) + (b > 0.0 ? b : 0.0);
}

double batch_triplet_loss(const std::vector<TripletQuad>& batch, double m) {
  if (batch.empty()) throw UsageError("batch_triplet_loss: empty batch");
  double total = 0.0;
  for (const auto& q : batch)
    total += multiview_triplet_pair(q.f_xpos, q.g_cpos, q.g_cneg, q.f_xneg, m);
  return total;
}

namespace {

double path_cross_entropy(const Tensor& probs, const TextLabel& target) {
  size_t w = target.length();
  bool with_eos = probs.cols() > kAlphabetSize;
  size_t expected = with_eos ? w + 1 : w;
  if (probs.rows() != expected)
    throw UsageError("decoding_loss: decoded length " + std::to_string(probs.rows()) +
                     " does not match target length " + std::to_string(expected));
  double ce = 0.0;
  for (size_t y = 0; y < expected; ++y) {
    size_t cls = y < w ? static_cast<size_t>(target.text[y] - 'a') : kEosClass;
    ce -= std::log(std::max(probs.at(y, cls), kProbFloor));
  }
  return ce;
}

}  // namespace

double decoding_loss(const std::vector<DecodingItem>& batch) {
  if (batch.empty()) throw UsageError("decoding_loss: empty batch");
  double total = 0.0;
  for (const auto& item : batch) {
    total += path_cross_entropy(item.probs_from_acoustic, item.target);
    total += path_cross_entropy(item.probs_from_text, item.target);
  }
  return total;
}

double total_loss(double triplet, double decoding, double alpha) {
  return triplet + alpha * decoding;
}

Var cosine_distance_t(Tape& t, Var p, Var q) {
  double pp = 0.0, qq = 0.0;
  for (double v : t.value(p).data) pp += v * v;
  for (double v : t.value(q).data) qq += v * v;
  if (pp == 0.0 || qq == 0.0)
    throw DataError("cosine_distance: zero vector has no direction");
  Var norm = t.sqrt_(t.mul(t.dot(p, p), t.dot(q, q)));
  Var cos = t.div(t.dot(p, q), norm);
  return t.add_scalar(t.scale(cos, -1.0), 1.0);
}

Var single_view_triplet_t(Tape& t, Var fx, Var fx_pos, Var fx_neg, double m) {
  Var diff = t.sub(cosine_distance_t(t, fx, fx_pos), cosine_distance_t(t, fx, fx_neg));
  return t.relu(t.add_scalar(diff, m));
}

Var multiview_triplet_pair_t(Tape& t, Var f_xpos, Var g_cpos, Var g_cneg,
                             Var f_xneg, double m) {
  Var a = t.relu(t.add_scalar(
      t.sub(cosine_distance_t(t, f_xpos, g_cpos), cosine_distance_t(t, f_xpos, g_cneg)),
      m));
  Var b = t.relu(t.add_scalar(
      t.sub(cosine_distance_t(t, g_cpos, f_xpos), cosine_distance_t(t, g_cpos, f_xneg)),
      m));
  return t.add(a, b);
}

Var decode_cross_entropy_t(Tape& t, const std::vector<Var>& step_probs,
                           const TextLabel& target, bool with_eos) {
  size_t w = target.length();
  size_t expected = with_eos ? w + 1 : w;
  if (step_probs.size() != expected)
    throw UsageError("decode_cross_entropy: step count mismatch");
  Var ce = t.scalar_const(0.0);
  for (size_t y = 0; y < expected; ++y) {
    size_t k = t.value(step_probs[y]).numel();
    Tensor onehot({k});
    size_t cls = y < w ? static_cast<size_t>(target.text[y] - 'a') : kEosClass;
    if (cls >= k) throw UsageError("decode_cross_entropy: class out of range");
    onehot.data[cls] = 1.0;
    Var logp = t.log_clamped(step_probs[y], kProbFloor);
    ce = t.sub(ce, t.dot(t.constant(std::move(onehot)), logp));
  }
  return ce;
}

}  // namespace mvawe
