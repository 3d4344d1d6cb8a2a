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

#include "mvawe/model.hpp"

#include <fstream>

#include <json.hpp>

namespace mvawe {

using nlohmann::json;

void ModelConfig::validate() const {
  if (layers < 1) throw ConfigError("model: layers must be >= 1");
  if (hidden < 1) throw ConfigError("model: hidden must be >= 1");
  if (proj_hidden < 1) throw ConfigError("model: proj_hidden must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0)
    throw ConfigError("model: dropout must be in [0, 1)");
}

std::string ModelConfig::to_json() const {
  json j;
  j["layers"] = layers;
  j["hidden"] = hidden;
  j["proj_hidden"] = proj_hidden;
  j["dropout"] = dropout;
  j["eos_enabled"] = eos_enabled;
  j["num_classes"] = num_classes();
  return j.dump(2);
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("model: bad config JSON: " + std::string(e.what()));
  }
  ModelConfig cfg;
  cfg.layers = j.value("layers", cfg.layers);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.proj_hidden = j.value("proj_hidden", cfg.proj_hidden);
  cfg.dropout = j.value("dropout", cfg.dropout);
  cfg.eos_enabled = j.value("eos_enabled", cfg.eos_enabled);
  cfg.validate();
  return cfg;
}

void ModelConfig::save_sidecar(const std::string& checkpoint_path) const {
  std::ofstream os(checkpoint_path + ".json");
  if (!os) throw DataError("model: cannot write sidecar for " + checkpoint_path);
  os << to_json() << "\n";
}

ModelConfig ModelConfig::load_sidecar(const std::string& checkpoint_path) {
  std::ifstream is(checkpoint_path + ".json");
  if (!is) throw DataError("model: missing sidecar " + checkpoint_path + ".json");
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

namespace {

std::string lstm_name(const std::string& view, size_t layer, const char* dir,
                      const char* what) {
  return view + ".l" + std::to_string(layer) + "." + dir + "." + what;
}

void add_lstm_params(ParamSet& p, const std::string& view, size_t layer,
                     const char* dir, size_t in_dim, size_t hidden, Rng& rng) {
  Tensor w = Tensor::uniform_fan_in({4 * hidden, in_dim + hidden}, in_dim + hidden, rng);
  Tensor b({4 * hidden});
  for (size_t i = hidden; i < 2 * hidden; ++i) b.data[i] = 1.0;  // forget gate
  w.requires_grad = b.requires_grad = true;
  p.emplace(lstm_name(view, layer, dir, "W"), std::move(w));
  p.emplace(lstm_name(view, layer, dir, "b"), std::move(b));
}

}  // namespace

ParamSet init_params(const ModelConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(split_seed(seed, static_cast<uint64_t>(SeedStream::kInit)));
  ParamSet p;
  size_t h = cfg.hidden;
  for (size_t l = 0; l < cfg.layers; ++l) {
    size_t ac_in = l == 0 ? kFeatureDim : 2 * h;
    size_t tx_in = l == 0 ? kAlphabetSize : 2 * h;
    add_lstm_params(p, "f", l, "fwd", ac_in, h, rng);
    add_lstm_params(p, "f", l, "bwd", ac_in, h, rng);
    add_lstm_params(p, "g", l, "fwd", tx_in, h, rng);
    add_lstm_params(p, "g", l, "bwd", tx_in, h, rng);
    // decoder layer input: embedding (2H) + previous output (K) at the
    // bottom, hidden of the layer below above that
    size_t dec_in = l == 0 ? cfg.embedding_dim() + cfg.num_classes() : h;
    add_lstm_params(p, "h", l, "uni", dec_in, h, rng);
  }
  Tensor w1 = Tensor::uniform_fan_in({cfg.proj_hidden, h}, h, rng);
  Tensor b1({cfg.proj_hidden});
  Tensor w2 = Tensor::uniform_fan_in({cfg.num_classes(), cfg.proj_hidden},
                                     cfg.proj_hidden, rng);
  Tensor b2({cfg.num_classes()});
  w1.requires_grad = b1.requires_grad = true;
  w2.requires_grad = b2.requires_grad = true;
  p.emplace("proj.W1", std::move(w1));
  p.emplace("proj.b1", std::move(b1));
  p.emplace("proj.W2", std::move(w2));
  p.emplace("proj.b2", std::move(b2));
  return p;
}

Var TapeParams::at(const std::string& name) const {
  auto it = vars.find(name);
  if (it == vars.end()) throw ConfigError("model: missing parameter " + name);
  return it->second;
}

TapeParams bind_params(Tape& tape, const ParamSet& params, const ModelConfig& cfg,
                       bool requires_grad) {
  TapeParams tp;
  tp.cfg = cfg;
  for (const auto& [name, t] : params)
    tp.vars.emplace(name, tape.leaf(t, requires_grad));
  return tp;
}

namespace {

Var maybe_dropout(Tape& t, Var v, double rate, Mode mode, Rng* rng) {
  if (mode != Mode::kTrain || rate <= 0.0 || rng == nullptr) return v;
  Tensor mask(t.value(v).shape);
  double keep_scale = 1.0 / (1.0 - rate);  // inverted scaling
  for (double& m : mask.data) m = rng->uniform() < rate ? 0.0 : keep_scale;
  return t.mul(v, t.constant(mask));
}

}  // namespace

EncoderResult encode_on_tape(Tape& tape, const TapeParams& p,
                             const std::string& view, const Tensor& input,
                             Mode mode, Rng* dropout_rng) {
  if (input.rank() != 2 || input.rows() < 1)
    throw DataError("encoder: input must have at least one row");
  size_t expected = view == "g" ? kAlphabetSize : kFeatureDim;
  if (input.cols() != expected)
    throw ConfigError("encoder: input width " + std::to_string(input.cols()) +
                      " does not match view " + view);

  size_t steps = input.rows();
  size_t h = p.cfg.hidden;
  std::vector<Var> layer_in(steps);
  for (size_t t = 0; t < steps; ++t) {
    Tensor row({input.cols()});
    for (size_t c = 0; c < input.cols(); ++c) row.data[c] = input.at(t, c);
    layer_in[t] = tape.constant(std::move(row));
  }

  EncoderResult res;
  std::vector<Var> fwd_h(steps), bwd_h(steps);
  for (size_t l = 0; l < p.cfg.layers; ++l) {
    // dropout on layer inputs, except the text encoder's own inputs
    bool skip_dropout = (view == "g" && l == 0);
    if (!skip_dropout)
      for (size_t t = 0; t < steps; ++t)
        layer_in[t] = maybe_dropout(tape, layer_in[t], p.cfg.dropout, mode, dropout_rng);

    Var wf = p.at(lstm_name(view, l, "fwd", "W"));
    Var bf = p.at(lstm_name(view, l, "fwd", "b"));
    Var wb = p.at(lstm_name(view, l, "bwd", "W"));
    Var bb = p.at(lstm_name(view, l, "bwd", "b"));

    LstmState state{tape.constant(Tensor({h})), tape.constant(Tensor({h}))};
    for (size_t t = 0; t < steps; ++t) {
      state = lstm_cell(tape, layer_in[t], state, wf, bf);
      fwd_h[t] = state.h;
    }
    res.forward_final.push_back(state);

    state = {tape.constant(Tensor({h})), tape.constant(Tensor({h}))};
    for (size_t t = steps; t-- > 0;) {
      state = lstm_cell(tape, layer_in[t], state, wb, bb);
      bwd_h[t] = state.h;
    }

    for (size_t t = 0; t < steps; ++t)
      layer_in[t] = tape.concat(fwd_h[t], bwd_h[t]);
  }
  res.embedding = tape.concat(fwd_h[steps - 1], bwd_h[0]);
  return res;
}

DecodeStepVars decode_on_tape(Tape& tape, const TapeParams& p, Var embedding,
                              const std::vector<LstmState>& init,
                              size_t num_steps, const TextLabel* teacher,
                              Mode mode, Rng* dropout_rng) {
  if (num_steps < 1) throw UsageError("decoder: need at least one step");
  if (init.size() != p.cfg.layers)
    throw ConfigError("decoder: initial state count does not match layers");
  size_t k = p.cfg.num_classes();

  std::vector<LstmState> state = init;
  Var prev = tape.constant(Tensor({k}));  // step-1 auxiliary input: all zeros
  DecodeStepVars out;
  for (size_t y = 0; y < num_steps; ++y) {
    Var x = tape.concat(embedding, prev);
    for (size_t l = 0; l < p.cfg.layers; ++l) {
      x = maybe_dropout(tape, x, p.cfg.dropout, mode, dropout_rng);
      state[l] = lstm_cell(tape, x, state[l],
                           p.at(lstm_name("h", l, "uni", "W")),
                           p.at(lstm_name("h", l, "uni", "b")));
      x = state[l].h;
    }
    Var z = tape.add(tape.matvec(p.at("proj.W1"), x), p.at("proj.b1"));
    Var logits = tape.add(tape.matvec(p.at("proj.W2"), z), p.at("proj.b2"));
    Var probs = tape.softmax(logits);
    out.probs.push_back(probs);

    bool last = y + 1 == num_steps;
    if (!last) {
      if (teacher) {
        // auxiliary input is the target row (never the end symbol)
        if (y >= teacher->length())
          throw UsageError("decoder: teacher target shorter than step count");
        Tensor row({k});
        for (size_t c = 0; c < kAlphabetSize; ++c)
          row.data[c] = teacher->onehot.at(y, c);
        prev = tape.constant(std::move(row));
      } else {
        prev = probs;  // soft previous-output feedback
      }
    }
    // inference-time stopping on the end-of-word symbol
    if (mode == Mode::kEval && p.cfg.eos_enabled && !teacher) {
      const Tensor& pv = tape.value(probs);
      size_t best = 0;
      for (size_t c = 1; c < k; ++c)
        if (pv.data[c] > pv.data[best]) best = c;
      if (best == kEosClass) break;
    }
  }
  return out;
}

namespace {

DecodedSequence collect_decoded(const Tape& tape, const DecodeStepVars& steps,
                                size_t k) {
  DecodedSequence out;
  out.probs = Tensor({steps.probs.size(), k});
  for (size_t y = 0; y < steps.probs.size(); ++y) {
    const Tensor& row = tape.value(steps.probs[y]);
    size_t best = 0;
    for (size_t c = 0; c < k; ++c) {
      out.probs.at(y, c) = row.data[c];
      if (row.data[c] > row.data[best]) best = c;
    }
    if (best == kEosClass && k > kAlphabetSize) break;
    out.argmax_text += static_cast<char>('a' + best);
  }
  return out;
}

}  // namespace

Tensor encode_acoustic(const AcousticSegment& x, const ParamSet& params,
                       const ModelConfig& cfg, Mode mode, Rng* dropout_rng) {
  x.validate();
  Tape tape;
  TapeParams tp = bind_params(tape, params, cfg, false);
  EncoderResult res = encode_on_tape(tape, tp, "f", x.frames, mode, dropout_rng);
  return tape.value(res.embedding);
}

Tensor encode_text(const TextLabel& c, const ParamSet& params,
                   const ModelConfig& cfg, Mode mode, Rng* dropout_rng) {
  if (c.length() < 1) throw DataError("encode_text: empty label");
  Tape tape;
  TapeParams tp = bind_params(tape, params, cfg, false);
  EncoderResult res = encode_on_tape(tape, tp, "g", c.onehot, mode, dropout_rng);
  return tape.value(res.embedding);
}

DecodedSequence decode_embedding(const AcousticSegment* x, const TextLabel* c,
                                 const ParamSet& params, const ModelConfig& cfg,
                                 size_t target_length_or_max,
                                 const TextLabel* teacher_target) {
  if ((x == nullptr) == (c == nullptr))
    throw UsageError("decode_embedding: supply exactly one view");
  if (target_length_or_max < 1)
    throw UsageError("decode_embedding: max length must be >= 1");
  Tape tape;
  TapeParams tp = bind_params(tape, params, cfg, false);
  EncoderResult enc =
      x ? encode_on_tape(tape, tp, "f", x->frames, Mode::kEval, nullptr)
        : encode_on_tape(tape, tp, "g", c->onehot, Mode::kEval, nullptr);
  DecodeStepVars steps =
      decode_on_tape(tape, tp, enc.embedding, enc.forward_final,
                     target_length_or_max, teacher_target, Mode::kEval, nullptr);
  return collect_decoded(tape, steps, cfg.num_classes());
}

}  // namespace mvawe
