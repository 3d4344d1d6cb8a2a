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

#include "mvawe/train.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace mvawe {

using nlohmann::json;

void TrainConfig::validate() const {
  model.validate();
  loss.validate();
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (!(adam.lr > 0.0)) throw ConfigError("train: lr must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
    throw ConfigError("train: betas must be in [0, 1)");
  if (!(adam.eps > 0.0)) throw ConfigError("train: eps must be > 0");
  if (max_decode_len < 1) throw ConfigError("train: max_decode_len must be >= 1");
}

std::string TrainConfig::to_json() const {
  json j;
  j["layers"] = model.layers;
  j["hidden"] = model.hidden;
  j["proj_hidden"] = model.proj_hidden;
  j["dropout"] = model.dropout;
  j["eos_enabled"] = model.eos_enabled;
  j["margin"] = loss.margin;
  j["alpha"] = loss.alpha;
  j["batch_size"] = loss.batch_size;
  j["lr"] = adam.lr;
  j["beta1"] = adam.beta1;
  j["beta2"] = adam.beta2;
  j["eps"] = adam.eps;
  j["epochs"] = epochs;
  j["seed"] = seed;
  j["teacher_forcing"] = teacher_forcing;
  j["workers"] = workers;
  j["dev_max_pairs"] = dev_max_pairs;
  j["max_decode_len"] = max_decode_len;
  return j.dump(2);
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("train: bad config JSON: " + std::string(e.what()));
  }
  static const std::set<std::string> known = {
      "layers",     "hidden",  "proj_hidden",     "dropout", "eos_enabled",
      "margin",     "alpha",   "batch_size",      "lr",      "beta1",
      "beta2",      "eps",     "epochs",          "seed",    "teacher_forcing",
      "workers",    "dev_max_pairs",              "max_decode_len"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw ConfigError("train: unknown config key \"" + key + "\"");
  TrainConfig cfg;
  cfg.model.layers = j.value("layers", cfg.model.layers);
  cfg.model.hidden = j.value("hidden", cfg.model.hidden);
  cfg.model.proj_hidden = j.value("proj_hidden", cfg.model.proj_hidden);
  cfg.model.dropout = j.value("dropout", cfg.model.dropout);
  cfg.model.eos_enabled = j.value("eos_enabled", cfg.model.eos_enabled);
  cfg.loss.margin = j.value("margin", cfg.loss.margin);
  cfg.loss.alpha = j.value("alpha", cfg.loss.alpha);
  cfg.loss.batch_size = j.value("batch_size", cfg.loss.batch_size);
  cfg.adam.lr = j.value("lr", cfg.adam.lr);
  cfg.adam.beta1 = j.value("beta1", cfg.adam.beta1);
  cfg.adam.beta2 = j.value("beta2", cfg.adam.beta2);
  cfg.adam.eps = j.value("eps", cfg.adam.eps);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.teacher_forcing = j.value("teacher_forcing", cfg.teacher_forcing);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.dev_max_pairs = j.value("dev_max_pairs", cfg.dev_max_pairs);
  cfg.max_decode_len = j.value("max_decode_len", cfg.max_decode_len);
  cfg.validate();
  return cfg;
}

TrainConfig TrainConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("train: cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

TrainConfig TrainConfig::tuned_preset() {
  TrainConfig cfg;
  cfg.model.layers = 3;
  cfg.model.hidden = 512;
  cfg.model.dropout = 0.4;
  cfg.loss.margin = 0.5;
  cfg.loss.alpha = 0.1;
  cfg.loss.batch_size = 256;
  cfg.epochs = 150;
  return cfg;
}

TrainConfig TrainConfig::desk_preset() {
  TrainConfig cfg;
  cfg.model.layers = 2;
  cfg.model.hidden = 64;
  cfg.model.dropout = 0.4;
  cfg.loss.margin = 0.5;
  cfg.loss.alpha = 0.1;
  cfg.loss.batch_size = 32;
  cfg.epochs = 30;
  return cfg;
}

std::string TrainReport::to_json(bool include_wall_time) const {
  json j;
  j["best_epoch"] = best_epoch;
  j["epochs"] = json::array();
  for (const auto& e : epochs) {
    json ej;
    ej["train_loss"] = e.train_loss;
    ej["dev_acoustic_ap"] = e.dev_acoustic_ap;
    ej["dev_cross_ap"] = e.dev_cross_ap;
    if (include_wall_time) ej["wall_time_s"] = e.wall_time_s;
    j["epochs"].push_back(ej);
  }
  return j.dump(2);
}

void TrainReport::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("train: cannot write " + path);
  os << "epoch,train_loss,dev_acoustic_ap,dev_cross_ap,wall_time_s\n";
  for (size_t i = 0; i < epochs.size(); ++i) {
    const auto& e = epochs[i];
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.3f\n", i,
                  e.train_loss, e.dev_acoustic_ap, e.dev_cross_ap, e.wall_time_s);
    os << buf;
  }
}

namespace {

struct ItemResult {
  // gradients in ParamSet iteration order, aligned with param names
  std::vector<std::vector<double>> grads;
  double loss = 0.0, triplet = 0.0, decoding = 0.0;
};

ItemResult compute_item(const Dataset& ds, const TripletItem& item,
                        const ParamSet& params, const TrainConfig& cfg,
                        uint64_t item_dropout_seed) {
  Rng dropout_rng(item_dropout_seed);
  Rng* drop = cfg.model.dropout > 0.0 ? &dropout_rng : nullptr;

  Tape tape;
  TapeParams tp = bind_params(tape, params, cfg.model, true);

  AcousticSegment x_pos = ds.segment(item.positive);
  AcousticSegment x_neg = ds.segment(item.negative_seg);
  const TextLabel& c_pos = ds.label(item.positive);
  const TextLabel& c_neg = ds.label(item.negative_lab);

  EncoderResult f_pos = encode_on_tape(tape, tp, "f", x_pos.frames, Mode::kTrain, drop);
  EncoderResult f_neg = encode_on_tape(tape, tp, "f", x_neg.frames, Mode::kTrain, drop);
  EncoderResult g_pos = encode_on_tape(tape, tp, "g", c_pos.onehot, Mode::kTrain, drop);
  EncoderResult g_neg = encode_on_tape(tape, tp, "g", c_neg.onehot, Mode::kTrain, drop);

  Var triplet = multiview_triplet_pair_t(tape, f_pos.embedding, g_pos.embedding,
                                         g_neg.embedding, f_neg.embedding,
                                         cfg.loss.margin);

  size_t steps = c_pos.length() + (cfg.model.eos_enabled ? 1 : 0);
  const TextLabel* teacher = cfg.teacher_forcing ? &c_pos : nullptr;
  DecodeStepVars dec_ac = decode_on_tape(tape, tp, f_pos.embedding,
                                         f_pos.forward_final, steps, teacher,
                                         Mode::kTrain, drop);
  DecodeStepVars dec_tx = decode_on_tape(tape, tp, g_pos.embedding,
                                         g_pos.forward_final, steps, teacher,
                                         Mode::kTrain, drop);
  Var decoding = tape.add(
      decode_cross_entropy_t(tape, dec_ac.probs, c_pos, cfg.model.eos_enabled),
      decode_cross_entropy_t(tape, dec_tx.probs, c_pos, cfg.model.eos_enabled));

  // alpha scales the only decoder-loss path; alpha = 0 makes decoder and
  // projection gradients exactly zero
  Var total = tape.add(triplet, tape.scale(decoding, cfg.loss.alpha));
  tape.backward(total);

  ItemResult res;
  res.loss = tape.scalar_value(total);
  res.triplet = tape.scalar_value(triplet);
  res.decoding = tape.scalar_value(decoding);
  res.grads.reserve(tp.vars.size());
  for (const auto& [name, var] : tp.vars) {
    auto g = tape.grad(var);
    res.grads.emplace_back(g.begin(), g.end());
  }
  return res;
}

void parallel_items(size_t n, unsigned workers,
                    const std::function<void(size_t)>& fn) {
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = static_cast<unsigned>(std::min<size_t>(workers, n));
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

BatchGradResult compute_batch_gradients(const Dataset& train_set,
                                        const TripletBatch& batch,
                                        const ParamSet& params,
                                        const TrainConfig& cfg,
                                        uint64_t dropout_seed) {
  if (batch.items.empty())
    throw UsageError("compute_batch_gradients: empty batch");

  std::vector<ItemResult> results(batch.items.size());
  parallel_items(batch.items.size(), cfg.workers, [&](size_t i) {
    results[i] = compute_item(train_set, batch.items[i], params, cfg,
                              split_seed(dropout_seed, i));
  });

  BatchGradResult out;
  for (const auto& [name, p] : params)
    out.grads.emplace(name, Tensor(p.shape));
  // fixed reduction order: item index, then parameter name order
  for (const auto& r : results) {
    out.loss += r.loss;
    out.triplet += r.triplet;
    out.decoding += r.decoding;
    size_t pi = 0;
    for (auto& [name, g] : out.grads) {
      const auto& ig = r.grads[pi++];
      for (size_t k = 0; k < g.numel(); ++k) g.data[k] += ig[k];
    }
  }
  return out;
}

namespace {

struct DevApResult {
  double acoustic = 0.0;
  double cross = 0.0;
};

DevApResult dev_ap(const Dataset& dev, const ParamSet& params,
                   const TrainConfig& cfg, uint64_t subsample_seed) {
  std::vector<Tensor> segs = embed_dataset_acoustic(dev, params, cfg.model,
                                                    cfg.workers);
  std::vector<Tensor> texts = embed_dataset_text(dev, params, cfg.model,
                                                 cfg.workers);
  std::vector<int> ids(dev.size());
  for (size_t i = 0; i < dev.size(); ++i) ids[i] = dev.label_id(i);

  DevApResult res;
  size_t n = segs.size();
  uint64_t total_pairs = static_cast<uint64_t>(n) * (n - 1) / 2;
  if (total_pairs <= cfg.dev_max_pairs) {
    res.acoustic = acoustic_ap_from_embeddings(segs, ids).ap;
  } else {
    // seeded subsample of pairs bounded near dev_max_pairs
    double keep = static_cast<double>(cfg.dev_max_pairs) /
                  static_cast<double>(total_pairs);
    Rng rng(subsample_seed);
    std::vector<double> scores;
    std::vector<uint8_t> match;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        if (rng.uniform() >= keep) continue;
        scores.push_back(-cosine_distance(segs[i], segs[j]));
        match.push_back(ids[i] == ids[j] ? 1 : 0);
      }
    res.acoustic = average_precision(scores, match);
  }
  res.cross = cross_view_ap_from_embeddings(segs, ids, texts).ap;
  return res;
}

std::string positions_str(const std::vector<size_t>& positions) {
  std::string s = "[";
  for (size_t i = 0; i < positions.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(positions[i]);
  }
  return s + "]";
}

}  // namespace

TrainResult train(const Dataset& train_set, const Dataset& dev_set,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.num_labels() < 2)
    throw ConfigError("train: training set needs at least 2 distinct labels");
  if (dev_set.size() == 0) throw ConfigError("train: dev set is empty");

  ParamSet params = init_params(cfg.model, cfg.seed);
  AdamState adam(cfg.adam);

  uint64_t shuffle_root = split_seed(cfg.seed, static_cast<uint64_t>(SeedStream::kShuffle));
  uint64_t sampling_root = split_seed(cfg.seed, static_cast<uint64_t>(SeedStream::kSampling));
  uint64_t dropout_root = split_seed(cfg.seed, static_cast<uint64_t>(SeedStream::kDropout));

  TrainResult result;
  double best_ap = -1.0;
  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    auto schedule = epoch_schedule(train_set.size(), cfg.loss.batch_size,
                                   split_seed(shuffle_root, epoch));
    double epoch_loss = 0.0;
    for (size_t b = 0; b < schedule.size(); ++b) {
      TripletBatch batch = sample_batch(train_set, schedule[b],
                                        split_seed(sampling_root, epoch, b));
      BatchGradResult grads;
      try {
        grads = compute_batch_gradients(train_set, batch, params, cfg,
                                        split_seed(dropout_root, epoch, b));
      } catch (const NumericError& e) {
        throw NumericError("training aborted at epoch " + std::to_string(epoch) +
                           " batch " + std::to_string(b) + " positions " +
                           positions_str(schedule[b]) + ": " + e.what());
      }
      if (!std::isfinite(grads.loss))
        throw NumericError("NaN loss at epoch " + std::to_string(epoch) +
                           " batch " + std::to_string(b) + " positions " +
                           positions_str(schedule[b]) + " (triplet=" +
                           std::to_string(grads.triplet) + ", decoding=" +
                           std::to_string(grads.decoding) + ")");
      epoch_loss += grads.loss;
      adam.update(params, grads.grads);
    }

    DevApResult ap = dev_ap(dev_set, params, cfg, split_seed(cfg.seed, 777, epoch));
    auto t1 = std::chrono::steady_clock::now();

    EpochRecord rec;
    rec.train_loss = epoch_loss;
    rec.dev_acoustic_ap = ap.acoustic;
    rec.dev_cross_ap = ap.cross;
    rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    result.report.epochs.push_back(rec);

    if (ap.acoustic > best_ap) {
      best_ap = ap.acoustic;
      result.report.best_epoch = epoch;
      result.best_params = params;
      result.best_dev_acoustic_ap = ap.acoustic;
    }
  }
  return result;
}

SweepGrid SweepGrid::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("sweep: cannot open grid " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("sweep: bad grid JSON: " + std::string(e.what()));
  }
  SweepGrid g;
  g.cartesian = j.value("mode", "coordinate") == std::string("cartesian");
  if (j.contains("layers")) g.layers = j["layers"].get<std::vector<size_t>>();
  if (j.contains("hidden")) g.hidden = j["hidden"].get<std::vector<size_t>>();
  if (j.contains("batch")) g.batch = j["batch"].get<std::vector<size_t>>();
  if (j.contains("margin")) g.margin = j["margin"].get<std::vector<double>>();
  if (j.contains("alpha")) g.alpha = j["alpha"].get<std::vector<double>>();
  return g;
}

namespace {

// lr is calibrated against the base batch size; rescale linearly with N.
void apply_batch(TrainConfig& cfg, size_t n, const TrainConfig& base) {
  cfg.loss.batch_size = n;
  cfg.adam.lr = base.adam.lr * static_cast<double>(n) /
                static_cast<double>(base.loss.batch_size);
}

SweepRow run_point(const std::string& setting, TrainConfig cfg,
                   const Dataset& train_set, const Dataset& dev_set) {
  SweepRow row;
  row.setting = setting;
  row.cfg = cfg;
  try {
    TrainResult res = train(train_set, dev_set, cfg);
    row.dev_acoustic_ap = res.best_dev_acoustic_ap;
    row.dev_cross_ap = res.report.epochs[res.report.best_epoch].dev_cross_ap;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepGrid& grid, const TrainConfig& base,
                            const Dataset& train_set, const Dataset& dev_set) {
  if (grid.empty()) throw UsageError("sweep: empty grid");
  std::vector<SweepRow> rows;

  if (!grid.cartesian) {
    for (size_t l : grid.layers) {
      TrainConfig c = base;
      c.model.layers = l;
      rows.push_back(run_point("layers=" + std::to_string(l), c, train_set, dev_set));
    }
    for (size_t h : grid.hidden) {
      TrainConfig c = base;
      c.model.hidden = h;
      rows.push_back(run_point("hidden=" + std::to_string(h), c, train_set, dev_set));
    }
    for (double m : grid.margin) {
      TrainConfig c = base;
      c.loss.margin = m;
      rows.push_back(run_point("margin=" + std::to_string(m), c, train_set, dev_set));
    }
    for (size_t n : grid.batch) {
      TrainConfig c = base;
      apply_batch(c, n, base);
      rows.push_back(run_point("batch=" + std::to_string(n), c, train_set, dev_set));
    }
    for (double a : grid.alpha) {
      TrainConfig c = base;
      c.loss.alpha = a;
      rows.push_back(run_point("alpha=" + std::to_string(a), c, train_set, dev_set));
    }
  } else {
    auto or_base = [](auto values, auto base_value) {
      if (values.empty()) values.push_back(base_value);
      return values;
    };
    auto layers = or_base(grid.layers, base.model.layers);
    auto hidden = or_base(grid.hidden, base.model.hidden);
    auto margin = or_base(grid.margin, base.loss.margin);
    auto batch = or_base(grid.batch, base.loss.batch_size);
    auto alpha = or_base(grid.alpha, base.loss.alpha);
    for (size_t l : layers)
      for (size_t h : hidden)
        for (double m : margin)
          for (size_t n : batch)
            for (double a : alpha) {
              TrainConfig c = base;
              c.model.layers = l;
              c.model.hidden = h;
              c.loss.margin = m;
              apply_batch(c, n, base);
              c.loss.alpha = a;
              char buf[128];
              std::snprintf(buf, sizeof(buf),
                            "layers=%zu hidden=%zu margin=%g batch=%zu alpha=%g",
                            l, h, m, n, a);
              rows.push_back(run_point(buf, c, train_set, dev_set));
            }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.failed != b.failed) return !a.failed;
    return a.dev_acoustic_ap > b.dev_acoustic_ap;
  });
  return rows;
}

}  // namespace mvawe
