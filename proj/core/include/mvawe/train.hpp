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

#ifndef MVAWE_TRAIN_HPP
#define MVAWE_TRAIN_HPP

#include <string>
#include <vector>

#include "mvawe/adam.hpp"
#include "mvawe/dataset.hpp"
#include "mvawe/evaluation.hpp"
#include "mvawe/losses.hpp"
#include "mvawe/model.hpp"
#include "mvawe/sampling.hpp"

namespace mvawe {

struct TrainConfig {
  ModelConfig model;   // desk-scale default: L=2, H=64
  LossConfig loss;     // m=0.5, alpha=0.1, N
  AdamConfig adam;     // lr=1e-4, beta1=0.9, beta2=0.999, eps=1e-8
  size_t epochs = 30;
  uint64_t seed = 0;
  bool teacher_forcing = false;
  unsigned workers = 0;              // 0 = hardware concurrency
  size_t dev_max_pairs = 2000000;    // dev AP subsample cap
  size_t max_decode_len = 32;

  void validate() const;
  std::string to_json() const;
  static TrainConfig from_json(const std::string& text);
  static TrainConfig from_json_file(const std::string& path);

  // Tuned values from the full-scale setup: L=3, H=512, m=0.5, N=256,
  // alpha=0.1.  Not desk-runnable; provided for completeness.
  static TrainConfig tuned_preset();
  // Desk-scale preset: L=2, H=64, N=32.
  static TrainConfig desk_preset();
};

struct EpochRecord {
  double train_loss = 0.0;  // summed over items, Eq-style
  double dev_acoustic_ap = 0.0;
  double dev_cross_ap = 0.0;
  double wall_time_s = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  size_t best_epoch = 0;  // argmax of dev acoustic AP

  // wall time is excluded when comparing runs for determinism
  std::string to_json(bool include_wall_time = true) const;
  void write_csv(const std::string& path) const;
};

struct TrainResult {
  ParamSet best_params;
  TrainReport report;
  double best_dev_acoustic_ap = 0.0;
};

// One batch worth of gradients (no update).  Deterministic in
// (params, batch, dropout_seed) regardless of worker count: per-item
// dropout streams are derived from the item index and gradients reduce in
// item order.
struct BatchGradResult {
  ParamSet grads;
  double loss = 0.0;
  double triplet = 0.0;
  double decoding = 0.0;
};
BatchGradResult compute_batch_gradients(const Dataset& train_set,
                                        const TripletBatch& batch,
                                        const ParamSet& params,
                                        const TrainConfig& cfg,
                                        uint64_t dropout_seed);

TrainResult train(const Dataset& train_set, const Dataset& dev_set,
                  const TrainConfig& cfg);

// --- coarse grid sweep ------------------------------------------------------

struct SweepGrid {
  bool cartesian = false;  // coordinate-wise by default
  std::vector<size_t> layers, hidden, batch;
  std::vector<double> margin, alpha;

  bool empty() const {
    return layers.empty() && hidden.empty() && batch.empty() &&
           margin.empty() && alpha.empty();
  }
  static SweepGrid from_json_file(const std::string& path);
};

struct SweepRow {
  std::string setting;  // e.g. "alpha=0.1"
  TrainConfig cfg;
  double dev_acoustic_ap = 0.0;
  double dev_cross_ap = 0.0;
  bool failed = false;
  std::string error;
};

// One run per coordinate-wise variation (or the full product in cartesian
// mode), sorted by dev acoustic AP descending.  The learning rate is
// calibrated against the base batch size and rescales linearly when a grid
// point changes N.  Per-run failures are recorded and the sweep continues.
std::vector<SweepRow> sweep(const SweepGrid& grid, const TrainConfig& base,
                            const Dataset& train_set, const Dataset& dev_set);

}  // namespace mvawe

#endif  // MVAWE_TRAIN_HPP
