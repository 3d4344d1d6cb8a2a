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

#include "mvawe/sampling.hpp"

#include <numeric>

namespace mvawe {

TripletBatch sample_batch(const Dataset& dataset,
                          const std::vector<size_t>& batch_positions,
                          uint64_t rng_seed) {
  if (dataset.num_labels() < 2)
    throw ConfigError("sample_batch: dataset needs at least 2 distinct labels");
  if (batch_positions.empty())
    throw UsageError("sample_batch: empty batch positions");

  Rng rng(rng_seed);
  TripletBatch batch;
  batch.items.reserve(batch_positions.size());
  for (size_t pos : batch_positions) {
    if (pos >= dataset.size())
      throw UsageError("sample_batch: position out of range");
    TripletItem item;
    item.positive = pos;
    int pos_label = dataset.label_id(pos);
    // rejection sampling stays uniform over the differently-labeled records
    auto draw_other = [&]() {
      for (;;) {
        size_t idx = static_cast<size_t>(rng.below(dataset.size()));
        if (dataset.label_id(idx) != pos_label) return idx;
      }
    };
    item.negative_seg = draw_other();
    item.negative_lab = draw_other();
    batch.items.push_back(item);
  }
  return batch;
}

std::vector<std::vector<size_t>> epoch_schedule(size_t dataset_size, size_t n,
                                                uint64_t rng_seed) {
  if (n < 1) throw UsageError("epoch_schedule: batch size must be >= 1");
  std::vector<size_t> perm(dataset_size);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(rng_seed);
  // Fisher-Yates
  for (size_t i = dataset_size; i > 1; --i) {
    size_t j = static_cast<size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < dataset_size; start += n) {
    size_t end = std::min(start + n, dataset_size);
    batches.emplace_back(perm.begin() + start, perm.begin() + end);
  }
  return batches;
}

}  // namespace mvawe
