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

#ifndef MVAWE_SAMPLING_HPP
#define MVAWE_SAMPLING_HPP

#include <vector>

#include "mvawe/dataset.hpp"

namespace mvawe {

// One training item: a positive (x+, c+) pair plus independently drawn
// negatives — a segment x- and a label c-, each from pairs labeled
// differently than the positive (and not necessarily from one pair).
struct TripletItem {
  size_t positive = 0;      // record index of (x+, c+)
  size_t negative_seg = 0;  // record index supplying x-
  size_t negative_lab = 0;  // record index supplying c-
};

struct TripletBatch {
  std::vector<TripletItem> items;
};

// Negatives drawn uniformly with replacement from all records whose label
// differs from the item's positive label.  Deterministic in (dataset order,
// positions, seed).
TripletBatch sample_batch(const Dataset& dataset,
                          const std::vector<size_t>& batch_positions,
                          uint64_t rng_seed);

// Seeded permutation of all record indices, chunked into ceil(size/n)
// batches; the final short batch is kept.
std::vector<std::vector<size_t>> epoch_schedule(size_t dataset_size, size_t n,
                                                uint64_t rng_seed);

}  // namespace mvawe

#endif  // MVAWE_SAMPLING_HPP
