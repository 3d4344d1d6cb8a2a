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

#ifndef MVAWE_EVALUATION_HPP
#define MVAWE_EVALUATION_HPP

#include <set>
#include <string>
#include <vector>

#include "mvawe/dataset.hpp"
#include "mvawe/model.hpp"

namespace mvawe {

struct PRPoint {
  double threshold = 0.0;  // score cutoff (score = -cosine distance)
  double precision = 0.0;
  double recall = 0.0;
};

// Rank-based average precision with tie grouping: equal scores form one
// threshold group and every positive in the group contributes the precision
// computed after the whole group is included.  Equivalent to the area under
// the step-wise precision-recall curve swept over distinct thresholds.
double average_precision(const std::vector<double>& scores,
                         const std::vector<uint8_t>& is_match);

std::vector<PRPoint> precision_recall_curve(const std::vector<double>& scores,
                                            const std::vector<uint8_t>& is_match);

struct PairCounts {
  uint64_t matched = 0;
  uint64_t unmatched = 0;
  uint64_t total() const { return matched + unmatched; }
};
// Match/non-match decomposition of all n(n-1)/2 unordered pairs.
PairCounts pair_counts(const std::vector<int>& label_ids);

struct DiscriminationReport {
  double ap = 0.0;
  PairCounts counts;
  std::vector<PRPoint> curve;
};

// All unordered segment pairs scored by -cosine distance between acoustic
// embeddings.  Scoring streams in fixed-size blocks; block size never
// changes the result.
DiscriminationReport acoustic_ap_from_embeddings(
    const std::vector<Tensor>& embeddings, const std::vector<int>& label_ids,
    size_t block_size = 1 << 20);

// Every (segment, unique label text) combination scored by -cosine distance
// between f(x) and g(c).
DiscriminationReport cross_view_ap_from_embeddings(
    const std::vector<Tensor>& seg_embeddings, const std::vector<int>& seg_label_ids,
    const std::vector<Tensor>& text_embeddings);

// Embeddings for a whole dataset (eval mode, read-only params,
// data-parallel over `workers`, output order fixed by record index).
std::vector<Tensor> embed_dataset_acoustic(const Dataset& ds, const ParamSet& params,
                                           const ModelConfig& cfg, unsigned workers = 0);
// One embedding per unique label id, indexed by label id.
std::vector<Tensor> embed_dataset_text(const Dataset& ds, const ParamSet& params,
                                       const ModelConfig& cfg, unsigned workers = 0);

DiscriminationReport acoustic_word_discrimination(const Dataset& ds,
                                                  const ParamSet& params,
                                                  const ModelConfig& cfg,
                                                  unsigned workers = 0);
DiscriminationReport cross_view_discrimination(const Dataset& ds,
                                               const ParamSet& params,
                                               const ModelConfig& cfg,
                                               unsigned workers = 0);

// Levenshtein(hypothesis, reference) with unit costs.
size_t edit_distance(const std::string& a, const std::string& b);
// edit distance / reference length; empty reference is a usage error.
double cer(const std::string& hypothesis, const std::string& reference);

struct RecognitionRow {
  std::string source_id;
  std::string reference;
  std::string decoded;
  size_t distance = 0;
  bool in_vocabulary = false;
};

struct RecognitionReport {
  double iv_cer = 0.0;   // total edit distance / total reference length
  double oov_cer = 0.0;
  size_t iv_words = 0, oov_words = 0;
  std::vector<RecognitionRow> rows;
};

// Decodes every segment's acoustic embedding and scores corpus-level CER
// split by train-vocabulary membership.  With the end-of-word class the
// decoder stops itself (capped at max_decode_len); in strict-26 mode
// `use_reference_lengths` must be set.
RecognitionReport recognition_report(const Dataset& ds, const ParamSet& params,
                                     const ModelConfig& cfg,
                                     const std::set<std::string>& train_vocabulary,
                                     size_t max_decode_len = 32,
                                     bool use_reference_lengths = false,
                                     unsigned workers = 0);

}  // namespace mvawe

#endif  // MVAWE_EVALUATION_HPP
