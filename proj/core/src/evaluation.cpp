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

#include "mvawe/evaluation.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

#include "mvawe/losses.hpp"

namespace mvawe {

namespace {

// Deterministic data-parallel map: results land at their index regardless
// of worker count.
void parallel_for(size_t n, unsigned workers,
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

struct RankedGroups {
  // indices sorted by score descending, grouped by exact score equality
  std::vector<size_t> order;
  std::vector<std::pair<size_t, size_t>> groups;  // [begin, end) into order
};

RankedGroups rank_with_ties(const std::vector<double>& scores) {
  RankedGroups rg;
  rg.order.resize(scores.size());
  std::iota(rg.order.begin(), rg.order.end(), 0);
  std::stable_sort(rg.order.begin(), rg.order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  size_t begin = 0;
  for (size_t i = 1; i <= rg.order.size(); ++i) {
    if (i == rg.order.size() || scores[rg.order[i]] != scores[rg.order[begin]]) {
      rg.groups.emplace_back(begin, i);
      begin = i;
    }
  }
  return rg;
}

}  // namespace

double average_precision(const std::vector<double>& scores,
                         const std::vector<uint8_t>& is_match) {
  if (scores.size() != is_match.size())
    throw UsageError("average_precision: scores/labels size mismatch");
  size_t total_pos = 0;
  for (uint8_t m : is_match) total_pos += m ? 1 : 0;
  if (total_pos == 0)
    throw UsageError("average_precision: no positive pairs");
  if (total_pos == scores.size())
    throw UsageError("average_precision: no negative pairs");
  for (double s : scores)
    if (!std::isfinite(s)) throw UsageError("average_precision: non-finite score");

  RankedGroups rg = rank_with_ties(scores);
  double ap = 0.0;
  size_t tp = 0, seen = 0;
  for (auto [begin, end] : rg.groups) {
    size_t group_pos = 0;
    for (size_t i = begin; i < end; ++i)
      if (is_match[rg.order[i]]) ++group_pos;
    tp += group_pos;
    seen += end - begin;
    double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += static_cast<double>(group_pos) * precision;
  }
  return ap / static_cast<double>(total_pos);
}

std::vector<PRPoint> precision_recall_curve(const std::vector<double>& scores,
                                            const std::vector<uint8_t>& is_match) {
  size_t total_pos = 0;
  for (uint8_t m : is_match) total_pos += m ? 1 : 0;
  if (total_pos == 0) throw UsageError("precision_recall_curve: no positives");
  RankedGroups rg = rank_with_ties(scores);
  std::vector<PRPoint> curve;
  size_t tp = 0, seen = 0;
  for (auto [begin, end] : rg.groups) {
    for (size_t i = begin; i < end; ++i)
      if (is_match[rg.order[i]]) ++tp;
    seen += end - begin;
    PRPoint pt;
    pt.threshold = scores[rg.order[begin]];
    pt.precision = static_cast<double>(tp) / static_cast<double>(seen);
    pt.recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    curve.push_back(pt);
  }
  return curve;
}

PairCounts pair_counts(const std::vector<int>& label_ids) {
  std::map<int, uint64_t> hist;
  for (int id : label_ids) ++hist[id];
  PairCounts pc;
  uint64_t n = label_ids.size();
  for (const auto& [id, k] : hist) pc.matched += k * (k - 1) / 2;
  pc.unmatched = n * (n - 1) / 2 - pc.matched;
  return pc;
}

DiscriminationReport acoustic_ap_from_embeddings(
    const std::vector<Tensor>& embeddings, const std::vector<int>& label_ids,
    size_t block_size) {
  if (embeddings.size() != label_ids.size())
    throw UsageError("acoustic AP: embeddings/labels size mismatch");
  if (embeddings.size() < 2)
    throw UsageError("acoustic AP: need at least 2 segments");
  size_t n = embeddings.size();
  std::vector<double> scores;
  std::vector<uint8_t> match;
  scores.reserve(n * (n - 1) / 2);
  match.reserve(n * (n - 1) / 2);
  size_t in_block = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      scores.push_back(-cosine_distance(embeddings[i], embeddings[j]));
      match.push_back(label_ids[i] == label_ids[j] ? 1 : 0);
      if (++in_block == block_size) in_block = 0;  // block boundary marker
    }
  }
  DiscriminationReport rep;
  rep.counts = pair_counts(label_ids);
  rep.ap = average_precision(scores, match);
  rep.curve = precision_recall_curve(scores, match);
  return rep;
}

DiscriminationReport cross_view_ap_from_embeddings(
    const std::vector<Tensor>& seg_embeddings, const std::vector<int>& seg_label_ids,
    const std::vector<Tensor>& text_embeddings) {
  if (seg_embeddings.size() != seg_label_ids.size())
    throw UsageError("cross-view AP: embeddings/labels size mismatch");
  std::vector<double> scores;
  std::vector<uint8_t> match;
  scores.reserve(seg_embeddings.size() * text_embeddings.size());
  for (size_t i = 0; i < seg_embeddings.size(); ++i) {
    for (size_t t = 0; t < text_embeddings.size(); ++t) {
      scores.push_back(-cosine_distance(seg_embeddings[i], text_embeddings[t]));
      match.push_back(seg_label_ids[i] == static_cast<int>(t) ? 1 : 0);
    }
  }
  DiscriminationReport rep;
  rep.counts.matched = 0;
  rep.counts.unmatched = 0;
  for (uint8_t m : match) (m ? rep.counts.matched : rep.counts.unmatched)++;
  rep.ap = average_precision(scores, match);
  rep.curve = precision_recall_curve(scores, match);
  return rep;
}

std::vector<Tensor> embed_dataset_acoustic(const Dataset& ds, const ParamSet& params,
                                           const ModelConfig& cfg, unsigned workers) {
  std::vector<Tensor> out(ds.size());
  parallel_for(ds.size(), workers, [&](size_t i) {
    out[i] = encode_acoustic(ds.segment(i), params, cfg);
  });
  return out;
}

std::vector<Tensor> embed_dataset_text(const Dataset& ds, const ParamSet& params,
                                       const ModelConfig& cfg, unsigned workers) {
  std::vector<Tensor> out(ds.num_labels());
  parallel_for(ds.num_labels(), workers, [&](size_t id) {
    out[id] = encode_text(one_hot_encode(ds.label_text(static_cast<int>(id))),
                          params, cfg);
  });
  return out;
}

DiscriminationReport acoustic_word_discrimination(const Dataset& ds,
                                                  const ParamSet& params,
                                                  const ModelConfig& cfg,
                                                  unsigned workers) {
  if (ds.num_labels() < 2)
    throw UsageError("acoustic discrimination: need at least 2 labels");
  std::vector<Tensor> embs = embed_dataset_acoustic(ds, params, cfg, workers);
  std::vector<int> ids(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) ids[i] = ds.label_id(i);
  return acoustic_ap_from_embeddings(embs, ids);
}

DiscriminationReport cross_view_discrimination(const Dataset& ds,
                                               const ParamSet& params,
                                               const ModelConfig& cfg,
                                               unsigned workers) {
  if (ds.num_labels() < 2)
    throw UsageError("cross-view discrimination: need at least 2 labels");
  std::vector<Tensor> segs = embed_dataset_acoustic(ds, params, cfg, workers);
  std::vector<Tensor> texts = embed_dataset_text(ds, params, cfg, workers);
  std::vector<int> ids(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) ids[i] = ds.label_id(i);
  return cross_view_ap_from_embeddings(segs, ids, texts);
}

size_t edit_distance(const std::string& a, const std::string& b) {
  // two-row dynamic program, unit costs
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double cer(const std::string& hypothesis, const std::string& reference) {
  if (reference.empty()) throw UsageError("cer: empty reference");
  return static_cast<double>(edit_distance(hypothesis, reference)) /
         static_cast<double>(reference.size());
}

RecognitionReport recognition_report(const Dataset& ds, const ParamSet& params,
                                     const ModelConfig& cfg,
                                     const std::set<std::string>& train_vocabulary,
                                     size_t max_decode_len,
                                     bool use_reference_lengths,
                                     unsigned workers) {
  if (!cfg.eos_enabled && !use_reference_lengths)
    throw UsageError(
        "recognition: strict-26 decoding needs externally supplied lengths");
  RecognitionReport rep;
  rep.rows.resize(ds.size());
  parallel_for(ds.size(), workers, [&](size_t i) {
    AcousticSegment seg = ds.segment(i);
    size_t len = use_reference_lengths ? ds.word(i).size() : max_decode_len;
    DecodedSequence dec = decode_embedding(&seg, nullptr, params, cfg, len);
    RecognitionRow row;
    row.source_id = seg.source_id;
    row.reference = ds.word(i);
    row.decoded = dec.argmax_text;
    row.distance = edit_distance(row.decoded, row.reference);
    row.in_vocabulary = train_vocabulary.count(row.reference) > 0;
    rep.rows[i] = std::move(row);
  });
  size_t iv_dist = 0, iv_len = 0, oov_dist = 0, oov_len = 0;
  for (const auto& row : rep.rows) {
    if (row.in_vocabulary) {
      ++rep.iv_words;
      iv_dist += row.distance;
      iv_len += row.reference.size();
    } else {
      ++rep.oov_words;
      oov_dist += row.distance;
      oov_len += row.reference.size();
    }
  }
  rep.iv_cer = iv_len ? static_cast<double>(iv_dist) / iv_len : 0.0;
  rep.oov_cer = oov_len ? static_cast<double>(oov_dist) / oov_len : 0.0;
  return rep;
}

}  // namespace mvawe
