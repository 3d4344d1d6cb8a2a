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

#ifndef MVAWE_DATASET_HPP
#define MVAWE_DATASET_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mvawe/features.hpp"

namespace mvawe {

// One (word, segment) record.  Offsets address the split's feature blob,
// which stores the record's T x 40 frames as little-endian 32-bit floats.
struct DatasetRecord {
  std::string word;
  uint64_t offset = 0;  // byte offset into the feature file
  uint64_t num_frames = 0;
  std::string source_id;
};

struct DatasetManifest {
  std::string split;
  std::vector<DatasetRecord> records;
  uint64_t feature_checksum = 0;  // FNV-1a over the feature file

  std::set<std::string> vocabulary() const;
};

// Loaded split: validated manifest plus readable segments.  Read-only after
// load; safe for concurrent readers.
class Dataset {
 public:
  // Expects <dir>/<split>.manifest.json and <dir>/<split>.feat.
  static Dataset load(const std::string& dir, const std::string& split);

  const DatasetManifest& manifest() const { return manifest_; }
  size_t size() const { return manifest_.records.size(); }
  const std::string& word(size_t i) const { return manifest_.records[i].word; }
  // Interned label id: equal text <=> equal id.
  int label_id(size_t i) const { return label_ids_[i]; }
  size_t num_labels() const { return id_to_word_.size(); }
  const std::string& label_text(int id) const { return id_to_word_[id]; }

  AcousticSegment segment(size_t i) const;
  const TextLabel& label(size_t i) const { return labels_[i]; }

 private:
  DatasetManifest manifest_;
  std::vector<char> blob_;
  std::vector<TextLabel> labels_;
  std::vector<int> label_ids_;
  std::vector<std::string> id_to_word_;
};

// Streams records into a feature blob + manifest pair.
class DatasetWriter {
 public:
  DatasetWriter(std::string dir, std::string split);
  void add(const std::string& word, const AcousticSegment& segment);
  // Writes the manifest; the writer must not be reused afterwards.
  void finalize();

 private:
  std::string dir_, split_;
  DatasetManifest manifest_;
  std::vector<char> blob_;
  std::set<std::string> seen_source_ids_;
};

inline constexpr char kFeatureMagic[6] = {'M', 'V', 'A', 'W', 'D', '1'};

}  // namespace mvawe

#endif  // MVAWE_DATASET_HPP
