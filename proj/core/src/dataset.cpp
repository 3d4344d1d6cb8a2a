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

#include "mvawe/dataset.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace mvawe {

using nlohmann::json;

std::set<std::string> DatasetManifest::vocabulary() const {
  std::set<std::string> vocab;
  for (const auto& r : records) vocab.insert(r.word);
  return vocab;
}

namespace {

std::string manifest_path(const std::string& dir, const std::string& split) {
  return dir + "/" + split + ".manifest.json";
}
std::string feature_path(const std::string& dir, const std::string& split) {
  return dir + "/" + split + ".feat";
}

}  // namespace

Dataset Dataset::load(const std::string& dir, const std::string& split) {
  std::ifstream mf(manifest_path(dir, split));
  if (!mf) throw DataError("dataset: cannot open " + manifest_path(dir, split));
  json j;
  try {
    mf >> j;
  } catch (const json::exception& e) {
    throw DataError("dataset: bad manifest JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != std::string(kFeatureMagic, sizeof(kFeatureMagic)))
    throw DataError("dataset: unexpected manifest format field");

  Dataset ds;
  ds.manifest_.split = j.value("split", split);
  ds.manifest_.feature_checksum =
      std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);

  std::ifstream ff(feature_path(dir, split), std::ios::binary);
  if (!ff) throw DataError("dataset: cannot open " + feature_path(dir, split));
  ds.blob_.assign(std::istreambuf_iterator<char>(ff),
                  std::istreambuf_iterator<char>());
  if (ds.blob_.size() < sizeof(kFeatureMagic) ||
      std::memcmp(ds.blob_.data(), kFeatureMagic, sizeof(kFeatureMagic)) != 0)
    throw DataError("dataset: bad feature file magic");
  if (fnv1a64(ds.blob_.data(), ds.blob_.size()) != ds.manifest_.feature_checksum)
    throw DataError("dataset: feature file checksum mismatch for split " + split);

  uint64_t prev_end = sizeof(kFeatureMagic);
  std::set<std::string> source_ids;
  std::map<std::string, int> word_ids;
  for (const auto& rj : j.at("records")) {
    DatasetRecord r;
    r.word = rj.at("word").get<std::string>();
    r.offset = rj.at("offset").get<uint64_t>();
    r.num_frames = rj.at("frames").get<uint64_t>();
    r.source_id = rj.at("source_id").get<std::string>();

    NormalizedText norm = normalize_text(r.word);
    if (norm.words.size() != 1 || norm.words[0] != r.word)
      throw DataError("dataset: word fails normalization round-trip: '" + r.word +
                      "' (record " + r.source_id + ")");
    if (r.offset != prev_end)
      throw DataError("dataset: record offsets must be contiguous (record " +
                      r.source_id + ")");
    uint64_t bytes = r.num_frames * kFeatureDim * sizeof(float);
    if (r.offset + bytes > ds.blob_.size())
      throw DataError("dataset: record past end of feature file (record " +
                      r.source_id + ")");
    if (!source_ids.insert(r.source_id).second)
      throw DataError("dataset: duplicate source id " + r.source_id);
    prev_end = r.offset + bytes;

    auto [it, fresh] = word_ids.try_emplace(
        r.word, static_cast<int>(ds.id_to_word_.size()));
    if (fresh) ds.id_to_word_.push_back(r.word);
    ds.label_ids_.push_back(it->second);
    ds.labels_.push_back(one_hot_encode(r.word));
    ds.manifest_.records.push_back(std::move(r));
  }
  return ds;
}

AcousticSegment Dataset::segment(size_t i) const {
  const DatasetRecord& r = manifest_.records.at(i);
  AcousticSegment seg;
  seg.source_id = r.source_id;
  seg.frames = Tensor({static_cast<size_t>(r.num_frames), kFeatureDim});
  const char* p = blob_.data() + r.offset;
  for (size_t k = 0; k < seg.frames.numel(); ++k) {
    float f;
    std::memcpy(&f, p + k * sizeof(float), sizeof(float));
    seg.frames.data[k] = static_cast<double>(f);
  }
  seg.validate();
  return seg;
}

DatasetWriter::DatasetWriter(std::string dir, std::string split)
    : dir_(std::move(dir)), split_(std::move(split)) {
  manifest_.split = split_;
  blob_.assign(kFeatureMagic, kFeatureMagic + sizeof(kFeatureMagic));
}

void DatasetWriter::add(const std::string& word, const AcousticSegment& segment) {
  segment.validate();
  NormalizedText norm = normalize_text(word);
  if (norm.words.size() != 1 || norm.words[0] != word)
    throw DataError("dataset writer: word is not normalized: '" + word + "'");
  if (!seen_source_ids_.insert(segment.source_id).second)
    throw DataError("dataset writer: duplicate source id " + segment.source_id);

  DatasetRecord r;
  r.word = word;
  r.offset = blob_.size();
  r.num_frames = segment.num_frames();
  r.source_id = segment.source_id;
  for (double v : segment.frames.data) {
    float f = static_cast<float>(v);
    const char* p = reinterpret_cast<const char*>(&f);
    blob_.insert(blob_.end(), p, p + sizeof(float));
  }
  manifest_.records.push_back(std::move(r));
}

void DatasetWriter::finalize() {
  std::ofstream ff(feature_path(dir_, split_), std::ios::binary);
  if (!ff) throw DataError("dataset writer: cannot open " + feature_path(dir_, split_));
  ff.write(blob_.data(), static_cast<std::streamsize>(blob_.size()));
  if (!ff) throw DataError("dataset writer: feature write failed");
  ff.close();

  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(blob_.data(), blob_.size())));
  json j;
  j["format"] = std::string(kFeatureMagic, sizeof(kFeatureMagic));
  j["split"] = split_;
  j["checksum"] = std::string(buf);
  j["records"] = json::array();
  for (const auto& r : manifest_.records) {
    j["records"].push_back({{"word", r.word},
                            {"offset", r.offset},
                            {"frames", r.num_frames},
                            {"source_id", r.source_id}});
  }
  std::ofstream mf(manifest_path(dir_, split_));
  if (!mf) throw DataError("dataset writer: cannot open " + manifest_path(dir_, split_));
  mf << j.dump(2) << "\n";
  if (!mf) throw DataError("dataset writer: manifest write failed");
}

}  // namespace mvawe
