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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mvawe/dataset.hpp"
#include "mvawe/synth.hpp"

using namespace mvawe;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
  std::string dir = (fs::temp_directory_path() / ("mvawe_ds_" + tag)).string();
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

AcousticSegment make_segment(Rng& rng, size_t frames, const std::string& id) {
  AcousticSegment seg;
  seg.frames = Tensor({frames, kFeatureDim});
  for (double& v : seg.frames.data) v = rng.normal();
  seg.source_id = id;
  return seg;
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  return std::vector<char>(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("write and load round-trips words, ids and frames") {
  std::string dir = temp_dir("roundtrip");
  Rng rng(3);
  std::vector<AcousticSegment> segs = {make_segment(rng, 5, "a0"),
                                       make_segment(rng, 2, "a1"),
                                       make_segment(rng, 9, "a2")};
  std::vector<std::string> words = {"alpha", "beta", "alpha"};
  {
    DatasetWriter w(dir, "dev");
    for (size_t i = 0; i < segs.size(); ++i) w.add(words[i], segs[i]);
    w.finalize();
  }
  Dataset ds = Dataset::load(dir, "dev");
  REQUIRE(ds.size() == 3);
  CHECK(ds.num_labels() == 2);
  CHECK(ds.label_id(0) == ds.label_id(2));
  CHECK(ds.label_id(0) != ds.label_id(1));
  for (size_t i = 0; i < 3; ++i) {
    CHECK(ds.word(i) == words[i]);
    AcousticSegment got = ds.segment(i);
    CHECK(got.source_id == segs[i].source_id);
    REQUIRE(got.frames.same_shape(segs[i].frames));
    // frames travel as little-endian float32; expect exactly that rounding
    for (size_t k = 0; k < got.frames.numel(); ++k)
      CHECK(got.frames.data[k] ==
            static_cast<double>(static_cast<float>(segs[i].frames.data[k])));
    // one-hot label matches the word
    CHECK(ds.label(i).text == words[i]);
    CHECK(ds.label(i).onehot.rows() == words[i].size());
  }
}

TEST_CASE("duplicate source ids are rejected") {
  std::string dir = temp_dir("dup");
  Rng rng(4);
  DatasetWriter w(dir, "train");
  w.add("cat", make_segment(rng, 3, "same"));
  CHECK_THROWS_AS(w.add("dog", make_segment(rng, 3, "same")), DataError);
}

TEST_CASE("words that fail the normalization round-trip are rejected") {
  std::string dir = temp_dir("badword");
  Rng rng(5);
  DatasetWriter w(dir, "train");
  CHECK_THROWS_AS(w.add("Cat!", make_segment(rng, 3, "x")), DataError);
  CHECK_THROWS_AS(w.add("", make_segment(rng, 3, "y")), DataError);
}

TEST_CASE("a corrupted feature blob fails the checksum") {
  std::string dir = temp_dir("corrupt");
  Rng rng(6);
  {
    DatasetWriter w(dir, "test");
    w.add("cat", make_segment(rng, 4, "r0"));
    w.add("dog", make_segment(rng, 4, "r1"));
    w.finalize();
  }
  std::string blob_path = dir + "/test.feat";
  std::vector<char> blob = slurp(blob_path);
  blob[blob.size() / 2] ^= 0x40;
  std::ofstream(blob_path, std::ios::binary).write(blob.data(), blob.size());
  CHECK_THROWS_AS(Dataset::load(dir, "test"), DataError);
}

TEST_CASE("a truncated feature blob is rejected") {
  std::string dir = temp_dir("trunc");
  Rng rng(7);
  {
    DatasetWriter w(dir, "test");
    w.add("cat", make_segment(rng, 4, "r0"));
    w.finalize();
  }
  std::string blob_path = dir + "/test.feat";
  std::vector<char> blob = slurp(blob_path);
  blob.resize(blob.size() - 16);
  std::ofstream(blob_path, std::ios::binary).write(blob.data(), blob.size());
  CHECK_THROWS_AS(Dataset::load(dir, "test"), DataError);
}

TEST_CASE("missing files are data errors") {
  CHECK_THROWS_AS(Dataset::load(temp_dir("missing"), "train"), DataError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("synth");

TEST_CASE("generation is byte-identical across runs") {
  SynthConfig cfg;
  cfg.vocab_size = 10;
  cfg.samples_per_word = 3;
  cfg.dev_samples_per_word = 2;
  cfg.test_samples_per_word = 2;
  cfg.seed = 99;
  std::string d1 = temp_dir("synth1"), d2 = temp_dir("synth2");
  generate_synthetic_corpus(cfg, d1);
  generate_synthetic_corpus(cfg, d2);
  for (const char* split : {"train", "dev", "test"}) {
    CHECK(slurp(d1 + "/" + split + ".feat") == slurp(d2 + "/" + split + ".feat"));
    CHECK(slurp(d1 + "/" + split + ".manifest.json") ==
          slurp(d2 + "/" + split + ".manifest.json"));
  }
}

TEST_CASE("record counts and the OOV holdout match the config") {
  SynthConfig cfg;
  cfg.vocab_size = 20;
  cfg.samples_per_word = 4;
  cfg.dev_samples_per_word = 2;
  cfg.test_samples_per_word = 1;
  cfg.oov_fraction = 0.1;  // 2 of 20 words held out of train
  cfg.seed = 5;
  std::string dir = temp_dir("synthcounts");
  SynthSummary s = generate_synthetic_corpus(cfg, dir);
  CHECK(s.vocabulary.size() == 20);
  CHECK(s.num_oov_words == 2);
  CHECK(s.train_records == 18 * 4);
  CHECK(s.dev_records == 20 * 2);
  CHECK(s.test_records == 20 * 1);

  Dataset train = Dataset::load(dir, "train");
  Dataset dev = Dataset::load(dir, "dev");
  auto train_vocab = train.manifest().vocabulary();
  CHECK(train_vocab.size() == 18);
  size_t dev_oov = 0;
  for (size_t i = 0; i < dev.size(); ++i)
    if (!train_vocab.count(dev.word(i))) ++dev_oov;
  CHECK(dev_oov == 2 * cfg.dev_samples_per_word);
}

TEST_CASE("same-word segments are closer than different-word segments") {
  SynthConfig cfg;
  cfg.vocab_size = 8;
  cfg.samples_per_word = 5;
  cfg.seed = 21;
  std::string dir = temp_dir("synthsim");
  generate_synthetic_corpus(cfg, dir);
  Dataset ds = Dataset::load(dir, "train");
  // compare mean-frame vectors with Euclidean distance
  std::vector<std::vector<double>> means(ds.size(), std::vector<double>(kFeatureDim, 0));
  for (size_t i = 0; i < ds.size(); ++i) {
    AcousticSegment seg = ds.segment(i);
    for (size_t t = 0; t < seg.num_frames(); ++t)
      for (size_t k = 0; k < kFeatureDim; ++k)
        means[i][k] += seg.frames.at(t, k) / seg.num_frames();
  }
  double intra = 0, inter = 0;
  size_t n_intra = 0, n_inter = 0;
  for (size_t i = 0; i < ds.size(); ++i) {
    for (size_t j = i + 1; j < ds.size(); ++j) {
      double d2 = 0;
      for (size_t k = 0; k < kFeatureDim; ++k) {
        double diff = means[i][k] - means[j][k];
        d2 += diff * diff;
      }
      if (ds.label_id(i) == ds.label_id(j)) {
        intra += std::sqrt(d2);
        ++n_intra;
      } else {
        inter += std::sqrt(d2);
        ++n_inter;
      }
    }
  }
  CHECK(intra / n_intra < inter / n_inter);
}

TEST_CASE("invalid configs are rejected") {
  SynthConfig cfg;
  cfg.vocab_size = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SynthConfig{};
  cfg.oov_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SynthConfig{};
  cfg.word_len_min = 9;
  cfg.word_len_max = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_SUITE_END();
