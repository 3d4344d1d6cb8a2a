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
//
// Drives the installed CLI binary end to end.  The binary path comes from
// the MVAWE_CLI environment variable (set by the ctest registration).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mvawe/evaluation.hpp"
#include "mvawe/wav.hpp"

using namespace mvawe;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() {
  const char* p = std::getenv("MVAWE_CLI");
  REQUIRE_MESSAGE(p != nullptr, "MVAWE_CLI must point at the mvawe binary");
  return p;
}

int run(const std::string& args) {
  int rc = std::system((cli() + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string base_dir() {
  static std::string dir = [] {
    std::string d = (fs::temp_directory_path() / "mvawe_cli_tests").string();
    fs::remove_all(d);
    fs::create_directories(d);
    std::ofstream(d + "/synth.json")
        << R"({"vocab_size": 6, "samples_per_word": 4, "dev_samples_per_word": 2,
               "test_samples_per_word": 2, "oov_fraction": 0.2, "seed": 5})";
    std::ofstream(d + "/train.json")
        << R"({"layers": 1, "hidden": 8, "batch_size": 8, "epochs": 2, "seed": 1})";
    return d;
  }();
  return dir;
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  return std::vector<char>(std::istreambuf_iterator<char>(is), {});
}

// Shared tiny run: gen-data + train once, reused by the later cases.
struct Workspace {
  std::string data, run;
  Workspace() {
    data = base_dir() + "/data";
    run = base_dir() + "/run";
    REQUIRE(::run("gen-data --config " + base_dir() + "/synth.json --out " + data) == 0);
    REQUIRE(::run("train --config " + base_dir() + "/train.json --data " + data +
                  " --out " + run) == 0);
  }
};

const Workspace& ws() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("bad usage exits 2, missing data exits 3") {
  CHECK(run("definitely-not-a-subcommand") == 2);
  CHECK(run("train --data /nonexistent") == 2);  // missing required --out
  CHECK(run("train --data /nonexistent --out " + base_dir() + "/x") == 3);
  CHECK(run("eval --task acoustic --model /nonexistent --data " + ws().data +
            " --out " + base_dir() + "/r.json") == 3);
  CHECK(run("eval --task bogus --model " + ws().run + "/checkpoint.mvawe --data " +
            ws().data + " --out " + base_dir() + "/r.json") == 2);

  // configs with unknown keys are rejected, not silently ignored
  std::ofstream(base_dir() + "/badtrain.json") << R"({"hidden": 8, "lerning_rate": 0.1})";
  CHECK(run("train --config " + base_dir() + "/badtrain.json --data " + ws().data +
            " --out " + base_dir() + "/y") == 2);
  std::ofstream(base_dir() + "/badsynth.json") << R"({"vocab_sz": 6})";
  CHECK(run("gen-data --config " + base_dir() + "/badsynth.json --out " +
            base_dir() + "/z") == 2);
}

TEST_CASE("gen-data is byte-identical on repeat runs") {
  std::string d2 = base_dir() + "/data2";
  REQUIRE(run("gen-data --config " + base_dir() + "/synth.json --out " + d2) == 0);
  for (const char* split : {"train", "dev", "test"}) {
    CHECK(slurp(ws().data + "/" + split + ".feat") ==
          slurp(d2 + "/" + split + ".feat"));
    CHECK(slurp(ws().data + "/" + split + ".manifest.json") ==
          slurp(d2 + "/" + split + ".manifest.json"));
  }
}

TEST_CASE("train writes checkpoint, sidecar, reports and provenance log") {
  CHECK(fs::exists(ws().run + "/checkpoint.mvawe"));
  CHECK(fs::exists(ws().run + "/checkpoint.mvawe.json"));
  CHECK(fs::exists(ws().run + "/report.json"));
  CHECK(fs::exists(ws().run + "/curves.csv"));
  json prov = json::parse(std::ifstream(ws().run + "/run_config.json"))["provenance"];
  CHECK(prov["seed"] == "file");
  CHECK(prov["alpha"] == "file");

  // flag overrides are recorded as such
  std::string r2 = base_dir() + "/run2";
  REQUIRE(run("train --config " + base_dir() + "/train.json --data " + ws().data +
              " --out " + r2 + " --seed 7 --epochs 1") == 0);
  json prov2 = json::parse(std::ifstream(r2 + "/run_config.json"))["provenance"];
  CHECK(prov2["seed"] == "flag");
  CHECK(prov2["epochs"] == "flag");
  CHECK(prov2["alpha"] == "file");
}

TEST_CASE("repeat training runs produce identical checkpoints") {
  std::string r3 = base_dir() + "/run3";
  REQUIRE(run("train --config " + base_dir() + "/train.json --data " + ws().data +
              " --out " + r3) == 0);
  CHECK(slurp(ws().run + "/checkpoint.mvawe") == slurp(r3 + "/checkpoint.mvawe"));
}

TEST_CASE("embed then eval from file equals eval computed in-process") {
  std::string emb_path = base_dir() + "/segs.emb";
  REQUIRE(run("embed --model " + ws().run + "/checkpoint.mvawe --data " + ws().data +
              " --split test --view acoustic --out " + emb_path) == 0);
  std::string rep_path = base_dir() + "/acoustic.json";
  REQUIRE(run("eval --task acoustic --model " + ws().run + "/checkpoint.mvawe" +
              " --data " + ws().data + " --split test --out " + rep_path) == 0);

  // recompute the AP from the embeddings file alone
  ParamSet embs = load_checkpoint(emb_path);
  Dataset ds = Dataset::load(ws().data, "test");
  REQUIRE(embs.size() == ds.size());  // one vector per record
  std::vector<Tensor> vecs;
  std::vector<int> ids;
  for (size_t i = 0; i < ds.size(); ++i) {
    vecs.push_back(embs.at(ds.manifest().records[i].source_id));
    ids.push_back(ds.label_id(i));
  }
  double file_ap = acoustic_ap_from_embeddings(vecs, ids).ap;
  double report_ap = json::parse(std::ifstream(rep_path))["ap"].get<double>();
  CHECK(std::abs(file_ap - report_ap) < 1e-12);
  CHECK(fs::exists(base_dir() + "/acoustic.pr.csv"));  // PR-curve sidecar
}

TEST_CASE("text view writes one vector per unique word") {
  std::string emb_path = base_dir() + "/words.emb";
  REQUIRE(run("embed --model " + ws().run + "/checkpoint.mvawe --data " + ws().data +
              " --split test --view text --out " + emb_path) == 0);
  ParamSet embs = load_checkpoint(emb_path);
  Dataset ds = Dataset::load(ws().data, "test");
  CHECK(embs.size() == ds.num_labels());
  for (size_t id = 0; id < ds.num_labels(); ++id)
    CHECK(embs.count(ds.label_text(static_cast<int>(id))) == 1);
}

TEST_CASE("decode writes a (decoded, reference) table plus CER splits") {
  std::string out = base_dir() + "/dec";
  REQUIRE(run("decode --model " + ws().run + "/checkpoint.mvawe --data " + ws().data +
              " --split test --out " + out) == 0);
  std::ifstream table(out + "/decodes.csv");
  REQUIRE(table);
  std::string header;
  std::getline(table, header);
  CHECK(header == "decoded,reference");
  json cer = json::parse(std::ifstream(out + "/cer.json"));
  CHECK(cer.contains("iv_cer"));
  CHECK(cer.contains("oov_cer"));
  CHECK(cer["iv_words"].get<size_t>() + cer["oov_words"].get<size_t>() ==
        Dataset::load(ws().data, "test").size());
}

TEST_CASE("featurize builds a loadable dataset from WAV plus segments") {
  std::string wav_dir = base_dir() + "/wav";
  fs::create_directories(wav_dir);
  const int sr = 16000;
  std::vector<double> samples(sr * 2);
  for (size_t i = 0; i < samples.size(); ++i)
    samples[i] = 0.4 * std::sin(2.0 * M_PI * 300.0 * i / sr) +
                 0.2 * std::sin(2.0 * M_PI * 1200.0 * i / sr);
  write_wav(wav_dir + "/utt1.wav", samples, sr);
  std::ofstream(base_dir() + "/segments.txt")
      << "utt1 Hello 0.0 0.8\n"
      << "utt1 world 0.9 1.7\n"
      << "utt1 !!! 1.7 1.9\n";  // normalizes to nothing -> skipped
  std::string out = base_dir() + "/featdata";
  REQUIRE(run("featurize --in " + wav_dir + " --align " + base_dir() +
              "/segments.txt --out " + out + " --split train") == 0);
  Dataset ds = Dataset::load(out, "train");
  REQUIRE(ds.size() == 2);
  CHECK(ds.word(0) == "hello");
  CHECK(ds.word(1) == "world");
  CHECK(ds.segment(0).frames.shape[0] == mel_num_frames(static_cast<size_t>(0.8 * sr), sr));
}

TEST_SUITE_END();
