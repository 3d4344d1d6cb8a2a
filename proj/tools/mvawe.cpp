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
// mvawe: multi-view acoustic/text word embedding toolkit.
//
// Subcommands: gen-data, featurize, train, sweep, eval, embed, decode.
// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 numerical
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvawe/evaluation.hpp"
#include "mvawe/synth.hpp"
#include "mvawe/train.hpp"
#include "mvawe/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mvawe;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path);
  os << text;
}

void write_pr_csv(const std::string& path, const std::vector<PRPoint>& curve) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path);
  os << "threshold,precision,recall\n";
  for (const auto& p : curve) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold,
                  p.precision, p.recall);
    os << buf;
  }
}

// ---------------------------------------------------------------------------

int cmd_gen_data(const std::string& config_path, const std::string& out_dir) {
  SynthConfig cfg = synth_config_from_json_file(config_path);
  fs::create_directories(out_dir);
  SynthSummary s = generate_synthetic_corpus(cfg, out_dir);
  std::cout << "generated corpus: " << s.vocabulary.size() << " words ("
            << s.num_oov_words << " OOV), train/dev/test records "
            << s.train_records << "/" << s.dev_records << "/" << s.test_records
            << "\n";
  return 0;
}

int cmd_featurize(const std::string& wav_dir, const std::string& align_path,
                  const std::string& out_dir, const std::string& split) {
  std::ifstream is(align_path);
  if (!is) throw DataError("featurize: cannot open segments file " + align_path);
  fs::create_directories(out_dir);
  DatasetWriter writer(out_dir, split);
  std::string line;
  size_t line_no = 0, kept = 0, dropped = 0;
  std::map<std::string, WavData> wav_cache;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string utt_id, word;
    double start = 0, end = 0;
    if (!(ls >> utt_id >> word >> start >> end) || end <= start)
      throw DataError("featurize: bad segments line " + std::to_string(line_no));
    NormalizedText norm = normalize_text(word);
    if (norm.words.size() != 1) {
      ++dropped;
      std::cerr << "warning: line " << line_no << ": '" << word
                << "' does not normalize to one word, skipped\n";
      continue;
    }
    auto it = wav_cache.find(utt_id);
    if (it == wav_cache.end())
      it = wav_cache.emplace(utt_id, read_wav(wav_dir + "/" + utt_id + ".wav")).first;
    const WavData& wav = it->second;
    auto clamp_idx = [&](double sec) {
      double idx = sec * wav.sample_rate_hz;
      return std::min(wav.samples.size(), static_cast<size_t>(std::max(0.0, idx)));
    };
    size_t s0 = clamp_idx(start), s1 = clamp_idx(end);
    if (s1 <= s0) throw DataError("featurize: empty segment at line " +
                                  std::to_string(line_no));
    std::vector<double> cut(wav.samples.begin() + s0, wav.samples.begin() + s1);
    char sid[160];
    std::snprintf(sid, sizeof(sid), "%s:%zu", utt_id.c_str(), line_no);
    writer.add(norm.words[0], mel_filterbank(cut, wav.sample_rate_hz, sid));
    ++kept;
  }
  writer.finalize();
  std::cout << "featurized " << kept << " segments into " << out_dir << "/"
            << split << " (" << dropped << " dropped)\n";
  return 0;
}

struct TrainOverrides {
  std::optional<uint64_t> seed;
  std::optional<double> alpha;
  std::optional<size_t> epochs, batch_size;
  std::optional<unsigned> workers;
};

TrainConfig merged_config(const std::string& config_path, const TrainOverrides& ov,
                          json* provenance) {
  TrainConfig cfg = config_path.empty() ? TrainConfig::desk_preset()
                                        : TrainConfig::from_json_file(config_path);
  json prov;
  auto mark = [&](const char* key, bool from_flag) {
    prov[key] = from_flag ? "flag" : "file";
  };
  mark("seed", ov.seed.has_value());
  mark("alpha", ov.alpha.has_value());
  mark("epochs", ov.epochs.has_value());
  mark("batch_size", ov.batch_size.has_value());
  mark("workers", ov.workers.has_value());
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.alpha) cfg.loss.alpha = *ov.alpha;
  if (ov.epochs) cfg.epochs = *ov.epochs;
  if (ov.batch_size) cfg.loss.batch_size = *ov.batch_size;
  if (ov.workers) cfg.workers = *ov.workers;
  cfg.validate();
  if (provenance) *provenance = prov;
  return cfg;
}

int cmd_train(const std::string& config_path, const std::string& data_dir,
              const std::string& out_dir, const TrainOverrides& ov) {
  json prov;
  TrainConfig cfg = merged_config(config_path, ov, &prov);
  Dataset train_set = Dataset::load(data_dir, "train");
  Dataset dev_set = Dataset::load(data_dir, "dev");
  fs::create_directories(out_dir);

  json run_log = json::parse(cfg.to_json());
  run_log["provenance"] = prov;
  write_text(out_dir + "/run_config.json", run_log.dump(2) + "\n");

  TrainResult res = train(train_set, dev_set, cfg);

  std::string ckpt = out_dir + "/checkpoint.mvawe";
  save_checkpoint(ckpt, res.best_params);
  cfg.model.save_sidecar(ckpt);
  write_text(out_dir + "/report.json", res.report.to_json() + "\n");
  res.report.write_csv(out_dir + "/curves.csv");
  std::cout << "best epoch " << res.report.best_epoch << " dev acoustic AP "
            << res.best_dev_acoustic_ap << "\n";
  return 0;
}

int cmd_sweep(const std::string& grid_path, const std::string& config_path,
              const std::string& data_dir, const std::string& out_dir,
              const TrainOverrides& ov) {
  TrainConfig base = merged_config(config_path, ov, nullptr);
  SweepGrid grid = SweepGrid::from_json_file(grid_path);
  Dataset train_set = Dataset::load(data_dir, "train");
  Dataset dev_set = Dataset::load(data_dir, "dev");
  fs::create_directories(out_dir);

  std::vector<SweepRow> rows = sweep(grid, base, train_set, dev_set);
  json j = json::array();
  for (const auto& r : rows) {
    json rj;
    rj["setting"] = r.setting;
    rj["dev_acoustic_ap"] = r.dev_acoustic_ap;
    rj["dev_cross_ap"] = r.dev_cross_ap;
    rj["failed"] = r.failed;
    if (r.failed) rj["error"] = r.error;
    j.push_back(rj);
    std::cout << r.setting << "  dev_ap="
              << (r.failed ? std::string("FAILED: ") + r.error
                           : std::to_string(r.dev_acoustic_ap))
              << "\n";
  }
  write_text(out_dir + "/sweep.json", j.dump(2) + "\n");
  return 0;
}

int cmd_eval(const std::string& task, const std::string& model_path,
             const std::string& data_dir, const std::string& split,
             const std::string& out_path, bool ref_lengths, unsigned workers) {
  ParamSet params = load_checkpoint(model_path);
  ModelConfig cfg = ModelConfig::load_sidecar(model_path);
  Dataset ds = Dataset::load(data_dir, split);

  json j;
  j["task"] = task;
  j["split"] = split;
  if (task == "acoustic" || task == "cross") {
    DiscriminationReport rep =
        task == "acoustic" ? acoustic_word_discrimination(ds, params, cfg, workers)
                           : cross_view_discrimination(ds, params, cfg, workers);
    j["ap"] = rep.ap;
    j["matched_pairs"] = rep.counts.matched;
    j["unmatched_pairs"] = rep.counts.unmatched;
    std::string csv = out_path.substr(0, out_path.find_last_of('.')) + ".pr.csv";
    write_pr_csv(csv, rep.curve);
    j["pr_curve_csv"] = csv;
    std::cout << task << " AP " << rep.ap << " (" << rep.counts.matched
              << " matched / " << rep.counts.unmatched << " unmatched)\n";
  } else if (task == "recognition") {
    Dataset train_set = Dataset::load(data_dir, "train");
    RecognitionReport rep =
        recognition_report(ds, params, cfg, train_set.manifest().vocabulary(),
                           32, ref_lengths, workers);
    j["iv_cer"] = rep.iv_cer;
    j["oov_cer"] = rep.oov_cer;
    j["iv_words"] = rep.iv_words;
    j["oov_words"] = rep.oov_words;
    std::cout << "IV CER " << rep.iv_cer << " (" << rep.iv_words
              << " words), OOV CER " << rep.oov_cer << " (" << rep.oov_words
              << " words)\n";
  } else {
    throw UsageError("eval: unknown task " + task);
  }
  write_text(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_embed(const std::string& model_path, const std::string& data_dir,
              const std::string& split, const std::string& view,
              const std::string& out_path, unsigned workers) {
  ParamSet params = load_checkpoint(model_path);
  ModelConfig cfg = ModelConfig::load_sidecar(model_path);
  Dataset ds = Dataset::load(data_dir, split);

  // embeddings are stored in the same container format as checkpoints,
  // keyed by record source id (acoustic) or unique word (text)
  ParamSet out;
  if (view == "acoustic") {
    std::vector<Tensor> embs = embed_dataset_acoustic(ds, params, cfg, workers);
    for (size_t i = 0; i < ds.size(); ++i)
      out.emplace(ds.manifest().records[i].source_id, std::move(embs[i]));
  } else if (view == "text") {
    std::vector<Tensor> embs = embed_dataset_text(ds, params, cfg, workers);
    for (size_t id = 0; id < embs.size(); ++id)
      out.emplace(ds.label_text(static_cast<int>(id)), std::move(embs[id]));
  } else {
    throw UsageError("embed: view must be 'acoustic' or 'text'");
  }
  save_checkpoint(out_path, out);
  std::cout << "wrote " << out.size() << " " << view << " embeddings to "
            << out_path << "\n";
  return 0;
}

int cmd_decode(const std::string& model_path, const std::string& data_dir,
               const std::string& split, const std::string& out_dir,
               bool ref_lengths, unsigned workers) {
  ParamSet params = load_checkpoint(model_path);
  ModelConfig cfg = ModelConfig::load_sidecar(model_path);
  Dataset ds = Dataset::load(data_dir, split);
  Dataset train_set = Dataset::load(data_dir, "train");
  fs::create_directories(out_dir);

  RecognitionReport rep =
      recognition_report(ds, params, cfg, train_set.manifest().vocabulary(), 32,
                         ref_lengths, workers);
  std::ofstream os(out_dir + "/decodes.csv");
  if (!os) throw DataError("decode: cannot write " + out_dir + "/decodes.csv");
  os << "decoded,reference\n";
  for (const auto& row : rep.rows) os << row.decoded << "," << row.reference << "\n";
  json j;
  j["iv_cer"] = rep.iv_cer;
  j["oov_cer"] = rep.oov_cer;
  j["iv_words"] = rep.iv_words;
  j["oov_words"] = rep.oov_words;
  write_text(out_dir + "/cer.json", j.dump(2) + "\n");
  std::cout << "IV CER " << rep.iv_cer << ", OOV CER " << rep.oov_cer << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-view acoustic/text word embedding toolkit"};
  app.require_subcommand(1);

  // gen-data
  std::string gd_config, gd_out;
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic corpus");
  gen->add_option("--config", gd_config, "synth config JSON")->required();
  gen->add_option("--out", gd_out, "output dataset directory")->required();

  // featurize
  std::string fz_in, fz_align, fz_out, fz_split = "train";
  auto* fz = app.add_subcommand("featurize", "WAV + segments -> feature dataset");
  fz->add_option("--in", fz_in, "WAV directory")->required();
  fz->add_option("--align", fz_align,
                 "segments file: utt_id word start_sec end_sec per line")
      ->required();
  fz->add_option("--out", fz_out, "output dataset directory")->required();
  fz->add_option("--split", fz_split, "split name (default train)");

  // shared train/sweep options
  std::string tr_config, tr_data, tr_out, sw_grid;
  TrainOverrides ov;
  uint64_t ov_seed = 0;
  double ov_alpha = 0;
  size_t ov_epochs = 0, ov_batch = 0;
  unsigned ov_workers = 0;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", ov_seed, "root seed (overrides config)");
    cmd->add_option("--alpha", ov_alpha, "decoding-loss weight (overrides config)");
    cmd->add_option("--epochs", ov_epochs, "epochs (overrides config)");
    cmd->add_option("--batch-size", ov_batch, "mini-batch size (overrides config)");
    cmd->add_option("--workers", ov_workers, "data-parallel width (0 = hardware)");
  };

  auto* tr = app.add_subcommand("train", "train a model");
  tr->add_option("--config", tr_config, "train config JSON (default: desk preset)");
  tr->add_option("--data", tr_data, "dataset directory with train/dev splits")
      ->required();
  tr->add_option("--out", tr_out, "output directory")->required();
  add_overrides(tr);

  auto* sw = app.add_subcommand("sweep", "coarse grid search");
  sw->add_option("--grid", sw_grid, "grid JSON")->required();
  sw->add_option("--config", tr_config, "base train config JSON");
  sw->add_option("--data", tr_data, "dataset directory")->required();
  sw->add_option("--out", tr_out, "output directory")->required();
  add_overrides(sw);

  // eval
  std::string ev_task, ev_model, ev_data, ev_split = "test", ev_out;
  bool ev_ref_lengths = false;
  unsigned ev_workers = 0;
  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint");
  ev->add_option("--task", ev_task, "acoustic | cross | recognition")->required();
  ev->add_option("--model", ev_model, "checkpoint path")->required();
  ev->add_option("--data", ev_data, "dataset directory")->required();
  ev->add_option("--split", ev_split, "split name (default test)");
  ev->add_option("--out", ev_out, "report JSON path")->required();
  ev->add_flag("--ref-lengths", ev_ref_lengths,
               "decode with reference lengths (strict-26 mode)");
  ev->add_option("--workers", ev_workers, "data-parallel width");

  // embed
  std::string em_model, em_data, em_split = "test", em_view, em_out;
  unsigned em_workers = 0;
  auto* em = app.add_subcommand("embed", "write embeddings to a file");
  em->add_option("--model", em_model, "checkpoint path")->required();
  em->add_option("--data", em_data, "dataset directory")->required();
  em->add_option("--split", em_split, "split name (default test)");
  em->add_option("--view", em_view, "acoustic | text")->required();
  em->add_option("--out", em_out, "output embeddings file")->required();
  em->add_option("--workers", em_workers, "data-parallel width");

  // decode
  std::string dc_model, dc_data, dc_split = "test", dc_out;
  bool dc_ref_lengths = false;
  unsigned dc_workers = 0;
  auto* dc = app.add_subcommand("decode", "decode segments to text + CER table");
  dc->add_option("--model", dc_model, "checkpoint path")->required();
  dc->add_option("--data", dc_data, "dataset directory")->required();
  dc->add_option("--split", dc_split, "split name (default test)");
  dc->add_option("--out", dc_out, "output directory")->required();
  dc->add_flag("--ref-lengths", dc_ref_lengths,
               "decode with reference lengths (strict-26 mode)");
  dc->add_option("--workers", dc_workers, "data-parallel width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(gd_config, gd_out);
    if (fz->parsed()) return cmd_featurize(fz_in, fz_align, fz_out, fz_split);
    if (tr->parsed() || sw->parsed()) {
      CLI::App* cmd = tr->parsed() ? tr : sw;
      if (cmd->count("--seed")) ov.seed = ov_seed;
      if (cmd->count("--alpha")) ov.alpha = ov_alpha;
      if (cmd->count("--epochs")) ov.epochs = ov_epochs;
      if (cmd->count("--batch-size")) ov.batch_size = ov_batch;
      if (cmd->count("--workers")) ov.workers = ov_workers;
      if (tr->parsed()) return cmd_train(tr_config, tr_data, tr_out, ov);
      return cmd_sweep(sw_grid, tr_config, tr_data, tr_out, ov);
    }
    if (ev->parsed())
      return cmd_eval(ev_task, ev_model, ev_data, ev_split, ev_out,
                      ev_ref_lengths, ev_workers);
    if (em->parsed())
      return cmd_embed(em_model, em_data, em_split, em_view, em_out, em_workers);
    if (dc->parsed())
      return cmd_decode(dc_model, dc_data, dc_split, dc_out, dc_ref_lengths,
                        dc_workers);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
