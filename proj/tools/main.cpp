// Copyright 2026 The arfdcn Authors
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
// See the License for the specific language governing permissions and
// limitations under the License.

// arfdcn: train, separate, evaluate, benchmark and generate data for the
// time-domain two-speaker separation model.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "arfdcn/checkpoint.h"
#include "arfdcn/config.h"
#include "arfdcn/manifest.h"
#include "arfdcn/model.h"
#include "arfdcn/objective.h"
#include "arfdcn/ops.h"
#include "arfdcn/rng.h"
#include "arfdcn/synth.h"
#include "arfdcn/trainer.h"
#include "arfdcn/wav.h"

namespace {

using nlohmann::ordered_json;

arfdcn::ModelConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return arfdcn::ModelConfig{};
  return arfdcn::ModelConfig::load(path);
}

arfdcn::Model load_model(const std::string& config_path,
                         const std::string& checkpoint_path,
                         std::uint64_t seed) {
  arfdcn::Model model(load_config_or_default(config_path), seed);
  if (!checkpoint_path.empty()) {
    arfdcn::load_checkpoint(checkpoint_path, model, nullptr);
  }
  return model;
}

int cmd_train(const std::string& config_path, const std::string& manifest_path,
              const std::string& val_manifest_path, std::int64_t epochs,
              std::uint64_t seed, const std::string& out_path,
              double segment_seconds, double lr, double weight_decay,
              double clip_norm) {
  arfdcn::Model model(load_config_or_default(config_path), seed);
  const arfdcn::Manifest manifest = arfdcn::Manifest::load(manifest_path);
  arfdcn::Manifest val;
  const bool has_val = !val_manifest_path.empty();
  if (has_val) val = arfdcn::Manifest::load(val_manifest_path);

  arfdcn::TrainOptions options;
  options.epochs = epochs;
  options.seed = seed;
  options.segment_seconds = segment_seconds;
  options.adamw.lr = lr;
  options.adamw.weight_decay = weight_decay;
  options.clip_norm = clip_norm;
  options.checkpoint_path = out_path;
  options.metrics_out = &std::cout;

  const arfdcn::TrainReport report =
      arfdcn::train(model, manifest, has_val ? &val : nullptr, options);
  if (report.aborted_non_finite) {
    std::cerr << "training aborted: " << report.abort_reason
              << " (last good checkpoint kept at " << out_path << ")\n";
    return 2;
  }
  return 0;
}

int cmd_separate(const std::string& config_path, const std::string& model_path,
                 const std::string& input_path, const std::string& out_dir) {
  const arfdcn::Model model = load_model(config_path, model_path, 0);
  const arfdcn::WavData wav = arfdcn::read_wav(input_path);
  if (wav.sample_rate != model.config().sample_rate) {
    std::cerr << "warning: input is " << wav.sample_rate
              << " Hz, model expects " << model.config().sample_rate << " Hz\n";
  }
  arfdcn::NoGradGuard no_grad;
  arfdcn::Tensor wave(
      arfdcn::Shape{1, static_cast<std::int64_t>(wav.samples.size())},
      wav.samples);
  const arfdcn::Tensor separated = model.forward(wave);

  std::filesystem::create_directories(out_dir);
  const std::string stem = std::filesystem::path(input_path).stem().string();
  ordered_json output;
  output["sources"] = ordered_json::array();
  for (std::int64_t s = 0; s < separated.dim(0); ++s) {
    const double* begin = separated.data() + s * separated.dim(1);
    const std::filesystem::path out_path =
        std::filesystem::path(out_dir) /
        (stem + "_s" + std::to_string(s + 1) + ".wav");
    arfdcn::write_wav(out_path,
                      std::span<const double>(begin, begin + separated.dim(1)),
                      wav.sample_rate);
    output["sources"].push_back(out_path.string());
  }
  std::cout << output.dump() << '\n';
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& model_path,
                 const std::string& manifest_path) {
  const arfdcn::Model model = load_model(config_path, model_path, 0);
  const arfdcn::Manifest manifest = arfdcn::Manifest::load(manifest_path);
  const arfdcn::EvalResult result = arfdcn::evaluate(model, manifest);
  ordered_json output;
  output["utterances"] = result.utterances;
  output["si_sdri"] = result.si_sdri;
  output["sdri"] = result.sdri;
  std::cout << output.dump() << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& model_path,
              double seconds, std::int64_t repeats, std::uint64_t seed) {
  const arfdcn::Model model = load_model(config_path, model_path, seed);
  const std::int64_t rate = model.config().sample_rate;
  const std::int64_t samples =
      static_cast<std::int64_t>(std::llround(seconds * rate));

  arfdcn::Rng rng(seed);
  std::vector<double> input(static_cast<std::size_t>(samples));
  for (double& v : input) v = rng.uniform(-0.5, 0.5);
  arfdcn::Tensor wave(arfdcn::Shape{1, samples}, std::move(input));

  arfdcn::NoGradGuard no_grad;
  (void)model.forward(wave);  // untimed warmup

  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(repeats));
  for (std::int64_t i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    (void)model.forward(wave);
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  double mean = 0.0;
  for (const double t : times) mean += t;
  mean /= static_cast<double>(times.size());
  double var = 0.0;
  for (const double t : times) var += (t - mean) * (t - mean);
  var /= static_cast<double>(times.size());

  ordered_json output;
  output["seconds"] = seconds;
  output["repeats"] = repeats;
  output["mean_s"] = mean;
  output["stddev_s"] = std::sqrt(var);
  output["params"] = arfdcn::Model::count_params(model.config());
  std::cout << output.dump() << '\n';
  return 0;
}

int cmd_count_params(const std::string& config_path) {
  std::cout << arfdcn::Model::count_params(load_config_or_default(config_path))
            << '\n';
  return 0;
}

int cmd_synth_data(const std::string& out_dir, std::int64_t count,
                   std::uint64_t seed, double duration, std::int64_t rate,
                   const std::vector<std::string>& kinds, double noise_db,
                   bool noise_off) {
  std::filesystem::create_directories(out_dir);
  arfdcn::Manifest manifest;
  manifest.sample_rate = rate;
  for (std::int64_t i = 0; i < count; ++i) {
    arfdcn::MixtureSpec spec;
    spec.duration_s = duration;
    spec.sample_rate = rate;
    for (const std::string& k : kinds) {
      spec.sources.push_back(arfdcn::SourceSpec::parse(k));
    }
    if (!noise_off) spec.noise_level_db = noise_db;
    const arfdcn::MixtureSample sample =
        arfdcn::synth_mixture(seed + static_cast<std::uint64_t>(i), spec);

    const std::string stem = "utt" + std::to_string(i);
    arfdcn::ManifestRecord rec;
    rec.id = stem;
    rec.duration_s = duration;
    rec.mixture = std::filesystem::path(out_dir) / (stem + "_mix.wav");
    arfdcn::write_wav(rec.mixture, sample.mixture, rate);
    for (std::size_t s = 0; s < sample.sources.size(); ++s) {
      const auto path = std::filesystem::path(out_dir) /
                        (stem + "_s" + std::to_string(s + 1) + ".wav");
      arfdcn::write_wav(path, sample.sources[s], rate);
      rec.sources.push_back(path);
    }
    manifest.records.push_back(std::move(rec));
  }
  const auto manifest_path = std::filesystem::path(out_dir) / "manifest.jsonl";
  manifest.save(manifest_path);
  ordered_json output;
  output["manifest"] = manifest_path.string();
  output["utterances"] = count;
  std::cout << output.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-domain two-speaker separation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path;
  std::string manifest_path;
  std::string val_manifest_path;
  std::string input_path;
  std::string out_dir = ".";
  std::string out_path = "model.ckpt";
  std::int64_t epochs = 10;
  std::uint64_t seed = 0;
  double segment_seconds = 4.0;
  double lr = 1e-3;
  double weight_decay = 1e-2;
  double clip_norm = 5.0;
  double seconds = 4.0;
  std::int64_t repeats = 100;
  std::int64_t count = 5;
  double duration = 4.0;
  std::int64_t rate = 8000;
  std::vector<std::string> kinds{"sine", "sine"};
  double noise_db = -25.0;
  bool noise_off = false;

  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--config", config_path, "config file (defaults built in)");
  train->add_option("--manifest", manifest_path, "training manifest")
      ->required();
  train->add_option("--val-manifest", val_manifest_path,
                    "validation manifest (defaults to the training one)");
  train->add_option("--epochs", epochs, "number of epochs");
  train->add_option("--seed", seed, "seed for init, crops and logs");
  train->add_option("--out", out_path, "checkpoint output path");
  train->add_option("--segment-seconds", segment_seconds, "crop length");
  train->add_option("--lr", lr, "initial learning rate");
  train->add_option("--weight-decay", weight_decay, "AdamW weight decay");
  train->add_option("--clip-norm", clip_norm, "global gradient norm cap");

  CLI::App* separate = app.add_subcommand("separate", "split one mixture wav");
  separate->add_option("--config", config_path, "config file");
  separate->add_option("--model", model_path, "checkpoint")->required();
  separate->add_option("--in", input_path, "input wav")->required();
  separate->add_option("--out-dir", out_dir, "output directory");

  CLI::App* evaluate = app.add_subcommand("evaluate", "score a manifest");
  evaluate->add_option("--config", config_path, "config file");
  evaluate->add_option("--model", model_path, "checkpoint")->required();
  evaluate->add_option("--manifest", manifest_path, "manifest")->required();

  CLI::App* bench = app.add_subcommand("bench", "time forward passes");
  bench->add_option("--config", config_path, "config file");
  bench->add_option("--model", model_path, "checkpoint (optional; random init otherwise)");
  bench->add_option("--seconds", seconds, "input length in seconds");
  bench->add_option("--repeats", repeats, "timed repetitions");
  bench->add_option("--seed", seed, "seed for the input signal");

  CLI::App* count_params =
      app.add_subcommand("count-params", "print the trainable scalar count");
  count_params->add_option("--config", config_path, "config file");

  CLI::App* synth = app.add_subcommand("synth-data", "write a seeded synthetic dataset");
  synth->add_option("--out-dir", out_dir, "output directory")->required();
  synth->add_option("--count", count, "number of mixtures");
  synth->add_option("--seed", seed, "dataset seed");
  synth->add_option("--duration", duration, "utterance length in seconds");
  synth->add_option("--rate", rate, "sample rate");
  synth->add_option("--kinds", kinds,
                    "source kinds, e.g. sine:440 chirp:200-1200 noise");
  synth->add_option("--noise-db", noise_db, "ambient noise level in dB");
  synth->add_flag("--no-noise", noise_off, "disable ambient noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(train)) {
      return cmd_train(config_path, manifest_path, val_manifest_path, epochs,
                       seed, out_path, segment_seconds, lr, weight_decay,
                       clip_norm);
    }
    if (app.got_subcommand(separate)) {
      return cmd_separate(config_path, model_path, input_path, out_dir);
    }
    if (app.got_subcommand(evaluate)) {
      return cmd_evaluate(config_path, model_path, manifest_path);
    }
    if (app.got_subcommand(bench)) {
      return cmd_bench(config_path, model_path, seconds, repeats, seed);
    }
    if (app.got_subcommand(count_params)) {
      return cmd_count_params(config_path);
    }
    if (app.got_subcommand(synth)) {
      return cmd_synth_data(out_dir, count, seed, duration, rate, kinds,
                            noise_db, noise_off);
    }
  } catch (const arfdcn::Error& e) {
    std::cerr << "error (" << arfdcn::error_kind_name(e.kind()) << "): "
              << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
