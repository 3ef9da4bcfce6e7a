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

#include "arfdcn/trainer.h"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "arfdcn/checkpoint.h"
#include "arfdcn/objective.h"
#include "arfdcn/ops.h"
#include "arfdcn/wav.h"

namespace arfdcn {

namespace {

Tensor rows_tensor(const std::vector<std::vector<double>>& rows) {
  const std::int64_t r = static_cast<std::int64_t>(rows.size());
  const std::int64_t c = static_cast<std::int64_t>(rows.front().size());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(r * c));
  for (const auto& row : rows) data.insert(data.end(), row.begin(), row.end());
  return Tensor(Shape{r, c}, std::move(data));
}

std::vector<std::vector<double>> split_rows(const Tensor& t) {
  std::vector<std::vector<double>> rows;
  const std::int64_t r = t.dim(0);
  const std::int64_t c = t.dim(1);
  rows.reserve(static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i < r; ++i) {
    const double* begin = t.data() + i * c;
    rows.emplace_back(begin, begin + c);
  }
  return rows;
}

}  // namespace

EvalResult evaluate(const Model& model, const Manifest& manifest) {
  if (manifest.records.empty()) {
    fail(ErrorKind::kEmptyManifest, "evaluate: empty manifest");
  }
  NoGradGuard no_grad;
  EvalResult result;
  for (const ManifestRecord& rec : manifest.records) {
    const WavData mix = read_wav(rec.mixture);
    std::vector<std::vector<double>> refs;
    for (const auto& p : rec.sources) refs.push_back(read_wav(p).samples);

    Tensor wave(Shape{1, static_cast<std::int64_t>(mix.samples.size())},
                mix.samples);
    const Tensor ests = model.forward(wave);
    const std::vector<std::vector<double>> est_rows = split_rows(ests);
    result.si_sdri += si_sdri(est_rows, refs, mix.samples);
    result.sdri += sdri(est_rows, refs, mix.samples);
    ++result.utterances;
  }
  result.si_sdri /= static_cast<double>(result.utterances);
  result.sdri /= static_cast<double>(result.utterances);
  return result;
}

TrainReport train(Model& model, const Manifest& train_manifest,
                  const Manifest* val_manifest, const TrainOptions& options) {
  options.adamw.validate();
  if (options.epochs < 0) {
    fail(ErrorKind::kInvalidArgument, "train: epochs must be >= 0");
  }
  const std::int64_t sources = model.config().num_sources;
  for (const ManifestRecord& rec : train_manifest.records) {
    if (static_cast<std::int64_t>(rec.sources.size()) != sources) {
      fail(ErrorKind::kInvalidArgument,
           "train: record " + rec.id + " has " +
               std::to_string(rec.sources.size()) + " sources, model expects " +
               std::to_string(sources));
    }
  }

  Segmenter segmenter(train_manifest, options.segment_seconds, options.seed);
  const Manifest& val = val_manifest ? *val_manifest : train_manifest;

  AdamwState opt = AdamwState::init(model.parameters());
  TrainState state;
  state.lr = options.adamw.lr;
  state.seed = options.seed;

  TrainReport report;
  CheckpointMeta meta;
  meta.lr = state.lr;
  if (!options.checkpoint_path.empty()) {
    save_checkpoint(options.checkpoint_path, model, &opt, meta);
  }

  for (std::int64_t epoch = 1; epoch <= options.epochs; ++epoch) {
    state.epoch = epoch;
    EpochMetrics metrics;
    metrics.epoch = epoch;

    double loss_sum = 0.0;
    const std::int64_t steps = segmenter.examples_per_epoch();
    for (std::int64_t i = 0; i < steps; ++i) {
      const SegmentExample ex = segmenter.example(epoch, i);
      Tensor wave(Shape{1, segmenter.segment_len()}, ex.mixture);
      Tensor refs = rows_tensor(ex.sources);

      for (const auto& [name, t] : model.parameters()) {
        (void)name;
        Tensor tt = t;
        tt.zero_grad();
      }
      const Tensor ests = model.forward(wave);
      PitResult pit = pit_loss(ests, refs);
      const double loss_value = pit.loss.item();
      if (!std::isfinite(loss_value)) {
        report.aborted_non_finite = true;
        report.abort_reason = "non-finite loss at epoch " +
                              std::to_string(epoch) + " step " +
                              std::to_string(i);
        report.best_val = state.best_val;
        return report;
      }
      loss_sum += loss_value;
      backward(pit.loss);
      const double norm = clip_grad_norm(model.parameters(), options.clip_norm);
      if (norm > options.clip_norm) ++metrics.clip_events;
      AdamwHyper hyper = options.adamw;
      hyper.lr = state.lr;
      adamw_step(model.parameters(), opt, hyper);
    }
    metrics.train_loss = loss_sum / static_cast<double>(steps);

    const EvalResult val_result = evaluate(model, val);
    metrics.val_si_sdri = val_result.si_sdri;
    const bool improved = lr_plateau(state, val_result.si_sdri);
    metrics.lr = state.lr;

    if (improved && !options.checkpoint_path.empty()) {
      meta.epoch = epoch;
      meta.best_val = state.best_val;
      meta.lr = state.lr;
      meta.stagnation = state.stagnation;
      save_checkpoint(options.checkpoint_path, model, &opt, meta);
    }

    if (options.metrics_out) {
      nlohmann::ordered_json line;
      line["epoch"] = epoch;
      line["train_loss"] = metrics.train_loss;
      line["val_si_sdri"] = metrics.val_si_sdri;
      line["lr"] = metrics.lr;
      if (metrics.clip_events > 0) line["clip_events"] = metrics.clip_events;
      (*options.metrics_out) << line.dump() << '\n';
    }
    report.epochs.push_back(metrics);
  }
  report.best_val = state.best_val;
  return report;
}

}  // namespace arfdcn
