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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "arfdcn/manifest.h"
#include "arfdcn/model.h"
#include "arfdcn/optimizer.h"

namespace arfdcn {

struct TrainOptions {
  std::int64_t epochs = 1;
  std::uint64_t seed = 0;
  double segment_seconds = 4.0;
  AdamwHyper adamw;
  double clip_norm = 5.0;
  std::filesystem::path checkpoint_path;
  std::ostream* metrics_out = nullptr;  // one JSON line per epoch when set
};

struct EpochMetrics {
  std::int64_t epoch = 0;
  double train_loss = 0.0;
  double val_si_sdri = 0.0;
  double lr = 0.0;
  std::int64_t clip_events = 0;
};

struct TrainReport {
  std::vector<EpochMetrics> epochs;
  bool aborted_non_finite = false;
  std::string abort_reason;
  double best_val = 0.0;
};

// Per epoch: sequential segment steps (forward, permutation-invariant loss,
// backward, clip, AdamW), then full-utterance validation driving the plateau
// rule and best-checkpoint saving. The initial state is checkpointed up
// front, so epochs == 0 leaves a checkpoint equal to the initialization and
// a non-finite abort always retains the last good file. Fully deterministic
// given (seed, config, manifests).
TrainReport train(Model& model, const Manifest& train_manifest,
                  const Manifest* val_manifest, const TrainOptions& options);

struct EvalResult {
  double si_sdri = 0.0;
  double sdri = 0.0;
  std::int64_t utterances = 0;
};

// Mean improvements over the manifest, estimates from full-utterance
// forwards.
EvalResult evaluate(const Model& model, const Manifest& manifest);

}  // namespace arfdcn
