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

#include "arfdcn/model.h"
#include "arfdcn/optimizer.h"

namespace arfdcn {

// Little-endian binary checkpoint:
//   magic "ARFD" | u32 version | u64 config fingerprint
//   | u64 count, entries of (u32 name_len, name, u32 rank, u64 dims..., f64
//     payload) for the parameters
//   | the same count-prefixed encoding for optimizer state and training
//     metadata ("adam.m.*", "adam.v.*", "adam.step", "train.*" scalars).
// Loading validates magic, version, fingerprint, and structure before any
// model state is touched; a bad file never yields a partial model.

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointMeta {
  std::int64_t epoch = 0;
  double best_val = 0.0;
  double lr = 0.0;
  std::int64_t stagnation = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const AdamwState* optimizer, const CheckpointMeta& meta);

// Parameters load into `model` bit-exactly; optimizer state only when
// `optimizer` is non-null.
CheckpointMeta load_checkpoint(const std::filesystem::path& path, Model& model,
                               AdamwState* optimizer);

}  // namespace arfdcn
