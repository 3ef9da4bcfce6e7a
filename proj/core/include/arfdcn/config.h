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

#include <cstdint>
#include <filesystem>
#include <string>

namespace arfdcn {

enum class DilationsMode { kExp, kFlat };

// Every architectural hyperparameter in one place. The on-disk form is flat
// UTF-8 "key = value" lines; unknown keys are rejected.
struct ModelConfig {
  std::int64_t enc_channels = 512;  // C
  std::int64_t enc_kernel = 21;
  std::int64_t enc_stride = 10;
  std::int64_t sep_channels = 512;  // P
  std::int64_t num_blocks = 7;
  std::int64_t msf_stages = 5;      // J
  std::int64_t bottleneck = 128;    // B
  std::int64_t num_sources = 2;
  bool attention_enabled = true;
  DilationsMode dilations_mode = DilationsMode::kExp;
  std::int64_t sample_rate = 8000;

  void validate() const;

  // Canonical serialization; also the fingerprint input.
  std::string to_string() const;
  std::uint64_t fingerprint() const;

  static ModelConfig parse(const std::string& text);
  static ModelConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace arfdcn
