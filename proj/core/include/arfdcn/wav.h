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
#include <span>
#include <vector>

namespace arfdcn {

struct WavData {
  std::vector<double> samples;  // scaled to [-1, 1) via /32768
  std::int64_t sample_rate = 0;
};

// PCM 16-bit mono RIFF/WAVE only. Unknown chunks are skipped; non-PCM,
// multi-channel, or malformed headers raise distinct errors.
WavData read_wav(const std::filesystem::path& path);

// Exact inverse of the read scaling, rounding half away from zero and
// clipping to the 16-bit range; read(write(x)) == x for x on the grid.
void write_wav(const std::filesystem::path& path,
               std::span<const double> samples, std::int64_t sample_rate);

// Header-only probe used for manifest validation.
struct WavInfo {
  std::int64_t sample_rate = 0;
  std::int64_t num_samples = 0;
};
WavInfo read_wav_info(const std::filesystem::path& path);

}  // namespace arfdcn
