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
#include <optional>
#include <string>
#include <vector>

namespace arfdcn {

enum class SourceKind { kSine, kChirp, kFilteredNoise };

struct SourceSpec {
  SourceKind kind = SourceKind::kSine;
  // kSine: param0 = frequency Hz; kChirp: param0..param1 sweep Hz;
  // kFilteredNoise: param0 = lowpass cutoff Hz. Unset -> drawn from the seed.
  std::optional<double> param0;
  std::optional<double> param1;
  double level_db = 0.0;  // RMS level relative to full scale reference 1.0

  // "sine", "sine:440", "chirp:200-2000", "noise", "noise:1500", with an
  // optional "@<level_db>" suffix.
  static SourceSpec parse(const std::string& text);
};

struct MixtureSpec {
  double duration_s = 4.0;
  std::int64_t sample_rate = 8000;
  std::vector<SourceSpec> sources;
  std::optional<double> noise_level_db;  // ambient noise; nullopt = off

  void validate() const;
};

struct MixtureSample {
  std::vector<double> mixture;
  std::vector<std::vector<double>> sources;
  std::vector<double> noise;  // empty when off
  std::int64_t sample_rate = 0;
  std::vector<double> gains;  // applied linear RMS scale per source
  std::uint64_t seed = 0;
};

// Deterministic given (seed, spec). Sources are RMS-normalized then scaled to
// their relative levels (an RMS stand-in for loudness matching); the mixture
// is the exact elementwise sum of sources plus noise.
MixtureSample synth_mixture(std::uint64_t seed, const MixtureSpec& spec);

}  // namespace arfdcn
