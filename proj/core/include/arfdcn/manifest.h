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
#include <vector>

namespace arfdcn {

// One utterance: a mixture plus its reference sources. Paths in the file may
// be relative; they resolve against the manifest's directory.
struct ManifestRecord {
  std::string id;
  std::filesystem::path mixture;
  std::vector<std::filesystem::path> sources;
  double duration_s = 0.0;
};

// UTF-8 JSON-lines file, one record per line:
//   {"id": "...", "mixture": "m.wav", "sources": ["a.wav","b.wav"],
//    "duration": 4.0}
struct Manifest {
  std::vector<ManifestRecord> records;
  std::int64_t sample_rate = 0;  // shared by every referenced file

  // validate=true opens every referenced header and checks existence and a
  // common sample rate.
  static Manifest load(const std::filesystem::path& path, bool validate = true);
  void save(const std::filesystem::path& path) const;
};

// One fixed-length training example; sources stay aligned with the mixture
// crop sample for sample.
struct SegmentExample {
  std::vector<double> mixture;
  std::vector<std::vector<double>> sources;
};

// Deterministic seeded cropper: every epoch visits each record once, drawing
// the crop offset from a stream keyed by (seed, epoch, record index). Short
// utterances are right-zero-padded.
class Segmenter {
 public:
  Segmenter(const Manifest& manifest, double segment_seconds,
            std::uint64_t seed);

  std::int64_t examples_per_epoch() const {
    return static_cast<std::int64_t>(manifest_.records.size());
  }
  std::int64_t segment_len() const { return segment_len_; }

  SegmentExample example(std::int64_t epoch, std::int64_t index) const;

 private:
  Manifest manifest_;
  std::int64_t segment_len_;
  std::uint64_t seed_;
};

}  // namespace arfdcn
