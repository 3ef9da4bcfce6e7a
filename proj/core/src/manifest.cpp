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

#include "arfdcn/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "arfdcn/error.h"
#include "arfdcn/rng.h"
#include "arfdcn/wav.h"

namespace arfdcn {

namespace {
using nlohmann::json;
}

Manifest Manifest::load(const std::filesystem::path& path, bool validate) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "manifest: cannot open " + path.string());
  const std::filesystem::path base = path.parent_path();

  Manifest manifest;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorKind::kManifestParse,
           "manifest: line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("mixture") ||
        !j.contains("sources") || !j.contains("duration")) {
      fail(ErrorKind::kManifestParse,
           "manifest: line " + std::to_string(line_no) +
               ": need id/mixture/sources/duration fields");
    }
    ManifestRecord rec;
    try {
      rec.id = j.at("id").get<std::string>();
      rec.mixture = base / j.at("mixture").get<std::string>();
      for (const auto& s : j.at("sources")) {
        rec.sources.push_back(base / s.get<std::string>());
      }
      rec.duration_s = j.at("duration").get<double>();
    } catch (const json::exception& e) {
      fail(ErrorKind::kManifestParse,
           "manifest: line " + std::to_string(line_no) + ": " + e.what());
    }
    if (rec.sources.empty()) {
      fail(ErrorKind::kManifestParse,
           "manifest: line " + std::to_string(line_no) + ": no sources");
    }
    manifest.records.push_back(std::move(rec));
  }
  if (manifest.records.empty()) {
    fail(ErrorKind::kEmptyManifest, "manifest: " + path.string() + " is empty");
  }

  if (validate) {
    for (const ManifestRecord& rec : manifest.records) {
      std::vector<std::filesystem::path> all{rec.mixture};
      all.insert(all.end(), rec.sources.begin(), rec.sources.end());
      for (const auto& file : all) {
        if (!std::filesystem::exists(file)) {
          fail(ErrorKind::kManifestParse,
               "manifest: referenced file missing: " + file.string());
        }
        const WavInfo info = read_wav_info(file);
        if (manifest.sample_rate == 0) {
          manifest.sample_rate = info.sample_rate;
        } else if (manifest.sample_rate != info.sample_rate) {
          fail(ErrorKind::kManifestParse,
               "manifest: sample rate mismatch at " + file.string() + " (" +
                   std::to_string(info.sample_rate) + " vs " +
                   std::to_string(manifest.sample_rate) + ")");
        }
      }
    }
  }
  return manifest;
}

void Manifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "manifest: cannot write " + path.string());
  const std::filesystem::path base = path.parent_path();
  for (const ManifestRecord& rec : records) {
    json j;
    j["id"] = rec.id;
    j["mixture"] = std::filesystem::relative(rec.mixture, base).string();
    json sources = json::array();
    for (const auto& s : rec.sources) {
      sources.push_back(std::filesystem::relative(s, base).string());
    }
    j["sources"] = sources;
    j["duration"] = rec.duration_s;
    out << j.dump() << '\n';
  }
}

Segmenter::Segmenter(const Manifest& manifest, double segment_seconds,
                     std::uint64_t seed)
    : manifest_(manifest), seed_(seed) {
  if (manifest_.records.empty()) {
    fail(ErrorKind::kEmptyManifest, "segmenter: empty manifest");
  }
  if (manifest_.sample_rate <= 0) {
    fail(ErrorKind::kInvalidArgument,
         "segmenter: manifest lacks a sample rate (load with validation)");
  }
  if (segment_seconds <= 0.0) {
    fail(ErrorKind::kInvalidArgument, "segmenter: segment length must be > 0");
  }
  segment_len_ = static_cast<std::int64_t>(std::llround(
      segment_seconds * static_cast<double>(manifest_.sample_rate)));
}

SegmentExample Segmenter::example(std::int64_t epoch,
                                  std::int64_t index) const {
  const auto& rec =
      manifest_.records[static_cast<std::size_t>(index) %
                        manifest_.records.size()];
  const WavData mix = read_wav(rec.mixture);
  std::vector<WavData> sources;
  sources.reserve(rec.sources.size());
  for (const auto& p : rec.sources) sources.push_back(read_wav(p));

  const std::int64_t total = static_cast<std::int64_t>(mix.samples.size());
  for (const WavData& s : sources) {
    if (static_cast<std::int64_t>(s.samples.size()) != total) {
      fail(ErrorKind::kShapeMismatch,
           "segmenter: source length differs from mixture in record " + rec.id);
    }
  }

  std::int64_t offset = 0;
  if (total > segment_len_) {
    Rng rng = Rng(seed_).split(static_cast<std::uint64_t>(epoch))
                  .split(static_cast<std::uint64_t>(index));
    offset = rng.uniform_int(0, total - segment_len_);
  }

  auto crop = [&](const std::vector<double>& x) {
    std::vector<double> out(static_cast<std::size_t>(segment_len_), 0.0);
    const std::int64_t n = std::min(segment_len_, total - offset);
    std::copy(x.begin() + offset, x.begin() + offset + n, out.begin());
    return out;
  };

  SegmentExample ex;
  ex.mixture = crop(mix.samples);
  for (const WavData& s : sources) ex.sources.push_back(crop(s.samples));
  return ex;
}

}  // namespace arfdcn
