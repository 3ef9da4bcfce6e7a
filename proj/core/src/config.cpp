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

#include "arfdcn/config.h"

#include <fstream>
#include <sstream>

#include "arfdcn/error.h"

namespace arfdcn {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return static_cast<std::int64_t>(v);
  } catch (const std::exception&) {
    fail(ErrorKind::kConfigParse,
         "config: key '" + key + "' expects an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(ErrorKind::kConfigParse,
       "config: key '" + key + "' expects true|false, got '" + value + "'");
}

}  // namespace

void ModelConfig::validate() const {
  if (enc_channels < 1 || enc_kernel < 1 || enc_stride < 1 ||
      sep_channels < 1 || num_blocks < 1 || msf_stages < 1 || bottleneck < 1 ||
      sample_rate < 1) {
    fail(ErrorKind::kInvalidArgument, "config: all counts must be >= 1");
  }
  if (enc_kernel <= enc_stride) {
    fail(ErrorKind::kInvalidArgument,
         "config: enc_kernel must exceed enc_stride");
  }
  if (num_sources < 2) {
    fail(ErrorKind::kInvalidArgument, "config: num_sources must be >= 2");
  }
}

std::string ModelConfig::to_string() const {
  std::ostringstream out;
  out << "enc_channels = " << enc_channels << '\n'
      << "enc_kernel = " << enc_kernel << '\n'
      << "enc_stride = " << enc_stride << '\n'
      << "sep_channels = " << sep_channels << '\n'
      << "num_blocks = " << num_blocks << '\n'
      << "msf_stages = " << msf_stages << '\n'
      << "bottleneck = " << bottleneck << '\n'
      << "num_sources = " << num_sources << '\n'
      << "attention_enabled = " << (attention_enabled ? "true" : "false")
      << '\n'
      << "dilations_mode = "
      << (dilations_mode == DilationsMode::kExp ? "exp" : "flat") << '\n'
      << "sample_rate = " << sample_rate << '\n';
  return out.str();
}

std::uint64_t ModelConfig::fingerprint() const {
  // FNV-1a over the canonical serialization.
  const std::string text = to_string();
  std::uint64_t hash = 14695981039346656037ull;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

ModelConfig ModelConfig::parse(const std::string& text) {
  ModelConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::kConfigParse,
           "config: line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "enc_channels") {
      cfg.enc_channels = parse_int(key, value);
    } else if (key == "enc_kernel") {
      cfg.enc_kernel = parse_int(key, value);
    } else if (key == "enc_stride") {
      cfg.enc_stride = parse_int(key, value);
    } else if (key == "sep_channels") {
      cfg.sep_channels = parse_int(key, value);
    } else if (key == "num_blocks") {
      cfg.num_blocks = parse_int(key, value);
    } else if (key == "msf_stages") {
      cfg.msf_stages = parse_int(key, value);
    } else if (key == "bottleneck") {
      cfg.bottleneck = parse_int(key, value);
    } else if (key == "num_sources") {
      cfg.num_sources = parse_int(key, value);
    } else if (key == "attention_enabled") {
      cfg.attention_enabled = parse_bool(key, value);
    } else if (key == "dilations_mode") {
      if (value == "exp") {
        cfg.dilations_mode = DilationsMode::kExp;
      } else if (value == "flat") {
        cfg.dilations_mode = DilationsMode::kFlat;
      } else {
        fail(ErrorKind::kConfigParse,
             "config: dilations_mode expects exp|flat, got '" + value + "'");
      }
    } else if (key == "sample_rate") {
      cfg.sample_rate = parse_int(key, value);
    } else {
      fail(ErrorKind::kConfigParse, "config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ModelConfig ModelConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::kIo, "config: cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void ModelConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorKind::kIo, "config: cannot write " + path.string());
  }
  out << to_string();
}

}  // namespace arfdcn
