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

#include "arfdcn/wav.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "arfdcn/error.h"

namespace arfdcn {

namespace {

constexpr double kScale = 32768.0;

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

class WavReader {
 public:
  explicit WavReader(const std::filesystem::path& path)
      : in_(path, std::ios::binary), path_(path.string()) {
    if (!in_) fail(ErrorKind::kIo, "wav: cannot open " + path_);
  }

  void read_exact(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      fail(ErrorKind::kWavMalformed,
           "wav: " + path_ + ": truncated while reading " + what);
    }
  }

  std::uint16_t u16(const char* what) {
    unsigned char b[2];
    read_exact(b, 2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }

  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    read_exact(b, 4, what);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }

  void skip(std::uint32_t n) {
    in_.seekg(n, std::ios::cur);
    if (!in_) fail(ErrorKind::kWavMalformed, "wav: " + path_ + ": bad chunk skip");
  }

  // Walks the chunk list; on return fmt is validated and the stream is
  // positioned at the start of `data_size` payload bytes.
  std::uint32_t locate_data(FmtChunk* fmt) {
    char tag[4];
    read_exact(tag, 4, "RIFF tag");
    if (std::memcmp(tag, "RIFF", 4) != 0) {
      fail(ErrorKind::kWavMalformed, "wav: " + path_ + ": missing RIFF tag");
    }
    (void)u32("RIFF size");
    read_exact(tag, 4, "WAVE tag");
    if (std::memcmp(tag, "WAVE", 4) != 0) {
      fail(ErrorKind::kWavMalformed, "wav: " + path_ + ": missing WAVE tag");
    }
    bool have_fmt = false;
    for (;;) {
      read_exact(tag, 4, "chunk tag");
      const std::uint32_t size = u32("chunk size");
      if (std::memcmp(tag, "fmt ", 4) == 0) {
        if (size < 16) {
          fail(ErrorKind::kWavMalformed, "wav: " + path_ + ": short fmt chunk");
        }
        fmt->format = u16("format tag");
        fmt->channels = u16("channel count");
        fmt->sample_rate = u32("sample rate");
        (void)u32("byte rate");
        (void)u16("block align");
        fmt->bits = u16("bits per sample");
        if (size > 16) skip(size - 16);
        have_fmt = true;
      } else if (std::memcmp(tag, "data", 4) == 0) {
        if (!have_fmt) {
          fail(ErrorKind::kWavMalformed,
               "wav: " + path_ + ": data chunk precedes fmt chunk");
        }
        validate(*fmt);
        return size;
      } else {
        skip(size + (size % 2));  // chunks are word-aligned
      }
    }
  }

  void validate(const FmtChunk& fmt) {
    if (fmt.format != 1) {
      fail(ErrorKind::kWavUnsupportedFormat,
           "wav: " + path_ + ": unsupported format tag " +
               std::to_string(fmt.format) + " (PCM only)");
    }
    if (fmt.channels != 1) {
      fail(ErrorKind::kWavUnsupportedChannels,
           "wav: " + path_ + ": unsupported channel count " +
               std::to_string(fmt.channels) + " (mono only)");
    }
    if (fmt.bits != 16) {
      fail(ErrorKind::kWavUnsupportedFormat,
           "wav: " + path_ + ": unsupported bit depth " +
               std::to_string(fmt.bits) + " (16-bit only)");
    }
  }

 private:
  std::ifstream in_;
  std::string path_;
};

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  WavReader reader(path);
  FmtChunk fmt;
  const std::uint32_t data_size = reader.locate_data(&fmt);
  if (data_size % 2 != 0) {
    fail(ErrorKind::kWavMalformed,
         "wav: " + path.string() + ": odd data chunk size");
  }
  const std::size_t count = data_size / 2;
  std::vector<std::int16_t> raw(count);
  if (count > 0) {
    std::vector<unsigned char> bytes(data_size);
    reader.read_exact(bytes.data(), data_size, "sample data");
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint16_t u = static_cast<std::uint16_t>(
          bytes[2 * i] | (bytes[2 * i + 1] << 8));
      raw[i] = static_cast<std::int16_t>(u);
    }
  }
  WavData wav;
  wav.sample_rate = fmt.sample_rate;
  wav.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    wav.samples[i] = static_cast<double>(raw[i]) / kScale;
  }
  return wav;
}

WavInfo read_wav_info(const std::filesystem::path& path) {
  WavReader reader(path);
  FmtChunk fmt;
  const std::uint32_t data_size = reader.locate_data(&fmt);
  WavInfo info;
  info.sample_rate = fmt.sample_rate;
  info.num_samples = data_size / 2;
  return info;
}

void write_wav(const std::filesystem::path& path,
               std::span<const double> samples, std::int64_t sample_rate) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "wav: cannot write " + path.string());

  const std::uint32_t data_size =
      static_cast<std::uint32_t>(samples.size() * 2);
  auto put_u16 = [&](std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xFF),
                       static_cast<char>((v >> 8) & 0xFF)};
    out.write(b, 2);
  };
  auto put_u32 = [&](std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF),
                       static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF),
                       static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
  };

  out.write("RIFF", 4);
  put_u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(1);  // PCM
  put_u16(1);  // mono
  put_u32(static_cast<std::uint32_t>(sample_rate));
  put_u32(static_cast<std::uint32_t>(sample_rate * 2));
  put_u16(2);   // block align
  put_u16(16);  // bits
  out.write("data", 4);
  put_u32(data_size);
  for (const double v : samples) {
    // round half away from zero, then clip to the 16-bit grid
    double scaled = v * kScale;
    scaled = scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
    if (scaled > 32767.0) scaled = 32767.0;
    if (scaled < -32768.0) scaled = -32768.0;
    put_u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  if (!out) fail(ErrorKind::kIo, "wav: short write to " + path.string());
}

}  // namespace arfdcn
