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

#include "arfdcn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace arfdcn {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

struct Entry {
  std::string name;
  Shape dims;
  std::vector<double> payload;
};

void put_entry(std::string& out, const std::string& name, const Shape& dims,
               const double* payload, std::int64_t n) {
  put_u32(out, static_cast<std::uint32_t>(name.size()));
  out.append(name);
  put_u32(out, static_cast<std::uint32_t>(dims.size()));
  for (const std::int64_t d : dims) {
    put_u64(out, static_cast<std::uint64_t>(d));
  }
  for (std::int64_t i = 0; i < n; ++i) put_f64(out, payload[i]);
}

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) fail(ErrorKind::kIo, "checkpoint: cannot open " + path.string());
  }

  void read_exact(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      fail(ErrorKind::kCheckpointTruncated,
           "checkpoint: truncated file (wanted " + std::to_string(n) +
               " more bytes)");
    }
  }

  std::uint32_t u32() {
    unsigned char b[4];
    read_exact(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    unsigned char b[8];
    read_exact(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  Entry entry() {
    Entry e;
    const std::uint32_t name_len = u32();
    if (name_len > 4096) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: unreasonable name length " + std::to_string(name_len));
    }
    e.name.resize(name_len);
    if (name_len > 0) read_exact(e.name.data(), name_len);
    const std::uint32_t rank = u32();
    if (rank > 8) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: unreasonable rank " + std::to_string(rank));
    }
    std::int64_t n = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const std::uint64_t dim = u64();
      e.dims.push_back(static_cast<std::int64_t>(dim));
      n *= static_cast<std::int64_t>(dim);
    }
    if (n < 0 || n > (1ll << 32)) {
      fail(ErrorKind::kCheckpointMalformed, "checkpoint: unreasonable extent");
    }
    e.payload.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      e.payload[static_cast<std::size_t>(i)] = f64();
    }
    return e;
  }

 private:
  std::ifstream in_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const AdamwState* optimizer, const CheckpointMeta& meta) {
  const auto& params = model.parameters();
  std::string out;
  out.append("ARFD");
  put_u32(out, kCheckpointVersion);
  put_u64(out, model.config().fingerprint());

  put_u64(out, static_cast<std::uint64_t>(params.size()));
  for (const auto& [name, t] : params) {
    put_entry(out, name, t.shape(), t.data(), t.size());
  }

  const std::size_t opt_entries = 2 * params.size() + 5;
  put_u64(out, static_cast<std::uint64_t>(opt_entries));
  for (std::size_t p = 0; p < params.size(); ++p) {
    const Tensor& t = params[p].second;
    if (optimizer) {
      put_entry(out, "adam.m." + params[p].first, t.shape(),
                optimizer->m[p].data(), t.size());
    } else {
      const std::vector<double> zeros(static_cast<std::size_t>(t.size()), 0.0);
      put_entry(out, "adam.m." + params[p].first, t.shape(), zeros.data(),
                t.size());
    }
  }
  for (std::size_t p = 0; p < params.size(); ++p) {
    const Tensor& t = params[p].second;
    if (optimizer) {
      put_entry(out, "adam.v." + params[p].first, t.shape(),
                optimizer->v[p].data(), t.size());
    } else {
      const std::vector<double> zeros(static_cast<std::size_t>(t.size()), 0.0);
      put_entry(out, "adam.v." + params[p].first, t.shape(), zeros.data(),
                t.size());
    }
  }
  const double scalars[5] = {
      static_cast<double>(optimizer ? optimizer->step : 0),
      static_cast<double>(meta.epoch), meta.best_val, meta.lr,
      static_cast<double>(meta.stagnation)};
  const char* names[5] = {"adam.step", "train.epoch", "train.best_val",
                          "train.lr", "train.stagnation"};
  for (int i = 0; i < 5; ++i) {
    put_entry(out, names[i], Shape{}, &scalars[i], 1);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    fail(ErrorKind::kIo, "checkpoint: cannot write " + path.string());
  }
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) {
    fail(ErrorKind::kIo, "checkpoint: short write to " + path.string());
  }
}

CheckpointMeta load_checkpoint(const std::filesystem::path& path, Model& model,
                               AdamwState* optimizer) {
  Reader reader(path);

  char magic[4];
  reader.read_exact(magic, 4);
  if (std::memcmp(magic, "ARFD", 4) != 0) {
    fail(ErrorKind::kCheckpointBadMagic, "checkpoint: bad magic");
  }
  const std::uint32_t version = reader.u32();
  if (version != kCheckpointVersion) {
    fail(ErrorKind::kCheckpointBadVersion,
         "checkpoint: version " + std::to_string(version) + ", expected " +
             std::to_string(kCheckpointVersion));
  }
  const std::uint64_t fp = reader.u64();
  if (fp != model.config().fingerprint()) {
    fail(ErrorKind::kCheckpointFingerprint,
         "checkpoint: config fingerprint mismatch");
  }

  const auto& params = model.parameters();
  const std::uint64_t n_params = reader.u64();
  if (n_params != params.size()) {
    fail(ErrorKind::kCheckpointMalformed,
         "checkpoint: " + std::to_string(n_params) + " parameters, model has " +
             std::to_string(params.size()));
  }
  // Stage everything before mutating the model so failures leave it intact.
  std::vector<Entry> staged;
  staged.reserve(params.size());
  for (std::size_t p = 0; p < params.size(); ++p) {
    Entry e = reader.entry();
    if (e.name != params[p].first) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: parameter '" + e.name + "' where '" + params[p].first +
               "' was expected");
    }
    if (e.dims != params[p].second.shape()) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: parameter '" + e.name + "' has shape " +
               shape_str(e.dims) + ", model expects " +
               shape_str(params[p].second.shape()));
    }
    staged.push_back(std::move(e));
  }

  const std::uint64_t n_opt = reader.u64();
  if (n_opt != 2 * params.size() + 5) {
    fail(ErrorKind::kCheckpointMalformed,
         "checkpoint: optimizer table has " + std::to_string(n_opt) +
             " entries, expected " + std::to_string(2 * params.size() + 5));
  }
  std::vector<Entry> staged_m;
  std::vector<Entry> staged_v;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Entry e = reader.entry();
    if (e.name != "adam.m." + params[p].first) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: unexpected optimizer entry '" + e.name + "'");
    }
    staged_m.push_back(std::move(e));
  }
  for (std::size_t p = 0; p < params.size(); ++p) {
    Entry e = reader.entry();
    if (e.name != "adam.v." + params[p].first) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: unexpected optimizer entry '" + e.name + "'");
    }
    staged_v.push_back(std::move(e));
  }
  const char* names[5] = {"adam.step", "train.epoch", "train.best_val",
                          "train.lr", "train.stagnation"};
  double scalars[5];
  for (int i = 0; i < 5; ++i) {
    Entry e = reader.entry();
    if (e.name != names[i] || e.payload.size() != 1) {
      fail(ErrorKind::kCheckpointMalformed,
           "checkpoint: unexpected trailer entry '" + e.name + "'");
    }
    scalars[i] = e.payload[0];
  }

  // Commit.
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor t = params[p].second;
    std::memcpy(t.mutable_data(), staged[p].payload.data(),
                staged[p].payload.size() * sizeof(double));
  }
  if (optimizer) {
    optimizer->m.clear();
    optimizer->v.clear();
    for (std::size_t p = 0; p < params.size(); ++p) {
      optimizer->m.push_back(std::move(staged_m[p].payload));
      optimizer->v.push_back(std::move(staged_v[p].payload));
    }
    optimizer->step = static_cast<std::int64_t>(scalars[0]);
  }
  CheckpointMeta meta;
  meta.epoch = static_cast<std::int64_t>(scalars[1]);
  meta.best_val = scalars[2];
  meta.lr = scalars[3];
  meta.stagnation = static_cast<std::int64_t>(scalars[4]);
  return meta;
}

}  // namespace arfdcn
