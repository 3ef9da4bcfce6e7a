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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "arfdcn/checkpoint.h"
#include "arfdcn/model.h"
#include "arfdcn/ops.h"
#include "arfdcn/rng.h"
#include "gradcheck.h"

using namespace arfdcn;
using testing::grad_check;
using testing::random_tensor;

namespace {

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.enc_channels = 16;
  cfg.sep_channels = 16;
  cfg.bottleneck = 8;
  cfg.msf_stages = 2;
  cfg.num_blocks = 2;
  return cfg;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void flip_byte(const std::filesystem::path& path, std::int64_t offset) {
  std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
  f.seekg(offset);
  char c = 0;
  f.read(&c, 1);
  c = static_cast<char>(c ^ 0xFF);
  f.seekp(offset);
  f.write(&c, 1);
}

}  // namespace

TEST_CASE("encode framing") {
  Model model(tiny_config(), 42);
  NoGradGuard no_grad;
  SUBCASE("4 seconds at 8 kHz gives 3200 frames") {
    Tensor wave = Tensor::zeros({1, 32000});
    const Encoded enc = model.encode(wave);
    CHECK(enc.features.shape() == Shape{16, 3200});
    CHECK(enc.pad.original_len == 32000);
    CHECK(enc.pad.padded_len == 3199 * 10 + 21);
  }
  SUBCASE("zero input gives smu(bias), constant over time") {
    Tensor wave = Tensor::zeros({1, 200});
    const Encoded enc = model.encode(wave);
    for (std::int64_t c = 0; c < enc.features.dim(0); ++c) {
      const double first = enc.features.at(c, 0);
      // the final frame sees padded zeros only, identical to interior frames
      for (std::int64_t t = 1; t < enc.features.dim(1); ++t) {
        CHECK(enc.features.at(c, t) == first);
      }
    }
  }
  SUBCASE("too-short input") {
    try {
      model.encode(Tensor::zeros({1, 20}));
      FAIL("expected input-too-short");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInputTooShort);
    }
  }
}

TEST_CASE("default-size encoder shape contract") {
  ModelConfig cfg;  // paper-scale defaults
  Model model(cfg, 1);
  NoGradGuard no_grad;
  Rng rng(12);
  Tensor wave = random_tensor({1, 32000}, rng, -0.5, 0.5, false);
  const Encoded enc = model.encode(wave);
  CHECK(enc.features.shape() == Shape{512, 3200});
}

TEST_CASE("separate shape contracts and ablations") {
  NoGradGuard no_grad;
  Rng rng(13);
  for (const bool attention : {true, false}) {
    for (const auto mode : {DilationsMode::kExp, DilationsMode::kFlat}) {
      ModelConfig cfg = tiny_config();
      cfg.attention_enabled = attention;
      cfg.dilations_mode = mode;
      Model model(cfg, 7);
      Tensor x = random_tensor({16, 40}, rng, -1, 1, false);
      Tensor masks = model.separate(x);
      CHECK(masks.shape() == Shape{2, 16, 40});
      for (std::int64_t i = 0; i < masks.size(); ++i) {
        CHECK(std::isfinite(masks[i]));
      }
    }
  }
}

TEST_CASE("separate propagates too-short errors") {
  ModelConfig cfg = tiny_config();
  cfg.msf_stages = 4;  // needs L >= 16
  Model model(cfg, 7);
  NoGradGuard no_grad;
  Rng rng(14);
  Tensor x = random_tensor({16, 10}, rng, -1, 1, false);
  CHECK_THROWS_AS(model.separate(x), Error);
}

TEST_CASE("decode length round trip and mask identity") {
  Model model(tiny_config(), 99);
  NoGradGuard no_grad;
  Rng rng(15);
  for (const std::int64_t t_len : {161, 1000, 32000}) {
    Tensor wave = random_tensor({1, t_len}, rng, -0.8, 0.8, false);
    const Encoded enc = model.encode(wave);
    const std::int64_t len = enc.features.dim(1);

    Tensor ones = Tensor::full({2, 16, len}, 1.0);
    Tensor out = model.decode(ones, enc.features, enc.pad);
    CHECK(out.shape() == Shape{2, t_len});

    // all-ones masks reduce decode to the bare transposed conv, trimmed
    Conv1dSpec spec;
    spec.in_channels = 1;
    spec.out_channels = 16;
    spec.kernel = 21;
    spec.stride = 10;
    spec.pad_right = enc.pad.padded_len - enc.pad.original_len;
    Tensor direct = conv1d_transposed(
        enc.features, model.parameters().back().second, spec);
    for (std::int64_t i = 0; i < t_len; ++i) {
      CHECK(out[i] == direct[i]);
    }
  }
}

TEST_CASE("forward composes and is deterministic") {
  Model model(tiny_config(), 5);
  NoGradGuard no_grad;
  Rng rng(16);
  Tensor wave = random_tensor({1, 4000}, rng, -1, 1, false);
  Tensor a = model.forward(wave);
  Tensor b = model.forward(wave);
  CHECK(a.shape() == Shape{2, 4000});
  for (std::int64_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // two identically-seeded models agree bit for bit
  Model twin(tiny_config(), 5);
  Tensor c = twin.forward(wave);
  for (std::int64_t i = 0; i < a.size(); ++i) CHECK(a[i] == c[i]);
}

TEST_CASE("tiny end-to-end gradient check") {
  ModelConfig cfg = tiny_config();
  Model model(cfg, 21);
  Rng rng(22);
  Tensor wave = random_tensor({1, 50}, rng, -1, 1, false);

  std::vector<Tensor> params;
  for (const auto& [name, t] : model.parameters()) params.push_back(t);
  auto result = grad_check(
      params, [&] { return mean(square(model.forward(wave))); }, 1e-5, 1e-4,
      1e-6);
  INFO(result.worst);
  CHECK(result.ok);
}

TEST_CASE("count_params") {
  SUBCASE("default config sits in the published budget window") {
    const std::int64_t n = Model::count_params(ModelConfig{});
    CHECK(n >= 4910000);
    CHECK(n <= 7370000);
  }
  SUBCASE("analytic count equals the constructed parameter total") {
    for (ModelConfig cfg :
         {tiny_config(), ModelConfig{}, [] {
            ModelConfig c = tiny_config();
            c.attention_enabled = false;
            c.dilations_mode = DilationsMode::kFlat;
            c.num_sources = 3;
            c.msf_stages = 1;
            return c;
          }()}) {
      if (cfg.enc_channels == 512) cfg.num_blocks = 1;  // keep alloc small
      Model model(cfg, 0);
      std::int64_t total = 0;
      for (const auto& [name, t] : model.parameters()) total += t.size();
      CHECK(total == Model::count_params(cfg));
    }
  }
  SUBCASE("hand-derived closed form for a degenerate config") {
    ModelConfig cfg;
    cfg.enc_channels = 1;
    cfg.sep_channels = 1;
    cfg.bottleneck = 1;
    cfg.msf_stages = 1;
    cfg.num_blocks = 1;
    // encoder 21+1+1, gln 2, conv_in 2, fuse 5, msf 2+9+2, attn 49,
    // head 5, decoder 21 -> 121 (arithmetic done by hand)
    CHECK(Model::count_params(cfg) == 121);
  }
  SUBCASE("more blocks, more parameters") {
    ModelConfig a = tiny_config();
    ModelConfig b = tiny_config();
    b.num_blocks = 2 * a.num_blocks;
    CHECK(Model::count_params(b) > Model::count_params(a));
  }
}

TEST_CASE("checkpoint round trip and corruption errors") {
  const ModelConfig cfg = tiny_config();
  Model model(cfg, 123);
  NoGradGuard no_grad;
  Rng rng(24);
  Tensor wave = random_tensor({1, 500}, rng, -1, 1, false);
  const Tensor before = model.forward(wave);

  const auto path = temp_file("arfdcn_ckpt_test.bin");
  AdamwState opt = AdamwState::init(model.parameters());
  opt.step = 17;
  CheckpointMeta meta;
  meta.epoch = 3;
  meta.best_val = 1.5;
  meta.lr = 9e-4;
  meta.stagnation = 1;
  save_checkpoint(path, model, &opt, meta);

  SUBCASE("round trip reproduces the forward bit-exactly") {
    Model loaded(cfg, 456);  // different init, then overwritten by load
    AdamwState opt2 = AdamwState::init(loaded.parameters());
    const CheckpointMeta got = load_checkpoint(path, loaded, &opt2);
    CHECK(got.epoch == 3);
    CHECK(got.best_val == 1.5);
    CHECK(got.lr == 9e-4);
    CHECK(got.stagnation == 1);
    CHECK(opt2.step == 17);
    const Tensor after = loaded.forward(wave);
    for (std::int64_t i = 0; i < before.size(); ++i) {
      CHECK(before[i] == after[i]);
    }
  }
  SUBCASE("flipped magic byte") {
    flip_byte(path, 0);
    Model victim(cfg, 1);
    try {
      load_checkpoint(path, victim, nullptr);
      FAIL("expected bad magic");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kCheckpointBadMagic);
    }
  }
  SUBCASE("flipped version byte") {
    flip_byte(path, 4);
    Model victim(cfg, 1);
    try {
      load_checkpoint(path, victim, nullptr);
      FAIL("expected bad version");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kCheckpointBadVersion);
    }
  }
  SUBCASE("flipped fingerprint byte") {
    flip_byte(path, 8);
    Model victim(cfg, 1);
    try {
      load_checkpoint(path, victim, nullptr);
      FAIL("expected fingerprint mismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kCheckpointFingerprint);
    }
  }
  SUBCASE("truncated file leaves no partial model") {
    const auto trunc_path = temp_file("arfdcn_ckpt_trunc.bin");
    {
      std::ifstream in(path, std::ios::binary);
      std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
      std::ofstream out(trunc_path, std::ios::binary | std::ios::trunc);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    Model victim(cfg, 456);
    const Tensor untouched_before = victim.forward(wave);
    try {
      load_checkpoint(trunc_path, victim, nullptr);
      FAIL("expected truncation error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kCheckpointTruncated);
    }
    const Tensor untouched_after = victim.forward(wave);
    for (std::int64_t i = 0; i < untouched_before.size(); ++i) {
      CHECK(untouched_before[i] == untouched_after[i]);
    }
    std::filesystem::remove(trunc_path);
  }
  std::filesystem::remove(path);
}

TEST_CASE("encoder and decoder weights mirror each other in the channel sense") {
  Model model(tiny_config(), 7);
  Tensor enc_w = model.parameters().front().second;   // encoder.weight
  Tensor dec_w = model.parameters().back().second;    // decoder.weight
  CHECK(enc_w.shape() == Shape{16, 1, 21});
  CHECK(dec_w.shape() == Shape{16, 1, 21});
}

TEST_CASE("config file round trip and rejection") {
  ModelConfig cfg = tiny_config();
  cfg.dilations_mode = DilationsMode::kFlat;
  const auto path = temp_file("arfdcn_cfg_test.cfg");
  cfg.save(path);
  const ModelConfig loaded = ModelConfig::load(path);
  CHECK(loaded.to_string() == cfg.to_string());
  CHECK(loaded.fingerprint() == cfg.fingerprint());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(ModelConfig::parse("bogus_key = 3\n"), Error);
  CHECK_THROWS_AS(ModelConfig::parse("enc_kernel = nope\n"), Error);
  try {
    ModelConfig::parse("num_sources = 1\n");
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidArgument);
  }
}
