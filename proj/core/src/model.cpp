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

#include "arfdcn/model.h"

#include <cmath>
#include <string>

#include "arfdcn/ops.h"
#include "arfdcn/rng.h"

namespace arfdcn {

Tensor Model::register_param(const std::string& name, Tensor t) {
  params_.emplace_back(name, t);
  return t;
}

Model::Model(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  Rng rng(seed);
  const std::int64_t enc_c = config_.enc_channels;
  const std::int64_t sep_c = config_.sep_channels;
  const std::int64_t bott = config_.bottleneck;
  const std::int64_t stages = config_.msf_stages;
  const bool exp_dil = config_.dilations_mode == DilationsMode::kExp;

  encoder_ = ConvUnit::init(1, enc_c, config_.enc_kernel, rng);
  encoder_smu_ = SmuParams::init();
  gln_in_ = GlnParams::init(enc_c);
  conv_in_ = ConvUnit::init(enc_c, sep_c, 1, rng);
  for (std::int64_t t = 0; t < config_.num_blocks; ++t) {
    Block block;
    block.fuse = FusionStageParams::init(sep_c, rng);
    block.msf = MsfBlockParams::init(sep_c, bott, stages, exp_dil, rng);
    if (config_.attention_enabled) {
      block.attention = ChannelAttentionParams::init(rng);
    }
    blocks_.push_back(std::move(block));
  }
  head_ = ConvUnit::init(sep_c, config_.num_sources * enc_c, 1, rng);
  head_act_ = PreluParams::init();
  {
    const double bound = 1.0 / std::sqrt(static_cast<double>(enc_c));
    std::vector<double> w(
        static_cast<std::size_t>(enc_c * config_.enc_kernel));
    for (double& v : w) v = rng.uniform(-bound, bound);
    decoder_weight_ =
        Tensor(Shape{enc_c, 1, config_.enc_kernel}, std::move(w), true);
  }

  register_param("encoder.weight", encoder_.weight);
  register_param("encoder.bias", encoder_.bias);
  register_param("encoder.smu_mu", encoder_smu_.mu);
  register_param("sep.gln_in.gamma", gln_in_.gamma);
  register_param("sep.gln_in.beta", gln_in_.beta);
  register_param("sep.conv_in.weight", conv_in_.weight);
  register_param("sep.conv_in.bias", conv_in_.bias);
  for (std::int64_t t = 0; t < config_.num_blocks; ++t) {
    Block& b = blocks_[static_cast<std::size_t>(t)];
    const std::string prefix = "sep.block" + std::to_string(t) + ".";
    register_param(prefix + "fuse.conv.weight", b.fuse.conv.weight);
    register_param(prefix + "fuse.conv.bias", b.fuse.conv.bias);
    register_param(prefix + "fuse.gln.gamma", b.fuse.gln.gamma);
    register_param(prefix + "fuse.gln.beta", b.fuse.gln.beta);
    register_param(prefix + "fuse.smu_mu", b.fuse.smu.mu);
    register_param(prefix + "msf.entry.weight", b.msf.entry.weight);
    register_param(prefix + "msf.entry.bias", b.msf.entry.bias);
    for (std::int64_t j = 0; j < stages; ++j) {
      MsfBlockParams::Stage& s = b.msf.stages[static_cast<std::size_t>(j)];
      const std::string sp = prefix + "msf.stage" + std::to_string(j) + ".";
      register_param(sp + "conv.weight", s.conv.weight);
      register_param(sp + "conv.bias", s.conv.bias);
      register_param(sp + "gln.gamma", s.gln.gamma);
      register_param(sp + "gln.beta", s.gln.beta);
      register_param(sp + "prelu_a", s.act.a);
    }
    for (std::int64_t j = 0; j + 1 < stages; ++j) {
      MsfBlockParams::Stage& s = b.msf.fusers[static_cast<std::size_t>(j)];
      const std::string sp = prefix + "msf.fuser" + std::to_string(j) + ".";
      register_param(sp + "conv.weight", s.conv.weight);
      register_param(sp + "conv.bias", s.conv.bias);
      register_param(sp + "gln.gamma", s.gln.gamma);
      register_param(sp + "gln.beta", s.gln.beta);
      register_param(sp + "prelu_a", s.act.a);
    }
    register_param(prefix + "msf.exit.weight", b.msf.exit.weight);
    register_param(prefix + "msf.exit.bias", b.msf.exit.bias);
    if (config_.attention_enabled) {
      register_param(prefix + "attn.conv5.weight", b.attention.conv5.weight);
      register_param(prefix + "attn.conv5.bias", b.attention.conv5.bias);
      register_param(prefix + "attn.conv21.weight", b.attention.conv21.weight);
      register_param(prefix + "attn.conv21.bias", b.attention.conv21.bias);
    }
  }
  register_param("sep.head.weight", head_.weight);
  register_param("sep.head.bias", head_.bias);
  register_param("sep.head.prelu_a", head_act_.a);
  register_param("decoder.weight", decoder_weight_);
}

Conv1dSpec Model::encoder_spec(std::int64_t in_len,
                               std::int64_t pad_right) const {
  Conv1dSpec spec;
  spec.in_channels = 1;
  spec.out_channels = config_.enc_channels;
  spec.kernel = config_.enc_kernel;
  spec.stride = config_.enc_stride;
  spec.pad_left = 0;
  spec.pad_right = pad_right;
  (void)in_len;
  return spec;
}

Encoded Model::encode(const Tensor& wave) const {
  if (!wave.defined() || wave.rank() != 2 || wave.dim(0) != 1) {
    fail(ErrorKind::kShapeMismatch,
         "encode expects a {1,T} waveform, got " +
             (wave.defined() ? shape_str(wave.shape())
                             : std::string("undefined")));
  }
  const std::int64_t t_len = wave.dim(1);
  if (t_len < config_.enc_kernel) {
    fail(ErrorKind::kInputTooShort,
         "input too short: " + std::to_string(t_len) + " samples < kernel " +
             std::to_string(config_.enc_kernel));
  }
  // Right-pad so exactly ceil(T/stride) frames are produced.
  const std::int64_t frames =
      (t_len + config_.enc_stride - 1) / config_.enc_stride;
  const std::int64_t padded =
      (frames - 1) * config_.enc_stride + config_.enc_kernel;
  Encoded enc;
  enc.pad = {t_len, padded};
  const Conv1dSpec spec = encoder_spec(t_len, padded - t_len);
  enc.features =
      smu(conv1d(wave, encoder_.weight, encoder_.bias, spec), encoder_smu_);
  return enc;
}

Tensor Model::separate(const Tensor& features) const {
  if (!features.defined() || features.rank() != 2 ||
      features.dim(0) != config_.enc_channels) {
    fail(ErrorKind::kShapeMismatch,
         "separate expects {" + std::to_string(config_.enc_channels) +
             ",L} features, got " +
             (features.defined() ? shape_str(features.shape())
                                 : std::string("undefined")));
  }
  const std::int64_t len = features.dim(1);
  Conv1dSpec in_spec;
  in_spec.in_channels = config_.enc_channels;
  in_spec.out_channels = config_.sep_channels;
  in_spec.kernel = 1;
  Tensor entry = conv1d(gln(features, gln_in_), conv_in_.weight, conv_in_.bias,
                        in_spec);

  std::vector<Tensor> history{entry};
  for (const Block& block : blocks_) {
    Tensor fused = fuse_block_inputs(history, block.fuse);
    Tensor out = msf_block(fused, block.msf);
    if (config_.attention_enabled) {
      out = channel_attention(out, block.attention);
    }
    history.push_back(out);
  }

  Conv1dSpec head_spec;
  head_spec.in_channels = config_.sep_channels;
  head_spec.out_channels = config_.num_sources * config_.enc_channels;
  head_spec.kernel = 1;
  Tensor masks = prelu(
      conv1d(history.back(), head_.weight, head_.bias, head_spec), head_act_);
  return reshape(masks,
                 {config_.num_sources, config_.enc_channels, len});
}

Tensor Model::decode(const Tensor& masks, const Tensor& features,
                     const PadRecord& pad) const {
  if (!masks.defined() || masks.rank() != 3 ||
      masks.dim(0) != config_.num_sources ||
      masks.dim(1) != config_.enc_channels) {
    fail(ErrorKind::kShapeMismatch,
         "decode expects {" + std::to_string(config_.num_sources) + "," +
             std::to_string(config_.enc_channels) + ",L} masks, got " +
             (masks.defined() ? shape_str(masks.shape())
                              : std::string("undefined")));
  }
  if (!features.defined() || features.shape() != Shape{config_.enc_channels,
                                                       masks.dim(2)}) {
    fail(ErrorKind::kShapeMismatch, "decode: masks and features disagree");
  }
  // Same spec as the encoder; the recorded right padding doubles as the
  // output trim, so the result lands exactly on the original length.
  const Conv1dSpec spec =
      encoder_spec(pad.original_len, pad.padded_len - pad.original_len);
  std::vector<Tensor> waves;
  waves.reserve(static_cast<std::size_t>(config_.num_sources));
  for (std::int64_t s = 0; s < config_.num_sources; ++s) {
    Tensor masked = mul(select(masks, s), features);
    waves.push_back(conv1d_transposed(masked, decoder_weight_, spec));
  }
  return concat(waves, 0);
}

Tensor Model::forward(const Tensor& wave) const {
  const Encoded enc = encode(wave);
  const Tensor masks = separate(enc.features);
  return decode(masks, enc.features, enc.pad);
}

std::int64_t Model::count_params(const ModelConfig& config) {
  config.validate();
  const std::int64_t c = config.enc_channels;
  const std::int64_t p = config.sep_channels;
  const std::int64_t b = config.bottleneck;
  const std::int64_t j = config.msf_stages;
  const std::int64_t k = config.enc_kernel;
  const std::int64_t s = config.num_sources;

  const std::int64_t encoder = c * k + c + 1;  // conv + bias + smu mu
  const std::int64_t gln_in = 2 * c;
  const std::int64_t conv_in = p * c + p;
  const std::int64_t fuse = (p * p + p) + 2 * p + 1;
  const std::int64_t msf_entry = b * p + b;
  const std::int64_t msf_stage = b * b * 5 + b + 2 * b + 1;
  const std::int64_t msf_fuser = b * b + b + 2 * b + 1;
  const std::int64_t msf_exit = p * b + p;
  const std::int64_t msf = msf_entry + j * msf_stage + (j - 1) * msf_fuser +
                           msf_exit;
  const std::int64_t attention = config.attention_enabled ? (5 + 1) + (2 * 21 + 1) : 0;
  const std::int64_t per_block = fuse + msf + attention;
  const std::int64_t head = (s * c) * p + s * c + 1;
  const std::int64_t decoder = c * k;

  return encoder + gln_in + conv_in + config.num_blocks * per_block + head +
         decoder;
}

}  // namespace arfdcn
