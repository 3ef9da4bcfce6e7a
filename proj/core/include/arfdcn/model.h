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

#include <string>
#include <utility>
#include <vector>

#include "arfdcn/attention.h"
#include "arfdcn/config.h"
#include "arfdcn/layers.h"
#include "arfdcn/msf.h"
#include "arfdcn/tensor.h"

namespace arfdcn {

// How much right zero padding the encoder added; decode uses it to land
// exactly on the original length.
struct PadRecord {
  std::int64_t original_len = 0;
  std::int64_t padded_len = 0;
};

struct Encoded {
  Tensor features;  // {C, L}
  PadRecord pad;
};

// Encoder -> separator (fused MSF blocks with optional channel attention)
// -> decoder. A model instance is immutable during inference and may serve
// concurrent forward passes; training mutates parameters through the
// optimizer and needs exclusive access between steps.
class Model {
 public:
  Model(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }

  // {1,T} -> {C, ceil(T/stride)}; T must be >= enc_kernel.
  Encoded encode(const Tensor& wave) const;
  // {C,L} -> {num_sources, C, L}
  Tensor separate(const Tensor& features) const;
  // masks {S,C,L} applied to features, transposed conv back to {S, T}.
  Tensor decode(const Tensor& masks, const Tensor& features,
                const PadRecord& pad) const;
  // encode -> separate -> decode
  Tensor forward(const Tensor& wave) const;

  // Trainable parameters in registration order; names are stable and used by
  // the checkpoint format.
  const std::vector<std::pair<std::string, Tensor>>& parameters() const {
    return params_;
  }

  // Exact number of trainable scalars implied by the config alone.
  static std::int64_t count_params(const ModelConfig& config);

 private:
  struct Block {
    FusionStageParams fuse;
    MsfBlockParams msf;
    ChannelAttentionParams attention;  // unused when attention is disabled
  };

  Tensor register_param(const std::string& name, Tensor t);
  Conv1dSpec encoder_spec(std::int64_t in_len, std::int64_t pad_right) const;

  ModelConfig config_;
  ConvUnit encoder_;
  SmuParams encoder_smu_;
  GlnParams gln_in_;
  ConvUnit conv_in_;
  std::vector<Block> blocks_;
  ConvUnit head_;
  PreluParams head_act_;
  Tensor decoder_weight_;
  std::vector<std::pair<std::string, Tensor>> params_;
};

}  // namespace arfdcn
