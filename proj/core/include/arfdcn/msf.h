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

#include <vector>

#include "arfdcn/conv.h"
#include "arfdcn/layers.h"
#include "arfdcn/tensor.h"

namespace arfdcn {

// Multi-scale fusion block: a 1x1 entry into a bottleneck, a pyramid of
// strided dilated convolutions (each stage halves the length, dilation 2^j
// unless flattened), top-down fusion of adjacent stages through nearest
// upsampling and 1x1 fusers, a 1x1 exit back to full width, and a residual
// connection around the whole block.
struct MsfBlockParams {
  struct Stage {
    ConvUnit conv;
    GlnParams gln;
    PreluParams act;
    std::int64_t dilation = 1;
  };

  ConvUnit entry;              // 1x1, P -> B
  std::vector<Stage> stages;   // J dilated convs, B -> B, kernel 5, stride 2
  std::vector<Stage> fusers;   // J-1 1x1 convs, B -> B (dilation unused)
  ConvUnit exit;               // 1x1, B -> P
  std::int64_t stage_kernel = 5;
  std::int64_t stage_stride = 2;

  std::int64_t num_stages() const {
    return static_cast<std::int64_t>(stages.size());
  }
  // Smallest admissible input length, 2^J.
  std::int64_t min_input_len() const;

  static MsfBlockParams init(std::int64_t width, std::int64_t bottleneck,
                             std::int64_t num_stages, bool exponential_dilations,
                             Rng& rng);
};

Tensor msf_block(const Tensor& x, const MsfBlockParams& p);

// The 1x1 conv + GLN + SMU applied to the running sum of the block history
// (initial separator input plus every earlier block output) before it enters
// the next block.
struct FusionStageParams {
  ConvUnit conv;  // 1x1, P -> P
  GlnParams gln;
  SmuParams smu;

  static FusionStageParams init(std::int64_t width, Rng& rng);
};

// history = [e, M(1), ..., M(t)]; returns c_t(sum of history). The sum is a
// fixed left-to-right reduction, so repeated evaluation is bit-identical.
Tensor fuse_block_inputs(const std::vector<Tensor>& history,
                         const FusionStageParams& p);

}  // namespace arfdcn
