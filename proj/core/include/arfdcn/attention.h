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

#include "arfdcn/conv.h"
#include "arfdcn/tensor.h"

namespace arfdcn {

// Channel-then-position gating from pooled statistics. The kernel-5 conv runs
// over the channel axis on a 1-channel view of the pooled vector; the
// kernel-21 conv runs over time on the stacked avg/max rows. Both gates are
// sigmoids, and the module ends with a residual add of the original input.
struct ChannelAttentionParams {
  ConvUnit conv5;   // 1 -> 1, kernel 5, same padding 2
  ConvUnit conv21;  // 2 -> 1, kernel 21, same padding 10

  static ChannelAttentionParams init(Rng& rng);
};

Tensor channel_attention(const Tensor& f, const ChannelAttentionParams& p);

}  // namespace arfdcn
