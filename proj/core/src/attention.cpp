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

#include "arfdcn/attention.h"

#include "arfdcn/ops.h"
#include "arfdcn/rng.h"

namespace arfdcn {

ChannelAttentionParams ChannelAttentionParams::init(Rng& rng) {
  ChannelAttentionParams p;
  p.conv5 = ConvUnit::init(1, 1, 5, rng);
  p.conv21 = ConvUnit::init(2, 1, 21, rng);
  return p;
}

Tensor channel_attention(const Tensor& f, const ChannelAttentionParams& p) {
  if (!f.defined() || f.rank() != 2) {
    fail(ErrorKind::kInvalidArgument,
         "channel_attention expects a rank-2 tensor");
  }
  const std::int64_t channels = f.dim(0);
  if (f.dim(1) < 1 || channels < 1) {
    fail(ErrorKind::kEmptyInput, "channel_attention of an empty tensor");
  }

  // Channel gate: pooled-over-time vectors treated as 1-channel sequences of
  // length C; short C is absorbed by the zero padding.
  Conv1dSpec spec5;
  spec5.in_channels = 1;
  spec5.out_channels = 1;
  spec5.kernel = 5;
  spec5.pad_left = 2;
  spec5.pad_right = 2;
  Tensor avg_t = reshape(pool(f, PoolKind::kAvg, PoolAxis::kTime), {1, channels});
  Tensor max_t = reshape(pool(f, PoolKind::kMax, PoolAxis::kTime), {1, channels});
  Tensor gate_c = sigmoid(add(conv1d(avg_t, p.conv5.weight, p.conv5.bias, spec5),
                              conv1d(max_t, p.conv5.weight, p.conv5.bias, spec5)));
  Tensor weighted = mul(f, reshape(gate_c, {channels}));

  // Position gate over the channel-pooled rows of the re-weighted feature.
  const std::int64_t len = f.dim(1);
  Conv1dSpec spec21;
  spec21.in_channels = 2;
  spec21.out_channels = 1;
  spec21.kernel = 21;
  spec21.pad_left = 10;
  spec21.pad_right = 10;
  Tensor avg_c = reshape(pool(weighted, PoolKind::kAvg, PoolAxis::kChannel), {1, len});
  Tensor max_c = reshape(pool(weighted, PoolKind::kMax, PoolAxis::kChannel), {1, len});
  Tensor stacked = concat({avg_c, max_c}, 0);
  Tensor gate_t =
      sigmoid(conv1d(stacked, p.conv21.weight, p.conv21.bias, spec21));

  // Residual adds the original input, not the re-weighted one.
  return add(mul(weighted, gate_t), f);
}

}  // namespace arfdcn
