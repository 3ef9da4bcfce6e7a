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

#include <cstdint>

#include "arfdcn/tensor.h"

namespace arfdcn {

// Geometry of a 1-D convolution. in/out channels describe the forward
// (cross-correlation) direction; conv1d_transposed reuses the same spec and
// runs the adjoint map. Padding is always explicit sample counts.
struct Conv1dSpec {
  std::int64_t in_channels = 1;
  std::int64_t out_channels = 1;
  std::int64_t kernel = 1;
  std::int64_t stride = 1;
  std::int64_t dilation = 1;
  std::int64_t pad_left = 0;
  std::int64_t pad_right = 0;
  bool has_bias = true;

  std::int64_t effective_kernel() const { return (kernel - 1) * dilation + 1; }
  // floor((in + pads - effective_kernel)/stride) + 1; throws kInputTooShort
  // when the result would be < 1.
  std::int64_t out_len(std::int64_t in_len) const;
  // Length produced by the adjoint map from `in_len` outputs.
  std::int64_t transposed_out_len(std::int64_t in_len) const;

  void validate() const;

  // Same-style padding: out_len == ceil(in_len/stride), extra odd padding on
  // the right.
  static Conv1dSpec same(std::int64_t in_channels, std::int64_t out_channels,
                         std::int64_t kernel, std::int64_t stride,
                         std::int64_t dilation, std::int64_t in_len);
};

// input {C_in, L}, weights {C_out, C_in, K}, bias {C_out} (undefined Tensor
// when spec.has_bias is false) -> {C_out, out_len}. Plain strided dilated
// cross-correlation; accumulation order per output element is (c_in, k)
// ascending over in-range taps, and the optimized loop keeps that order
// bit-exactly.
Tensor conv1d(const Tensor& input, const Tensor& weights, const Tensor& bias,
              const Conv1dSpec& spec);

// Adjoint of conv1d under the identical spec and the same weight tensor:
// inner(conv1d(x), y) == inner(x, conv1d_transposed(y)). From the transposed
// op's point of view the input has spec.out_channels channels and the output
// has spec.in_channels.
Tensor conv1d_transposed(const Tensor& input, const Tensor& weights,
                         const Conv1dSpec& spec);

class Rng;

// Trainable weight/bias pair for one convolution.
struct ConvUnit {
  Tensor weight;  // {C_out, C_in, K}
  Tensor bias;    // {C_out}; undefined when the layer has no bias

  // Uniform(-b, b) with b = 1/sqrt(C_in*K), the usual fan-in rule.
  static ConvUnit init(std::int64_t in_channels, std::int64_t out_channels,
                       std::int64_t kernel, Rng& rng, bool with_bias = true);
};

}  // namespace arfdcn
