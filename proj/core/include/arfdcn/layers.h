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

#include "arfdcn/ops.h"
#include "arfdcn/tensor.h"

namespace arfdcn {

// Global layer normalization: statistics over channel and time jointly,
// per-channel gain/bias.
struct GlnParams {
  Tensor gamma;  // {C}
  Tensor beta;   // {C}
  double epsilon = 1e-8;

  static GlnParams init(std::int64_t channels);
};

Tensor gln(const Tensor& f, const GlnParams& p);

// Smooth maximum unit: a differentiable leaky rectifier
//   smu(x) = ((1+alpha)x + (1-alpha)x*erf(mu*(1-alpha)x)) / 2
// with fixed leak alpha and trainable smoothness mu.
struct SmuParams {
  double alpha = 0.25;
  Tensor mu;  // scalar, trainable, init 1.0

  static SmuParams init();
};

Tensor smu(const Tensor& x, const SmuParams& p);

// One shared trainable negative slope per layer instance.
struct PreluParams {
  Tensor a;  // scalar, init 0.25

  static PreluParams init();
};

Tensor prelu(const Tensor& x, const PreluParams& p);

}  // namespace arfdcn
