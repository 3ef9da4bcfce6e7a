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

#include "arfdcn/layers.h"

namespace arfdcn {

GlnParams GlnParams::init(std::int64_t channels) {
  GlnParams p;
  p.gamma = Tensor::full(Shape{channels}, 1.0, true);
  p.beta = Tensor::zeros(Shape{channels}, true);
  return p;
}

Tensor gln(const Tensor& f, const GlnParams& p) {
  if (!f.defined() || f.size() == 0) {
    fail(ErrorKind::kEmptyInput, "gln of an empty tensor");
  }
  if (p.epsilon <= 0.0) {
    fail(ErrorKind::kInvalidArgument, "gln: epsilon must be > 0");
  }
  Tensor centered = sub(f, mean(f));
  Tensor denom = sqrt(add(variance(f), Tensor::scalar(p.epsilon)));
  return add(mul(div(centered, denom), p.gamma), p.beta);
}

SmuParams SmuParams::init() {
  SmuParams p;
  p.mu = Tensor::scalar(1.0, true);
  return p;
}

Tensor smu(const Tensor& x, const SmuParams& p) {
  if (p.alpha < 0.0 || p.alpha >= 1.0) {
    fail(ErrorKind::kInvalidArgument, "smu: alpha must lie in [0,1)");
  }
  Tensor leak_free = scale(x, 1.0 - p.alpha);
  Tensor gate = erf(mul(leak_free, p.mu));
  return scale(add(scale(x, 1.0 + p.alpha), mul(leak_free, gate)), 0.5);
}

PreluParams PreluParams::init() {
  PreluParams p;
  p.a = Tensor::scalar(0.25, true);
  return p;
}

Tensor prelu(const Tensor& x, const PreluParams& p) {
  Tensor zero = Tensor::scalar(0.0);
  return add(maximum(x, zero), mul(p.a, minimum(x, zero)));
}

}  // namespace arfdcn
