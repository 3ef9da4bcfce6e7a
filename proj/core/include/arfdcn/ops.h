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

#include "arfdcn/tensor.h"

namespace arfdcn {

// Broadcasting is deliberately narrow: a size-1 tensor pairs with anything,
// a {C} or {C,1} vector broadcasts per channel over {C,L}, and a {1,L} row
// broadcasts per time position over {C,L}. Everything else is a shape error
// naming the offending dimension.

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
// Errors out on any exactly-zero divisor element; no silent inf enters the
// forward graph.
Tensor div(const Tensor& a, const Tensor& b);
// Elementwise extrema; ties route the gradient to the first operand.
Tensor maximum(const Tensor& a, const Tensor& b);
Tensor minimum(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor neg(const Tensor& a);
Tensor square(const Tensor& a);

// erf uses the Abramowitz-Stegun 7.1.26 polynomial (max abs error 1.5e-7);
// its backward uses the exact 2/sqrt(pi)*exp(-x^2) derivative.
Tensor erf(const Tensor& a);
Tensor sigmoid(const Tensor& a);
// Natural log; domain error on x <= 0.
Tensor log(const Tensor& a);
// Domain error on x < 0.
Tensor sqrt(const Tensor& a);
// Gradient passes only strictly inside (lo, hi).
Tensor clamp(const Tensor& a, double lo, double hi);

// Reductions use a fixed ascending-index summation order, so repeated
// evaluation is bit-identical.
Tensor sum(const Tensor& a);
Tensor sum(const Tensor& a, std::int64_t axis);  // drops the reduced axis
Tensor mean(const Tensor& a);
Tensor mean(const Tensor& a, std::int64_t axis);
// Biased variance (divide by N), the convention used by every normalization
// statistic in this codebase.
Tensor variance(const Tensor& a);
Tensor variance(const Tensor& a, std::int64_t axis);

Tensor reshape(const Tensor& a, Shape new_shape);
Tensor concat(const std::vector<Tensor>& parts, std::int64_t axis);
// Index along axis 0; the axis is dropped.
Tensor select(const Tensor& a, std::int64_t index);

// {C,L} -> {C,2L} nearest-neighbor upsampling.
Tensor upsample2(const Tensor& a);
// Right-trim or right-zero-pad the time axis of a {C,L} tensor to `target`.
Tensor fit_length(const Tensor& a, std::int64_t target);

enum class PoolKind { kAvg, kMax };
enum class PoolAxis { kTime, kChannel };
// {C,L} -> {C} (over time) or {L} (over channel). Max pooling routes its
// gradient to the first index among ties.
Tensor pool(const Tensor& a, PoolKind kind, PoolAxis axis);

double erf_scalar(double x);

}  // namespace arfdcn
