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

// Internal helpers shared by the op translation units. Not installed.

#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "arfdcn/tensor.h"

namespace arfdcn::detail {

using ImplPtr = std::shared_ptr<TensorImpl>;

std::uint64_t next_node_id();

// Builds the output tensor for an op. When recording is active and any input
// is tracked, `make_backward` is invoked once with the finished output impl
// and must return the backward closure; otherwise no node is recorded.
Tensor make_op(Shape shape, std::vector<double> data,
               std::vector<Tensor> inputs,
               const std::function<std::function<void()>(TensorImpl*)>&
                   make_backward);

// Accumulates `contribution` into the grad buffer of `target` (allocating it
// on first use). Sizes must already agree.
void accumulate_grad(TensorImpl& target, const std::vector<double>& contribution);

// grad += weight * values (elementwise).
void accumulate_grad_scaled(TensorImpl& target, const double* values,
                            std::int64_t n, double weight);

}  // namespace arfdcn::detail
