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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "arfdcn/error.h"

namespace arfdcn {

using Shape = std::vector<std::int64_t>;

std::int64_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

// One recorded tape node. Nodes are created in program order, so ascending
// `node_id` is a topological order of the recorded graph: every node's inputs
// carry smaller ids. backward() walks reachable nodes in descending id order
// and accumulates gradients additively, which makes fan-out correct.
struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;  // leaf parameter flag
  bool tracked = false;        // participates in the recorded graph
  std::uint64_t node_id = 0;
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::function<void()> backward_fn;  // empty for leaves
  std::vector<double> grad;           // lazily allocated, same extent as data

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
  void ensure_grad();
};

}  // namespace detail

// Dense row-major tensor of 64-bit floats. Values are immutable once created;
// the only sanctioned mutation is an optimizer writing through mutable_data()
// on an untracked leaf between passes. Read-only tensors are freely shareable
// across threads; independently recorded graphs never share mutable state.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);
  explicit Tensor(std::shared_ptr<detail::TensorImpl> impl)
      : impl_(std::move(impl)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor vector(std::vector<double> data, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  std::int64_t rank() const;
  std::int64_t size() const;
  std::int64_t dim(std::int64_t axis) const;

  const double* data() const;
  double operator[](std::int64_t flat) const;
  double at(std::int64_t i, std::int64_t j) const;
  double at(std::int64_t i, std::int64_t j, std::int64_t k) const;
  double item() const;  // size-1 tensors only
  std::vector<double> to_vector() const;

  bool requires_grad() const;
  bool tracked() const;

  // Leaf gradient buffer, valid after backward(); zeros if never touched.
  const std::vector<double>& grad() const;
  std::vector<double>& mutable_grad();
  void zero_grad();

  // Parameter update hook. Callers must hold the only live graph reference
  // (i.e. between optimizer steps).
  double* mutable_data();

  std::shared_ptr<detail::TensorImpl> impl() const { return impl_; }

 private:
  std::shared_ptr<detail::TensorImpl> impl_;
};

// While one of these is alive on a thread, operations do not record tape
// nodes (inference / finite-difference probes).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;
};

bool grad_enabled();

struct BackwardStats {
  bool detached = false;  // loss had no path to any gradient-requiring leaf
  std::int64_t nodes_visited = 0;
};

// Reverse sweep from a scalar loss. Gradients accumulate into the .grad()
// buffers of every reachable requires_grad leaf. Throws kNonScalarLoss when
// loss.size() != 1; a detached loss yields {detached = true} and no change.
BackwardStats backward(const Tensor& loss);

}  // namespace arfdcn
