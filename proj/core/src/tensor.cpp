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

#include "arfdcn/tensor.h"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_set>

#include "op_common.h"

namespace arfdcn {

std::int64_t shape_size(const Shape& shape) {
  std::int64_t n = 1;
  for (const std::int64_t d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ',';
    out << shape[i];
  }
  out << '}';
  return out.str();
}

namespace detail {

void TensorImpl::ensure_grad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
}

std::uint64_t next_node_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

Tensor make_op(Shape shape, std::vector<double> data,
               std::vector<Tensor> inputs,
               const std::function<std::function<void()>(TensorImpl*)>&
                   make_backward) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  impl->node_id = next_node_id();

  bool any_tracked = false;
  if (grad_enabled()) {
    for (const Tensor& t : inputs) {
      if (t.defined() && t.impl()->tracked) {
        any_tracked = true;
        break;
      }
    }
  }
  if (any_tracked) {
    impl->tracked = true;
    impl->inputs.reserve(inputs.size());
    for (const Tensor& t : inputs) {
      if (t.defined()) impl->inputs.push_back(t.impl());
    }
    impl->backward_fn = make_backward(impl.get());
  }
  return Tensor(std::move(impl));
}

void accumulate_grad(TensorImpl& target, const std::vector<double>& contribution) {
  target.ensure_grad();
  for (std::size_t i = 0; i < contribution.size(); ++i) {
    target.grad[i] += contribution[i];
  }
}

void accumulate_grad_scaled(TensorImpl& target, const double* values,
                            std::int64_t n, double weight) {
  target.ensure_grad();
  for (std::int64_t i = 0; i < n; ++i) target.grad[i] += weight * values[i];
}

}  // namespace detail

namespace {
void check_defined(const Tensor& t) {
  if (!t.defined()) fail(ErrorKind::kInvalidArgument, "undefined tensor");
}
}  // namespace

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad) {
  const std::int64_t expect = shape_size(shape);
  if (expect != static_cast<std::int64_t>(data.size())) {
    fail(ErrorKind::kShapeMismatch,
         "tensor data has " + std::to_string(data.size()) +
             " elements but shape " + shape_str(shape) + " implies " +
             std::to_string(expect));
  }
  impl_ = std::make_shared<detail::TensorImpl>();
  impl_->shape = std::move(shape);
  impl_->data = std::move(data);
  impl_->requires_grad = requires_grad;
  impl_->tracked = requires_grad;
  impl_->node_id = detail::next_node_id();
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  std::vector<double> data(static_cast<std::size_t>(shape_size(shape)), 0.0);
  return Tensor(std::move(shape), std::move(data), requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  std::vector<double> data(static_cast<std::size_t>(shape_size(shape)), value);
  return Tensor(std::move(shape), std::move(data), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor(Shape{}, std::vector<double>{value}, requires_grad);
}

Tensor Tensor::vector(std::vector<double> data, bool requires_grad) {
  Shape shape{static_cast<std::int64_t>(data.size())};
  return Tensor(std::move(shape), std::move(data), requires_grad);
}

const Shape& Tensor::shape() const {
  check_defined(*this);
  return impl_->shape;
}

std::int64_t Tensor::rank() const {
  return static_cast<std::int64_t>(shape().size());
}

std::int64_t Tensor::size() const {
  check_defined(*this);
  return impl_->size();
}

std::int64_t Tensor::dim(std::int64_t axis) const {
  const Shape& s = shape();
  if (axis < 0 || axis >= static_cast<std::int64_t>(s.size())) {
    fail(ErrorKind::kInvalidArgument,
         "axis " + std::to_string(axis) + " out of range for " + shape_str(s));
  }
  return s[static_cast<std::size_t>(axis)];
}

const double* Tensor::data() const {
  check_defined(*this);
  return impl_->data.data();
}

double Tensor::operator[](std::int64_t flat) const {
  return impl_->data[static_cast<std::size_t>(flat)];
}

double Tensor::at(std::int64_t i, std::int64_t j) const {
  return (*this)[i * dim(1) + j];
}

double Tensor::at(std::int64_t i, std::int64_t j, std::int64_t k) const {
  return (*this)[(i * dim(1) + j) * dim(2) + k];
}

double Tensor::item() const {
  if (size() != 1) {
    fail(ErrorKind::kInvalidArgument,
         "item() requires a size-1 tensor, got " + shape_str(shape()));
  }
  return impl_->data[0];
}

std::vector<double> Tensor::to_vector() const {
  check_defined(*this);
  return impl_->data;
}

bool Tensor::requires_grad() const {
  return impl_ && impl_->requires_grad;
}

bool Tensor::tracked() const { return impl_ && impl_->tracked; }

const std::vector<double>& Tensor::grad() const {
  check_defined(*this);
  impl_->ensure_grad();
  return impl_->grad;
}

std::vector<double>& Tensor::mutable_grad() {
  check_defined(*this);
  impl_->ensure_grad();
  return impl_->grad;
}

void Tensor::zero_grad() {
  check_defined(*this);
  std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0);
}

double* Tensor::mutable_data() {
  check_defined(*this);
  return impl_->data.data();
}

namespace {
thread_local int g_no_grad = 0;
}

NoGradGuard::NoGradGuard() { ++g_no_grad; }
NoGradGuard::~NoGradGuard() { --g_no_grad; }

bool grad_enabled() { return g_no_grad == 0; }

BackwardStats backward(const Tensor& loss) {
  check_defined(loss);
  if (loss.size() != 1) {
    fail(ErrorKind::kNonScalarLoss,
         "backward requires a scalar loss, got " + shape_str(loss.shape()));
  }
  BackwardStats stats;
  if (!loss.tracked()) {
    stats.detached = true;
    return stats;
  }

  // Collect the reachable recorded subgraph, then replay it in descending
  // creation order (a valid reverse topological order by construction).
  std::vector<detail::ImplPtr> nodes;
  std::unordered_set<const detail::TensorImpl*> seen;
  std::vector<detail::ImplPtr> stack{loss.impl()};
  seen.insert(loss.impl().get());
  while (!stack.empty()) {
    detail::ImplPtr cur = stack.back();
    stack.pop_back();
    nodes.push_back(cur);
    for (const detail::ImplPtr& in : cur->inputs) {
      if (in->tracked && seen.insert(in.get()).second) stack.push_back(in);
    }
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const detail::ImplPtr& a, const detail::ImplPtr& b) {
              return a->node_id > b->node_id;
            });

  loss.impl()->ensure_grad();
  loss.impl()->grad[0] += 1.0;
  for (const detail::ImplPtr& node : nodes) {
    if (node->backward_fn) {
      node->ensure_grad();
      node->backward_fn();
    }
    ++stats.nodes_visited;
  }
  // Interior buffers are scratch; clearing them lets the same graph be swept
  // again without stale accumulation. Leaf gradients keep accumulating.
  for (const detail::ImplPtr& node : nodes) {
    if (!node->requires_grad) node->grad.clear();
  }
  return stats;
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShapeMismatch: return "shape-mismatch";
    case ErrorKind::kInputTooShort: return "input-too-short";
    case ErrorKind::kDivideByZero: return "divide-by-zero";
    case ErrorKind::kNonScalarLoss: return "non-scalar-loss";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kEmptyHistory: return "empty-history";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kWavMalformed: return "wav-malformed";
    case ErrorKind::kWavUnsupportedFormat: return "wav-unsupported-format";
    case ErrorKind::kWavUnsupportedChannels: return "wav-unsupported-channels";
    case ErrorKind::kCheckpointBadMagic: return "checkpoint-bad-magic";
    case ErrorKind::kCheckpointBadVersion: return "checkpoint-bad-version";
    case ErrorKind::kCheckpointFingerprint: return "checkpoint-fingerprint";
    case ErrorKind::kCheckpointTruncated: return "checkpoint-truncated";
    case ErrorKind::kCheckpointMalformed: return "checkpoint-malformed";
    case ErrorKind::kConfigParse: return "config-parse";
    case ErrorKind::kManifestParse: return "manifest-parse";
    case ErrorKind::kEmptyManifest: return "empty-manifest";
    case ErrorKind::kNonFinite: return "non-finite";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace arfdcn
