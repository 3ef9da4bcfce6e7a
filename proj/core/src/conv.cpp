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

#include "arfdcn/conv.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "arfdcn/rng.h"
#include "op_common.h"

namespace arfdcn {

namespace {

// Inclusive range of output steps t for which 0 <= t*stride + offset < len.
struct StepRange {
  std::int64_t lo;
  std::int64_t hi;  // exclusive of the caller's own upper bound
};

StepRange step_range(std::int64_t offset, std::int64_t stride,
                     std::int64_t len, std::int64_t t_max) {
  std::int64_t lo = 0;
  if (offset < 0) lo = (-offset + stride - 1) / stride;
  std::int64_t hi = t_max;  // inclusive
  const std::int64_t top = len - 1 - offset;
  if (top < 0) {
    hi = -1;
  } else {
    hi = std::min(hi, top / stride);
  }
  return {lo, hi};
}

void check_rank2(const char* op, const Tensor& t, const char* role) {
  if (!t.defined() || t.rank() != 2) {
    fail(ErrorKind::kShapeMismatch,
         std::string(op) + ": " + role + " must be rank-2, got " +
             (t.defined() ? shape_str(t.shape()) : std::string("undefined")));
  }
}

}  // namespace

void Conv1dSpec::validate() const {
  if (in_channels < 1 || out_channels < 1 || kernel < 1) {
    fail(ErrorKind::kInvalidArgument,
         "conv spec: channel counts and kernel must be >= 1");
  }
  if (stride < 1 || dilation < 1) {
    fail(ErrorKind::kInvalidArgument,
         "conv spec: stride and dilation must be >= 1");
  }
  if (pad_left < 0 || pad_right < 0) {
    fail(ErrorKind::kInvalidArgument, "conv spec: padding must be >= 0");
  }
}

std::int64_t Conv1dSpec::out_len(std::int64_t in_len) const {
  const std::int64_t numer = in_len + pad_left + pad_right - effective_kernel();
  const std::int64_t out = numer < 0 ? 0 : numer / stride + 1;
  if (out < 1) {
    fail(ErrorKind::kInputTooShort,
         "input too short: length " + std::to_string(in_len) +
             " with padding (" + std::to_string(pad_left) + "," +
             std::to_string(pad_right) + ") cannot cover effective kernel " +
             std::to_string(effective_kernel()));
  }
  return out;
}

std::int64_t Conv1dSpec::transposed_out_len(std::int64_t in_len) const {
  const std::int64_t out =
      (in_len - 1) * stride + effective_kernel() - pad_left - pad_right;
  if (out < 1) {
    fail(ErrorKind::kInputTooShort,
         "input too short: transposed output length would be " +
             std::to_string(out));
  }
  return out;
}

Conv1dSpec Conv1dSpec::same(std::int64_t in_channels, std::int64_t out_channels,
                            std::int64_t kernel, std::int64_t stride,
                            std::int64_t dilation, std::int64_t in_len) {
  Conv1dSpec spec;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.kernel = kernel;
  spec.stride = stride;
  spec.dilation = dilation;
  if (spec.effective_kernel() < stride) {
    fail(ErrorKind::kInvalidArgument,
         "same padding requires effective kernel >= stride");
  }
  const std::int64_t out = (in_len + stride - 1) / stride;
  const std::int64_t total =
      (out - 1) * stride + spec.effective_kernel() - in_len;
  spec.pad_left = total / 2;
  spec.pad_right = total - spec.pad_left;  // odd extra goes right
  return spec;
}

ConvUnit ConvUnit::init(std::int64_t in_channels, std::int64_t out_channels,
                        std::int64_t kernel, Rng& rng, bool with_bias) {
  const double bound =
      1.0 / std::sqrt(static_cast<double>(in_channels * kernel));
  std::vector<double> w(
      static_cast<std::size_t>(out_channels * in_channels * kernel));
  for (double& v : w) v = rng.uniform(-bound, bound);
  ConvUnit unit;
  unit.weight = Tensor(Shape{out_channels, in_channels, kernel}, std::move(w),
                       true);
  if (with_bias) {
    std::vector<double> b(static_cast<std::size_t>(out_channels));
    for (double& v : b) v = rng.uniform(-bound, bound);
    unit.bias = Tensor(Shape{out_channels}, std::move(b), true);
  }
  return unit;
}

Tensor conv1d(const Tensor& input, const Tensor& weights, const Tensor& bias,
              const Conv1dSpec& spec) {
  spec.validate();
  check_rank2("conv1d", input, "input");
  if (input.dim(0) != spec.in_channels) {
    fail(ErrorKind::kShapeMismatch,
         "conv1d: input has " + std::to_string(input.dim(0)) +
             " channels, spec expects " + std::to_string(spec.in_channels) +
             " (dimension 0)");
  }
  if (!weights.defined() || weights.rank() != 3 ||
      weights.dim(0) != spec.out_channels ||
      weights.dim(1) != spec.in_channels || weights.dim(2) != spec.kernel) {
    fail(ErrorKind::kShapeMismatch,
         "conv1d: weights must be {" + std::to_string(spec.out_channels) +
             "," + std::to_string(spec.in_channels) + "," +
             std::to_string(spec.kernel) + "}, got " +
             (weights.defined() ? shape_str(weights.shape())
                                : std::string("undefined")));
  }
  if (spec.has_bias) {
    if (!bias.defined() || bias.shape() != Shape{spec.out_channels}) {
      fail(ErrorKind::kShapeMismatch,
           "conv1d: bias must be {" + std::to_string(spec.out_channels) +
               "}" + (bias.defined() ? ", got " + shape_str(bias.shape())
                                     : std::string(", got undefined")));
    }
  } else if (bias.defined()) {
    fail(ErrorKind::kInvalidArgument,
         "conv1d: bias passed but spec.has_bias is false");
  }

  const std::int64_t ci_n = spec.in_channels;
  const std::int64_t co_n = spec.out_channels;
  const std::int64_t k_n = spec.kernel;
  const std::int64_t in_len = input.dim(1);
  const std::int64_t out_len = spec.out_len(in_len);

  const double* x = input.data();
  const double* w = weights.data();
  std::vector<double> out(static_cast<std::size_t>(co_n * out_len));

  // Per output element the accumulation order is (c_in, k) ascending over
  // in-range taps; the t-inner arrangement only reorders independent output
  // elements, so results match the definition bit for bit.
  for (std::int64_t co = 0; co < co_n; ++co) {
    double* row = out.data() + co * out_len;
    const double b = spec.has_bias ? bias[co] : 0.0;
    std::fill(row, row + out_len, b);
    for (std::int64_t ci = 0; ci < ci_n; ++ci) {
      const double* xrow = x + ci * in_len;
      for (std::int64_t k = 0; k < k_n; ++k) {
        const double wv = w[(co * ci_n + ci) * k_n + k];
        const std::int64_t off = k * spec.dilation - spec.pad_left;
        const StepRange r = step_range(off, spec.stride, in_len, out_len - 1);
        for (std::int64_t t = r.lo; t <= r.hi; ++t) {
          row[t] += wv * xrow[t * spec.stride + off];
        }
      }
    }
  }

  return detail::make_op(
      Shape{co_n, out_len}, std::move(out),
      {input, weights, bias.defined() ? bias : Tensor()},
      [spec, ci_n, co_n, k_n, in_len, out_len, xi = input.impl(),
       wi = weights.impl(),
       bi = bias.defined() ? bias.impl() : detail::ImplPtr()](
          detail::TensorImpl* self) -> std::function<void()> {
        return [spec, ci_n, co_n, k_n, in_len, out_len, xi, wi, bi, self]() {
          const std::vector<double>& g = self->grad;
          const double* x = xi->data.data();
          const double* w = wi->data.data();
          const bool need_x = xi->tracked;
          const bool need_w = wi->tracked;
          if (need_x) xi->ensure_grad();
          if (need_w) wi->ensure_grad();
          for (std::int64_t co = 0; co < co_n; ++co) {
            const double* grow = g.data() + co * out_len;
            for (std::int64_t ci = 0; ci < ci_n; ++ci) {
              const double* xrow = x + ci * in_len;
              double* gxrow = need_x ? xi->grad.data() + ci * in_len : nullptr;
              for (std::int64_t k = 0; k < k_n; ++k) {
                const std::int64_t wk = (co * ci_n + ci) * k_n + k;
                const double wv = w[wk];
                const std::int64_t off = k * spec.dilation - spec.pad_left;
                const StepRange r =
                    step_range(off, spec.stride, in_len, out_len - 1);
                double wacc = 0.0;
                for (std::int64_t t = r.lo; t <= r.hi; ++t) {
                  const std::int64_t j = t * spec.stride + off;
                  if (need_x) gxrow[j] += wv * grow[t];
                  wacc += xrow[j] * grow[t];
                }
                if (need_w) wi->grad[static_cast<std::size_t>(wk)] += wacc;
              }
            }
          }
          if (bi && bi->tracked) {
            bi->ensure_grad();
            for (std::int64_t co = 0; co < co_n; ++co) {
              double acc = 0.0;
              const double* grow = g.data() + co * out_len;
              for (std::int64_t t = 0; t < out_len; ++t) acc += grow[t];
              bi->grad[static_cast<std::size_t>(co)] += acc;
            }
          }
        };
      });
}

Tensor conv1d_transposed(const Tensor& input, const Tensor& weights,
                         const Conv1dSpec& spec) {
  spec.validate();
  check_rank2("conv1d_transposed", input, "input");
  if (input.dim(0) != spec.out_channels) {
    fail(ErrorKind::kShapeMismatch,
         "conv1d_transposed: input has " + std::to_string(input.dim(0)) +
             " channels, spec expects " + std::to_string(spec.out_channels) +
             " (dimension 0)");
  }
  if (!weights.defined() || weights.rank() != 3 ||
      weights.dim(0) != spec.out_channels ||
      weights.dim(1) != spec.in_channels || weights.dim(2) != spec.kernel) {
    fail(ErrorKind::kShapeMismatch,
         "conv1d_transposed: weights must be {" +
             std::to_string(spec.out_channels) + "," +
             std::to_string(spec.in_channels) + "," +
             std::to_string(spec.kernel) + "}, got " +
             (weights.defined() ? shape_str(weights.shape())
                                : std::string("undefined")));
  }

  const std::int64_t ci_n = spec.in_channels;   // transposed output channels
  const std::int64_t co_n = spec.out_channels;  // transposed input channels
  const std::int64_t k_n = spec.kernel;
  const std::int64_t in_len = input.dim(1);
  const std::int64_t out_len = spec.transposed_out_len(in_len);

  const double* y = input.data();
  const double* w = weights.data();
  std::vector<double> out(static_cast<std::size_t>(ci_n * out_len), 0.0);

  for (std::int64_t co = 0; co < co_n; ++co) {
    const double* yrow = y + co * in_len;
    for (std::int64_t ci = 0; ci < ci_n; ++ci) {
      double* orow = out.data() + ci * out_len;
      for (std::int64_t k = 0; k < k_n; ++k) {
        const double wv = w[(co * ci_n + ci) * k_n + k];
        const std::int64_t off = k * spec.dilation - spec.pad_left;
        const StepRange r = step_range(off, spec.stride, out_len, in_len - 1);
        for (std::int64_t t = r.lo; t <= r.hi; ++t) {
          orow[t * spec.stride + off] += wv * yrow[t];
        }
      }
    }
  }

  return detail::make_op(
      Shape{ci_n, out_len}, std::move(out), {input, weights},
      [spec, ci_n, co_n, k_n, in_len, out_len, yi = input.impl(),
       wi = weights.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [spec, ci_n, co_n, k_n, in_len, out_len, yi, wi, self]() {
          const std::vector<double>& g = self->grad;
          const double* y = yi->data.data();
          const double* w = wi->data.data();
          const bool need_y = yi->tracked;
          const bool need_w = wi->tracked;
          if (need_y) yi->ensure_grad();
          if (need_w) wi->ensure_grad();
          for (std::int64_t co = 0; co < co_n; ++co) {
            const double* yrow = y + co * in_len;
            double* gyrow = need_y ? yi->grad.data() + co * in_len : nullptr;
            for (std::int64_t ci = 0; ci < ci_n; ++ci) {
              const double* grow = g.data() + ci * out_len;
              for (std::int64_t k = 0; k < k_n; ++k) {
                const std::int64_t wk = (co * ci_n + ci) * k_n + k;
                const double wv = w[wk];
                const std::int64_t off = k * spec.dilation - spec.pad_left;
                const StepRange r =
                    step_range(off, spec.stride, out_len, in_len - 1);
                double wacc = 0.0;
                for (std::int64_t t = r.lo; t <= r.hi; ++t) {
                  const std::int64_t j = t * spec.stride + off;
                  if (need_y) gyrow[t] += wv * grow[j];
                  wacc += yrow[t] * grow[j];
                }
                if (need_w) wi->grad[static_cast<std::size_t>(wk)] += wacc;
              }
            }
          }
        };
      });
}

}  // namespace arfdcn
