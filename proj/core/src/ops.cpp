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

#include "arfdcn/ops.h"

#include <cmath>
#include <string>
#include <utility>

#include "op_common.h"

namespace arfdcn {

namespace {

using detail::ImplPtr;

enum class Bcast { kSame, kScalar, kRow, kCol };

struct BinaryPlan {
  Shape out;
  Bcast a = Bcast::kSame;
  Bcast b = Bcast::kSame;
  std::int64_t cols = 1;  // L of the rank-2 output; used by kRow/kCol mapping
};

std::int64_t map_index(Bcast p, std::int64_t i, std::int64_t cols) {
  switch (p) {
    case Bcast::kSame: return i;
    case Bcast::kScalar: return 0;
    case Bcast::kRow: return i / cols;
    case Bcast::kCol: return i % cols;
  }
  return 0;
}

[[noreturn]] void broadcast_error(const char* op, const Shape& a,
                                  const Shape& b) {
  std::string msg = std::string(op) + ": cannot broadcast " + shape_str(a) +
                    " with " + shape_str(b);
  if (a.size() == b.size()) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] != b[k]) {
        msg += "; dimension " + std::to_string(k) + " differs (" +
               std::to_string(a[k]) + " vs " + std::to_string(b[k]) + ")";
        break;
      }
    }
  } else {
    msg += "; rank " + std::to_string(a.size()) + " vs " +
           std::to_string(b.size());
  }
  fail(ErrorKind::kShapeMismatch, msg);
}

BinaryPlan plan_binary(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.defined() || !b.defined()) {
    fail(ErrorKind::kInvalidArgument, std::string(op) + ": undefined operand");
  }
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  BinaryPlan plan;
  if (sa == sb) {
    plan.out = sa;
  } else if (b.size() == 1) {
    plan.out = sa;
    plan.b = Bcast::kScalar;
  } else if (a.size() == 1) {
    plan.out = sb;
    plan.a = Bcast::kScalar;
  } else if (sa.size() == 2 &&
             (sb == Shape{sa[0]} || sb == Shape{sa[0], 1})) {
    plan.out = sa;
    plan.b = Bcast::kRow;
  } else if (sa.size() == 2 && sb == Shape{1, sa[1]}) {
    plan.out = sa;
    plan.b = Bcast::kCol;
  } else if (sb.size() == 2 &&
             (sa == Shape{sb[0]} || sa == Shape{sb[0], 1})) {
    plan.out = sb;
    plan.a = Bcast::kRow;
  } else if (sb.size() == 2 && sa == Shape{1, sb[1]}) {
    plan.out = sb;
    plan.a = Bcast::kCol;
  } else {
    broadcast_error(op, sa, sb);
  }
  if (plan.out.size() == 2) plan.cols = plan.out[1];
  return plan;
}

// Shared skeleton for elementwise binary ops. fwd(av,bv) computes the value,
// d_a/d_b the partials at that element.
template <typename Fwd, typename Da, typename Db>
Tensor binary_op(const char* name, const Tensor& a, const Tensor& b, Fwd fwd,
                 Da d_a, Db d_b) {
  const BinaryPlan plan = plan_binary(name, a, b);
  const std::int64_t n = shape_size(plan.out);
  const double* pa = a.data();
  const double* pb = b.data();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = fwd(pa[map_index(plan.a, i, plan.cols)],
                                           pb[map_index(plan.b, i, plan.cols)]);
  }
  return detail::make_op(
      plan.out, std::move(out), {a, b},
      [plan, n, d_a, d_b, ai = a.impl(),
       bi = b.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [plan, n, d_a, d_b, ai, bi, self]() {
          const std::vector<double>& g = self->grad;
          const double* pa = ai->data.data();
          const double* pb = bi->data.data();
          if (ai->tracked) {
            ai->ensure_grad();
            for (std::int64_t i = 0; i < n; ++i) {
              const std::int64_t ia = map_index(plan.a, i, plan.cols);
              const std::int64_t ib = map_index(plan.b, i, plan.cols);
              ai->grad[static_cast<std::size_t>(ia)] +=
                  g[static_cast<std::size_t>(i)] * d_a(pa[ia], pb[ib]);
            }
          }
          if (bi->tracked) {
            bi->ensure_grad();
            for (std::int64_t i = 0; i < n; ++i) {
              const std::int64_t ia = map_index(plan.a, i, plan.cols);
              const std::int64_t ib = map_index(plan.b, i, plan.cols);
              bi->grad[static_cast<std::size_t>(ib)] +=
                  g[static_cast<std::size_t>(i)] * d_b(pa[ia], pb[ib]);
            }
          }
        };
      });
}

// Unary skeleton; deriv(x, y) receives the input and output values.
template <typename Fwd, typename Deriv>
Tensor unary_op(const Tensor& a, Fwd fwd, Deriv deriv) {
  if (!a.defined()) fail(ErrorKind::kInvalidArgument, "undefined operand");
  const std::int64_t n = a.size();
  const double* pa = a.data();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = fwd(pa[static_cast<std::size_t>(i)]);
  }
  return detail::make_op(
      a.shape(), std::move(out), {a},
      [n, deriv, ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [n, deriv, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          const std::vector<double>& g = self->grad;
          for (std::int64_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            ai->grad[k] += g[k] * deriv(ai->data[k], self->data[k]);
          }
        };
      });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_op(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_op(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_op(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
  const double* pb = b.data();
  for (std::int64_t i = 0; i < b.size(); ++i) {
    if (pb[static_cast<std::size_t>(i)] == 0.0) {
      fail(ErrorKind::kDivideByZero,
           "div: divisor element " + std::to_string(i) + " is exactly zero");
    }
  }
  return binary_op(
      "div", a, b, [](double x, double y) { return x / y; },
      [](double, double y) { return 1.0 / y; },
      [](double x, double y) { return -x / (y * y); });
}

Tensor maximum(const Tensor& a, const Tensor& b) {
  return binary_op(
      "maximum", a, b, [](double x, double y) { return x >= y ? x : y; },
      [](double x, double y) { return x >= y ? 1.0 : 0.0; },
      [](double x, double y) { return x >= y ? 0.0 : 1.0; });
}

Tensor minimum(const Tensor& a, const Tensor& b) {
  return binary_op(
      "minimum", a, b, [](double x, double y) { return x <= y ? x : y; },
      [](double x, double y) { return x <= y ? 1.0 : 0.0; },
      [](double x, double y) { return x <= y ? 0.0 : 1.0; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary_op(
      a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor neg(const Tensor& a) { return scale(a, -1.0); }

Tensor square(const Tensor& a) { return mul(a, a); }

double erf_scalar(double x) {
  // Abramowitz-Stegun 7.1.26, odd-extended; exact zero at x == 0.
  if (x == 0.0) return 0.0;
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double ax = std::fabs(x);
  const double t = 1.0 / (1.0 + 0.3275911 * ax);
  const double poly =
      t * (0.254829592 +
           t * (-0.284496736 +
                t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
  return sign * (1.0 - poly * std::exp(-ax * ax));
}

Tensor erf(const Tensor& a) {
  constexpr double kTwoOverSqrtPi = 1.1283791670955126;
  return unary_op(
      a, [](double x) { return erf_scalar(x); },
      [](double x, double) { return kTwoOverSqrtPi * std::exp(-x * x); });
}

Tensor sigmoid(const Tensor& a) {
  return unary_op(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor log(const Tensor& a) {
  const double* pa = a.data();
  for (std::int64_t i = 0; i < a.size(); ++i) {
    if (pa[static_cast<std::size_t>(i)] <= 0.0) {
      fail(ErrorKind::kDomain,
           "log: element " + std::to_string(i) + " is not positive");
    }
  }
  return unary_op(
      a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor sqrt(const Tensor& a) {
  const double* pa = a.data();
  for (std::int64_t i = 0; i < a.size(); ++i) {
    if (pa[static_cast<std::size_t>(i)] < 0.0) {
      fail(ErrorKind::kDomain,
           "sqrt: element " + std::to_string(i) + " is negative");
    }
  }
  return unary_op(
      a, [](double x) { return std::sqrt(x); },
      [](double, double y) { return 0.5 / y; });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  if (!(lo <= hi)) fail(ErrorKind::kInvalidArgument, "clamp: lo > hi");
  return unary_op(
      a,
      [lo, hi](double x) { return x < lo ? lo : (x > hi ? hi : x); },
      [lo, hi](double x, double) { return (x > lo && x < hi) ? 1.0 : 0.0; });
}

Tensor sum(const Tensor& a) {
  if (!a.defined()) fail(ErrorKind::kInvalidArgument, "undefined operand");
  if (a.size() == 0) fail(ErrorKind::kEmptyInput, "sum of an empty tensor");
  const double* pa = a.data();
  double acc = 0.0;
  const std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) acc += pa[static_cast<std::size_t>(i)];
  return detail::make_op(
      Shape{}, {acc}, {a},
      [n, ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [n, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          const double g = self->grad[0];
          for (std::int64_t i = 0; i < n; ++i) {
            ai->grad[static_cast<std::size_t>(i)] += g;
          }
        };
      });
}

Tensor sum(const Tensor& a, std::int64_t axis) {
  if (!a.defined()) fail(ErrorKind::kInvalidArgument, "undefined operand");
  if (a.size() == 0) fail(ErrorKind::kEmptyInput, "sum of an empty tensor");
  const Shape& s = a.shape();
  if (s.size() == 1) {
    if (axis != 0) {
      fail(ErrorKind::kInvalidArgument,
           "sum: axis " + std::to_string(axis) + " invalid for rank-1");
    }
    return sum(a);
  }
  if (s.size() != 2 || (axis != 0 && axis != 1)) {
    fail(ErrorKind::kInvalidArgument,
         "sum: axis " + std::to_string(axis) + " invalid for " + shape_str(s));
  }
  const std::int64_t rows = s[0];
  const std::int64_t cols = s[1];
  const double* pa = a.data();
  Shape out_shape{axis == 0 ? cols : rows};
  std::vector<double> out(static_cast<std::size_t>(out_shape[0]), 0.0);
  if (axis == 1) {
    for (std::int64_t c = 0; c < rows; ++c) {
      double acc = 0.0;
      for (std::int64_t l = 0; l < cols; ++l) {
        acc += pa[static_cast<std::size_t>(c * cols + l)];
      }
      out[static_cast<std::size_t>(c)] = acc;
    }
  } else {
    for (std::int64_t c = 0; c < rows; ++c) {
      for (std::int64_t l = 0; l < cols; ++l) {
        out[static_cast<std::size_t>(l)] +=
            pa[static_cast<std::size_t>(c * cols + l)];
      }
    }
  }
  return detail::make_op(
      std::move(out_shape), std::move(out), {a},
      [rows, cols, axis,
       ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [rows, cols, axis, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          const std::vector<double>& g = self->grad;
          for (std::int64_t c = 0; c < rows; ++c) {
            for (std::int64_t l = 0; l < cols; ++l) {
              ai->grad[static_cast<std::size_t>(c * cols + l)] +=
                  g[static_cast<std::size_t>(axis == 1 ? c : l)];
            }
          }
        };
      });
}

Tensor mean(const Tensor& a) {
  if (a.defined() && a.size() == 0) {
    fail(ErrorKind::kEmptyInput, "mean of an empty tensor");
  }
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor mean(const Tensor& a, std::int64_t axis) {
  Tensor s = sum(a, axis);
  const std::int64_t extent =
      a.rank() == 1 ? a.size() : a.dim(axis == 0 ? 0 : 1);
  return scale(s, 1.0 / static_cast<double>(extent));
}

Tensor variance(const Tensor& a) {
  Tensor centered = sub(a, mean(a));
  return mean(square(centered));
}

Tensor variance(const Tensor& a, std::int64_t axis) {
  Tensor m = mean(a, axis);
  if (a.rank() == 2 && axis == 0) m = reshape(m, Shape{1, a.dim(1)});
  Tensor centered = sub(a, m);
  return mean(square(centered), axis);
}

Tensor reshape(const Tensor& a, Shape new_shape) {
  if (!a.defined()) fail(ErrorKind::kInvalidArgument, "undefined operand");
  if (shape_size(new_shape) != a.size()) {
    fail(ErrorKind::kShapeMismatch,
         "reshape: " + shape_str(a.shape()) + " has " +
             std::to_string(a.size()) + " elements, target " +
             shape_str(new_shape) + " has " +
             std::to_string(shape_size(new_shape)));
  }
  const std::int64_t n = a.size();
  return detail::make_op(
      std::move(new_shape), a.to_vector(), {a},
      [n, ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [n, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          for (std::int64_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            ai->grad[k] += self->grad[k];
          }
        };
      });
}

Tensor concat(const std::vector<Tensor>& parts, std::int64_t axis) {
  if (parts.empty()) fail(ErrorKind::kEmptyInput, "concat of zero tensors");
  const Shape& first = parts.front().shape();
  const std::int64_t rank = static_cast<std::int64_t>(first.size());
  if (rank < 1 || rank > 2 || axis < 0 || axis >= rank) {
    fail(ErrorKind::kInvalidArgument,
         "concat: axis " + std::to_string(axis) + " invalid for rank " +
             std::to_string(rank));
  }
  Shape out_shape = first;
  for (std::size_t p = 1; p < parts.size(); ++p) {
    const Shape& s = parts[p].shape();
    if (static_cast<std::int64_t>(s.size()) != rank) {
      fail(ErrorKind::kShapeMismatch, "concat: rank mismatch at part " +
                                          std::to_string(p));
    }
    for (std::int64_t d = 0; d < rank; ++d) {
      if (d != axis && s[static_cast<std::size_t>(d)] !=
                           first[static_cast<std::size_t>(d)]) {
        fail(ErrorKind::kShapeMismatch,
             "concat: dimension " + std::to_string(d) + " differs at part " +
                 std::to_string(p) + " (" +
                 std::to_string(s[static_cast<std::size_t>(d)]) + " vs " +
                 std::to_string(first[static_cast<std::size_t>(d)]) + ")");
      }
    }
    out_shape[static_cast<std::size_t>(axis)] +=
        s[static_cast<std::size_t>(axis)];
  }

  std::vector<double> out(static_cast<std::size_t>(shape_size(out_shape)));
  const std::int64_t out_cols = rank == 2 ? out_shape[1] : 1;
  std::vector<std::int64_t> offsets(parts.size(), 0);
  if (rank == 1 || axis == 0) {
    std::int64_t pos = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      offsets[p] = pos;
      const double* src = parts[p].data();
      const std::int64_t n = parts[p].size();
      std::copy(src, src + n, out.begin() + pos);
      pos += n;
    }
  } else {
    // axis == 1, rank 2: column-wise interleave per row
    const std::int64_t rows = out_shape[0];
    std::int64_t col0 = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      offsets[p] = col0;
      const std::int64_t pc = parts[p].dim(1);
      const double* src = parts[p].data();
      for (std::int64_t r = 0; r < rows; ++r) {
        std::copy(src + r * pc, src + (r + 1) * pc,
                  out.begin() + r * out_cols + col0);
      }
      col0 += pc;
    }
  }

  std::vector<ImplPtr> impls;
  impls.reserve(parts.size());
  for (const Tensor& t : parts) impls.push_back(t.impl());
  return detail::make_op(
      out_shape, std::move(out), parts,
      [impls, offsets, axis, rank,
       out_cols](detail::TensorImpl* self) -> std::function<void()> {
        return [impls, offsets, axis, rank, out_cols, self]() {
          const std::vector<double>& g = self->grad;
          for (std::size_t p = 0; p < impls.size(); ++p) {
            const ImplPtr& t = impls[p];
            if (!t->tracked) continue;
            t->ensure_grad();
            if (rank == 1 || axis == 0) {
              const std::int64_t n = t->size();
              for (std::int64_t i = 0; i < n; ++i) {
                t->grad[static_cast<std::size_t>(i)] +=
                    g[static_cast<std::size_t>(offsets[p] + i)];
              }
            } else {
              const std::int64_t rows = t->shape[0];
              const std::int64_t pc = t->shape[1];
              for (std::int64_t r = 0; r < rows; ++r) {
                for (std::int64_t c = 0; c < pc; ++c) {
                  t->grad[static_cast<std::size_t>(r * pc + c)] +=
                      g[static_cast<std::size_t>(r * out_cols + offsets[p] +
                                                 c)];
                }
              }
            }
          }
        };
      });
}

Tensor select(const Tensor& a, std::int64_t index) {
  if (!a.defined()) fail(ErrorKind::kInvalidArgument, "undefined operand");
  if (a.rank() < 1) {
    fail(ErrorKind::kInvalidArgument, "select on a rank-0 tensor");
  }
  const std::int64_t n0 = a.dim(0);
  if (index < 0 || index >= n0) {
    fail(ErrorKind::kInvalidArgument,
         "select: index " + std::to_string(index) + " out of range [0," +
             std::to_string(n0) + ")");
  }
  Shape out_shape(a.shape().begin() + 1, a.shape().end());
  const std::int64_t block = shape_size(out_shape);
  const double* src = a.data() + index * block;
  std::vector<double> out(src, src + block);
  return detail::make_op(
      std::move(out_shape), std::move(out), {a},
      [index, block,
       ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [index, block, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          for (std::int64_t i = 0; i < block; ++i) {
            ai->grad[static_cast<std::size_t>(index * block + i)] +=
                self->grad[static_cast<std::size_t>(i)];
          }
        };
      });
}

Tensor upsample2(const Tensor& a) {
  if (!a.defined() || a.rank() != 2) {
    fail(ErrorKind::kInvalidArgument, "upsample2 expects a rank-2 tensor");
  }
  const std::int64_t rows = a.dim(0);
  const std::int64_t cols = a.dim(1);
  const double* src = a.data();
  std::vector<double> out(static_cast<std::size_t>(rows * cols * 2));
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      const double v = src[static_cast<std::size_t>(r * cols + c)];
      out[static_cast<std::size_t>(r * cols * 2 + 2 * c)] = v;
      out[static_cast<std::size_t>(r * cols * 2 + 2 * c + 1)] = v;
    }
  }
  return detail::make_op(
      Shape{rows, cols * 2}, std::move(out), {a},
      [rows, cols,
       ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [rows, cols, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          const std::vector<double>& g = self->grad;
          for (std::int64_t r = 0; r < rows; ++r) {
            for (std::int64_t c = 0; c < cols; ++c) {
              ai->grad[static_cast<std::size_t>(r * cols + c)] +=
                  g[static_cast<std::size_t>(r * cols * 2 + 2 * c)] +
                  g[static_cast<std::size_t>(r * cols * 2 + 2 * c + 1)];
            }
          }
        };
      });
}

Tensor fit_length(const Tensor& a, std::int64_t target) {
  if (!a.defined() || a.rank() != 2) {
    fail(ErrorKind::kInvalidArgument, "fit_length expects a rank-2 tensor");
  }
  if (target < 1) {
    fail(ErrorKind::kInvalidArgument, "fit_length: target must be >= 1");
  }
  const std::int64_t rows = a.dim(0);
  const std::int64_t cols = a.dim(1);
  const std::int64_t keep = std::min(cols, target);
  const double* src = a.data();
  std::vector<double> out(static_cast<std::size_t>(rows * target), 0.0);
  for (std::int64_t r = 0; r < rows; ++r) {
    std::copy(src + r * cols, src + r * cols + keep,
              out.begin() + r * target);
  }
  return detail::make_op(
      Shape{rows, target}, std::move(out), {a},
      [rows, cols, target, keep,
       ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [rows, cols, target, keep, ai, self]() {
          if (!ai->tracked) return;
          ai->ensure_grad();
          const std::vector<double>& g = self->grad;
          for (std::int64_t r = 0; r < rows; ++r) {
            for (std::int64_t c = 0; c < keep; ++c) {
              ai->grad[static_cast<std::size_t>(r * cols + c)] +=
                  g[static_cast<std::size_t>(r * target + c)];
            }
          }
        };
      });
}

Tensor pool(const Tensor& a, PoolKind kind, PoolAxis axis) {
  if (!a.defined() || a.rank() != 2) {
    fail(ErrorKind::kInvalidArgument, "pool expects a rank-2 tensor");
  }
  const std::int64_t rows = a.dim(0);
  const std::int64_t cols = a.dim(1);
  if (rows < 1 || cols < 1) {
    fail(ErrorKind::kEmptyInput, "pool of an empty tensor");
  }
  const double* src = a.data();
  const bool over_time = axis == PoolAxis::kTime;
  const std::int64_t out_n = over_time ? rows : cols;
  const std::int64_t span = over_time ? cols : rows;
  std::vector<double> out(static_cast<std::size_t>(out_n));
  std::vector<std::int64_t> argmax;
  if (kind == PoolKind::kMax) argmax.assign(static_cast<std::size_t>(out_n), 0);

  auto flat = [&](std::int64_t o, std::int64_t k) {
    return over_time ? o * cols + k : k * cols + o;
  };
  for (std::int64_t o = 0; o < out_n; ++o) {
    if (kind == PoolKind::kAvg) {
      double acc = 0.0;
      for (std::int64_t k = 0; k < span; ++k) {
        acc += src[static_cast<std::size_t>(flat(o, k))];
      }
      out[static_cast<std::size_t>(o)] = acc / static_cast<double>(span);
    } else {
      // first index wins ties
      std::int64_t best = 0;
      double best_v = src[static_cast<std::size_t>(flat(o, 0))];
      for (std::int64_t k = 1; k < span; ++k) {
        const double v = src[static_cast<std::size_t>(flat(o, k))];
        if (v > best_v) {
          best_v = v;
          best = k;
        }
      }
      out[static_cast<std::size_t>(o)] = best_v;
      argmax[static_cast<std::size_t>(o)] = best;
    }
  }

  return detail::make_op(
      Shape{out_n}, std::move(out), {a},
      [rows, cols, over_time, kind, out_n, span, argmax,
       ai = a.impl()](detail::TensorImpl* self) -> std::function<void()> {
        return [rows, cols, over_time, kind, out_n, span, argmax, ai, self]() {
          (void)rows;
          if (!ai->tracked) return;
          ai->ensure_grad();
          const std::vector<double>& g = self->grad;
          auto flat = [&](std::int64_t o, std::int64_t k) {
            return over_time ? o * cols + k : k * cols + o;
          };
          for (std::int64_t o = 0; o < out_n; ++o) {
            const double go = g[static_cast<std::size_t>(o)];
            if (kind == PoolKind::kAvg) {
              const double w = go / static_cast<double>(span);
              for (std::int64_t k = 0; k < span; ++k) {
                ai->grad[static_cast<std::size_t>(flat(o, k))] += w;
              }
            } else {
              ai->grad[static_cast<std::size_t>(
                  flat(o, argmax[static_cast<std::size_t>(o)]))] += go;
            }
          }
        };
      });
}

}  // namespace arfdcn
