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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "arfdcn/tensor.h"

namespace arfdcn {

struct AdamwHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;

  void validate() const;
};

// First/second moment buffers aligned with a model's parameter list.
struct AdamwState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;

  static AdamwState init(
      const std::vector<std::pair<std::string, Tensor>>& params);
};

// Decoupled-weight-decay update:
//   m <- b1*m + (1-b1)*g,  v <- b2*v + (1-b2)*g^2,
//   w <- w - lr*(mhat/(sqrt(vhat)+eps) + wd*w)
// Reads gradients from each parameter's grad() buffer. A non-finite gradient
// aborts the step (kNonFinite) naming the parameter; no weight is touched.
void adamw_step(const std::vector<std::pair<std::string, Tensor>>& params,
                AdamwState& state, const AdamwHyper& hyper);

// Epoch bookkeeping for the plateau rule: two consecutive epochs without
// validation improvement multiply the learning rate by 0.9.
struct TrainState {
  std::int64_t epoch = 0;
  double lr = 1e-3;
  double best_val = -std::numeric_limits<double>::infinity();
  std::int64_t stagnation = 0;
  std::uint64_t seed = 0;
};

// Returns true when val_score improved on best_val.
bool lr_plateau(TrainState& state, double val_score);

// Global-norm gradient clipping; returns the pre-clip norm.
double clip_grad_norm(const std::vector<std::pair<std::string, Tensor>>& params,
                      double max_norm);

}  // namespace arfdcn
