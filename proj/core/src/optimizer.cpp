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

#include "arfdcn/optimizer.h"

#include <cmath>

namespace arfdcn {

void AdamwHyper::validate() const {
  if (!(lr > 0.0)) fail(ErrorKind::kInvalidArgument, "adamw: lr must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    fail(ErrorKind::kInvalidArgument, "adamw: betas must lie in (0,1)");
  }
  if (!(eps > 0.0) || weight_decay < 0.0) {
    fail(ErrorKind::kInvalidArgument, "adamw: bad eps or weight_decay");
  }
}

AdamwState AdamwState::init(
    const std::vector<std::pair<std::string, Tensor>>& params) {
  AdamwState state;
  state.m.reserve(params.size());
  state.v.reserve(params.size());
  for (const auto& [name, t] : params) {
    (void)name;
    state.m.emplace_back(static_cast<std::size_t>(t.size()), 0.0);
    state.v.emplace_back(static_cast<std::size_t>(t.size()), 0.0);
  }
  return state;
}

void adamw_step(const std::vector<std::pair<std::string, Tensor>>& params,
                AdamwState& state, const AdamwHyper& hyper) {
  hyper.validate();
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    fail(ErrorKind::kInvalidArgument,
         "adamw: state not aligned with parameter list");
  }
  // Validate every gradient before touching any weight, so a bad gradient
  // leaves the model untouched.
  for (const auto& [name, t] : params) {
    for (const double g : t.grad()) {
      if (!std::isfinite(g)) {
        fail(ErrorKind::kNonFinite,
             "adamw: non-finite gradient in parameter '" + name + "'");
      }
    }
  }

  const std::int64_t step = state.step + 1;
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor t = params[p].second;
    const std::vector<double>& g = t.grad();
    std::vector<double>& m = state.m[p];
    std::vector<double>& v = state.v[p];
    double* w = t.mutable_data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g[i];
      v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= hyper.lr *
              (mhat / (std::sqrt(vhat) + hyper.eps) + hyper.weight_decay * w[i]);
    }
  }
  state.step = step;
}

bool lr_plateau(TrainState& state, double val_score) {
  if (val_score > state.best_val) {
    state.best_val = val_score;
    state.stagnation = 0;
    return true;
  }
  ++state.stagnation;
  if (state.stagnation >= 2) {
    state.lr *= 0.9;
    state.stagnation = 0;
  }
  return false;
}

double clip_grad_norm(const std::vector<std::pair<std::string, Tensor>>& params,
                      double max_norm) {
  double sq = 0.0;
  for (const auto& [name, t] : params) {
    (void)name;
    for (const double g : t.grad()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (const auto& [name, t] : params) {
      (void)name;
      Tensor tt = t;
      for (double& g : tt.mutable_grad()) g *= factor;
    }
  }
  return norm;
}

}  // namespace arfdcn
