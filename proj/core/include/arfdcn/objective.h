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

#include <span>
#include <vector>

#include "arfdcn/tensor.h"

namespace arfdcn {

// Scores are clamped to +-60 dB so exact recovery stays finite.
inline constexpr double kSiSdrClampDb = 60.0;

// Scale-invariant source-to-distortion ratio in dB. Both signals are
// mean-removed, the estimate is projected onto the reference, and the ratio
// of target to residual energy is measured. A zero-energy reference is an
// error; a zero-energy projection returns the clamp floor.
double si_sdr(std::span<const double> est, std::span<const double> ref);

// Differentiable twin of si_sdr over rank-1 tensors; returns a scalar. At the
// clamp boundaries (and on the zero-projection branches) the gradient is
// zero, matching the clamp semantics.
Tensor si_sdr(const Tensor& est, const Tensor& ref);

// Plain (non-scale-invariant) 10*log10(|ref|^2/|ref-est|^2), same clamping.
double sdr(std::span<const double> est, std::span<const double> ref);

struct PitResult {
  Tensor loss;                   // scalar: -max over permutations of mean SI-SDR
  std::vector<std::int64_t> permutation;  // refs index for each estimate row
  double mean_si_sdr = 0.0;      // the winning mean, in dB
};

// Utterance-level permutation-invariant loss over {S,T} estimates/references;
// exhaustive over all S! assignments, first maximal assignment wins ties.
PitResult pit_loss(const Tensor& ests, const Tensor& refs);

// Mean best-permutation metric minus the mixture baseline (the mixture scored
// against every reference).
double si_sdri(const std::vector<std::vector<double>>& ests,
               const std::vector<std::vector<double>>& refs,
               std::span<const double> mixture);
double sdri(const std::vector<std::vector<double>>& ests,
            const std::vector<std::vector<double>>& refs,
            std::span<const double> mixture);

}  // namespace arfdcn
