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

#include "arfdcn/objective.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "arfdcn/ops.h"

namespace arfdcn {

namespace {

constexpr double kLog10Factor = 10.0 / 2.302585092994046;  // 10/ln(10)

void check_pair(std::size_t ne, std::size_t nr) {
  if (ne != nr) {
    fail(ErrorKind::kShapeMismatch,
         "si_sdr: estimate length " + std::to_string(ne) +
             " != reference length " + std::to_string(nr));
  }
  if (ne < 2) {
    fail(ErrorKind::kInvalidArgument, "si_sdr: need at least 2 samples");
  }
}

double mean_of(std::span<const double> x) {
  double acc = 0.0;
  for (const double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

}  // namespace

double si_sdr(std::span<const double> est, std::span<const double> ref) {
  check_pair(est.size(), ref.size());
  const double me = mean_of(est);
  const double mr = mean_of(ref);
  double dot = 0.0;
  double ref_energy = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double e = est[i] - me;
    const double r = ref[i] - mr;
    dot += e * r;
    ref_energy += r * r;
  }
  if (ref_energy == 0.0) {
    fail(ErrorKind::kInvalidArgument, "si_sdr: zero-energy reference");
  }
  const double proj = dot / ref_energy;
  double target_energy = 0.0;
  double noise_energy = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double e = est[i] - me;
    const double r = ref[i] - mr;
    const double s = proj * r;
    target_energy += s * s;
    const double n = e - s;
    noise_energy += n * n;
  }
  if (target_energy == 0.0) return -kSiSdrClampDb;
  if (noise_energy == 0.0) return kSiSdrClampDb;
  const double value = kLog10Factor * std::log(target_energy / noise_energy);
  return std::clamp(value, -kSiSdrClampDb, kSiSdrClampDb);
}

Tensor si_sdr(const Tensor& est, const Tensor& ref) {
  if (!est.defined() || !ref.defined() || est.rank() != 1 || ref.rank() != 1) {
    fail(ErrorKind::kInvalidArgument, "si_sdr: expects rank-1 tensors");
  }
  check_pair(static_cast<std::size_t>(est.size()),
             static_cast<std::size_t>(ref.size()));

  Tensor e0 = sub(est, mean(est));
  Tensor r0 = sub(ref, mean(ref));
  Tensor ref_energy = sum(square(r0));
  if (ref_energy.item() == 0.0) {
    fail(ErrorKind::kInvalidArgument, "si_sdr: zero-energy reference");
  }
  Tensor target = mul(r0, div(sum(mul(e0, r0)), ref_energy));
  Tensor target_energy = sum(square(target));
  // Degenerate branches return detached constants; the clamp gradient is
  // zero there anyway.
  if (target_energy.item() == 0.0) return Tensor::scalar(-kSiSdrClampDb);
  Tensor noise_energy = sum(square(sub(e0, target)));
  if (noise_energy.item() == 0.0) return Tensor::scalar(kSiSdrClampDb);
  Tensor value = scale(log(div(target_energy, noise_energy)), kLog10Factor);
  return clamp(value, -kSiSdrClampDb, kSiSdrClampDb);
}

double sdr(std::span<const double> est, std::span<const double> ref) {
  check_pair(est.size(), ref.size());
  double ref_energy = 0.0;
  double err_energy = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    ref_energy += ref[i] * ref[i];
    const double d = ref[i] - est[i];
    err_energy += d * d;
  }
  if (ref_energy == 0.0) {
    fail(ErrorKind::kInvalidArgument, "sdr: zero-energy reference");
  }
  if (err_energy == 0.0) return kSiSdrClampDb;
  const double value = kLog10Factor * std::log(ref_energy / err_energy);
  return std::clamp(value, -kSiSdrClampDb, kSiSdrClampDb);
}

PitResult pit_loss(const Tensor& ests, const Tensor& refs) {
  if (!ests.defined() || !refs.defined() || ests.rank() != 2 ||
      refs.rank() != 2 || ests.shape() != refs.shape()) {
    fail(ErrorKind::kShapeMismatch, "pit_loss: estimates and references must share an {S,T} shape");
  }
  const std::int64_t sources = ests.dim(0);

  // Score every (estimate, reference) pair once, then enumerate assignments.
  std::vector<std::vector<Tensor>> pair_scores(
      static_cast<std::size_t>(sources));
  for (std::int64_t i = 0; i < sources; ++i) {
    for (std::int64_t j = 0; j < sources; ++j) {
      pair_scores[static_cast<std::size_t>(i)].push_back(
          si_sdr(select(ests, i), select(refs, j)));
    }
  }

  std::vector<std::int64_t> perm(static_cast<std::size_t>(sources));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::int64_t> best_perm = perm;
  double best_mean = -std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::int64_t i = 0; i < sources; ++i) {
      acc += pair_scores[static_cast<std::size_t>(i)]
                        [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]
                            .item();
    }
    const double mean_score = acc / static_cast<double>(sources);
    if (mean_score > best_mean) {  // first maximal assignment wins ties
      best_mean = mean_score;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Tensor total = pair_scores[0][static_cast<std::size_t>(best_perm[0])];
  for (std::int64_t i = 1; i < sources; ++i) {
    total = add(total, pair_scores[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(
                                      best_perm[static_cast<std::size_t>(i)])]);
  }
  PitResult result;
  result.loss = neg(scale(total, 1.0 / static_cast<double>(sources)));
  result.permutation = std::move(best_perm);
  result.mean_si_sdr = best_mean;
  return result;
}

namespace {

// Shared improvement scaffold: best-permutation mean of `metric` minus the
// mixture baseline.
template <typename Metric>
double improvement(const std::vector<std::vector<double>>& ests,
                   const std::vector<std::vector<double>>& refs,
                   std::span<const double> mixture, Metric metric) {
  if (ests.empty() || ests.size() != refs.size()) {
    fail(ErrorKind::kShapeMismatch,
         "improvement: estimate/reference counts differ");
  }
  const std::size_t sources = ests.size();
  std::vector<std::int64_t> perm(sources);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < sources; ++i) {
      acc += metric(std::span<const double>(ests[i]),
                    std::span<const double>(refs[static_cast<std::size_t>(
                        perm[i])]));
    }
    best = std::max(best, acc / static_cast<double>(sources));
  } while (std::next_permutation(perm.begin(), perm.end()));

  double baseline = 0.0;
  for (std::size_t j = 0; j < sources; ++j) {
    baseline += metric(mixture, std::span<const double>(refs[j]));
  }
  baseline /= static_cast<double>(sources);
  return best - baseline;
}

}  // namespace

double si_sdri(const std::vector<std::vector<double>>& ests,
               const std::vector<std::vector<double>>& refs,
               std::span<const double> mixture) {
  return improvement(ests, refs, mixture,
                     [](std::span<const double> a, std::span<const double> b) {
                       return si_sdr(a, b);
                     });
}

double sdri(const std::vector<std::vector<double>>& ests,
            const std::vector<std::vector<double>>& refs,
            std::span<const double> mixture) {
  return improvement(ests, refs, mixture,
                     [](std::span<const double> a, std::span<const double> b) {
                       return sdr(a, b);
                     });
}

}  // namespace arfdcn
