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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "arfdcn/objective.h"
#include "arfdcn/ops.h"
#include "arfdcn/rng.h"
#include "gradcheck.h"

using namespace arfdcn;
using testing::grad_check;
using testing::random_tensor;

namespace {

// Deliberately separate straightforward implementation used as the oracle.
double oracle_si_sdr(const std::vector<double>& est,
                     const std::vector<double>& ref) {
  const std::size_t n = est.size();
  double me = 0.0;
  double mr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    me += est[i];
    mr += ref[i];
  }
  me /= static_cast<double>(n);
  mr /= static_cast<double>(n);
  std::vector<double> e(n);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = est[i] - me;
    r[i] = ref[i] - mr;
  }
  double dot = 0.0;
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += e[i] * r[i];
    rr += r[i] * r[i];
  }
  double st = 0.0;
  double en = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = dot / rr * r[i];
    st += s * s;
    en += (e[i] - s) * (e[i] - s);
  }
  if (st == 0.0) return -60.0;
  if (en == 0.0) return 60.0;
  double v = 10.0 * std::log10(st / en);
  if (v > 60.0) v = 60.0;
  if (v < -60.0) v = -60.0;
  return v;
}

std::vector<double> row(const Tensor& t, std::int64_t i) {
  const double* begin = t.data() + i * t.dim(1);
  return std::vector<double>(begin, begin + t.dim(1));
}

}  // namespace

TEST_CASE("si_sdr examples") {
  SUBCASE("exact recovery hits the ceiling") {
    const std::vector<double> ref{0.3, -0.2, 0.7, 0.1};
    CHECK(si_sdr(ref, ref) == 60.0);
  }
  SUBCASE("estimate scaling is absorbed by the projection") {
    const std::vector<double> ref{0.3, -0.2, 0.7, 0.1};
    std::vector<double> est = ref;
    for (double& v : est) v *= 3.0;
    CHECK(si_sdr(est, ref) == 60.0);
  }
  SUBCASE("hand-computed value") {
    const std::vector<double> est{1, 0, -1};
    const std::vector<double> ref{1, -1, 0};
    CHECK(si_sdr(est, ref) ==
          doctest::Approx(10.0 * std::log10(0.5 / 1.5)).epsilon(1e-12));
    CHECK(si_sdr(est, ref) == doctest::Approx(-4.771).epsilon(1e-3));
  }
  SUBCASE("zero-energy reference is an error") {
    const std::vector<double> ref{0.5, 0.5, 0.5};  // zero after mean removal
    const std::vector<double> est{1, 2, 3};
    CHECK_THROWS_AS(si_sdr(est, ref), Error);
  }
  SUBCASE("zero-energy estimate returns the floor") {
    const std::vector<double> ref{1, -1, 0};
    const std::vector<double> est{2, 2, 2};
    CHECK(si_sdr(est, ref) == -60.0);
  }
}

TEST_CASE("si_sdr scale invariance to 1e-9 dB") {
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> est(64);
    std::vector<double> ref(64);
    for (auto& v : est) v = rng.uniform(-1, 1);
    for (auto& v : ref) v = rng.uniform(-1, 1);
    const double base = si_sdr(est, ref);
    for (const double c : {0.01, 0.5, 3.0, 1234.0}) {
      std::vector<double> scaled = est;
      for (double& v : scaled) v *= c;
      CHECK(std::fabs(si_sdr(scaled, ref) - base) < 1e-9);
    }
  }
}

TEST_CASE("si_sdr tensor path agrees with the plain path") {
  Rng rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor est = random_tensor({50}, rng, -1, 1, false);
    Tensor ref = random_tensor({50}, rng, -1, 1, false);
    const double plain = si_sdr(est.to_vector(), ref.to_vector());
    const double graph = si_sdr(est, ref).item();
    CHECK(graph == doctest::Approx(plain).epsilon(1e-12));
  }
}

TEST_CASE("si_sdr monotone under growing orthogonal noise") {
  // Build noise exactly orthogonal to the zero-mean reference.
  std::vector<double> ref{1.0, -1.0, 0.5, -0.5};
  std::vector<double> noise{1.0, 1.0, -2.0, -2.0};  // zero-mean
  double dot = 0.0;
  double rr = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dot += noise[i] * ref[i];
    rr += ref[i] * ref[i];
  }
  for (std::size_t i = 0; i < ref.size(); ++i) noise[i] -= dot / rr * ref[i];

  double prev = si_sdr(ref, ref);
  for (const double eps : {1e-3, 1e-2, 1e-1, 1.0}) {
    std::vector<double> est = ref;
    for (std::size_t i = 0; i < est.size(); ++i) est[i] += eps * noise[i];
    const double cur = si_sdr(est, ref);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("si_sdr gradient away from the clamp") {
  Rng rng(73);
  Tensor est = random_tensor({24}, rng, -1, 1);
  Tensor ref = random_tensor({24}, rng, -1, 1, false);
  auto result = grad_check({est}, [&] { return si_sdr(est, ref); });
  INFO(result.worst);
  CHECK(result.ok);
}

TEST_CASE("pit_loss basics") {
  SUBCASE("perfect estimates, identity permutation") {
    Tensor refs({2, 4}, {0.4, -0.4, 0.2, 0.0, -0.1, 0.3, -0.3, 0.1});
    PitResult pit = pit_loss(refs, refs);
    CHECK(pit.loss.item() == -60.0);
    CHECK(pit.permutation == std::vector<std::int64_t>{0, 1});
  }
  SUBCASE("swapped estimates give the same loss through the swap") {
    Tensor refs({2, 4}, {0.4, -0.4, 0.2, 0.0, -0.1, 0.3, -0.3, 0.1});
    Tensor swapped({2, 4}, {-0.1, 0.3, -0.3, 0.1, 0.4, -0.4, 0.2, 0.0});
    PitResult pit = pit_loss(swapped, refs);
    CHECK(pit.loss.item() == -60.0);
    CHECK(pit.permutation == std::vector<std::int64_t>{1, 0});
  }
}

TEST_CASE("pit_loss equals brute-force enumeration on random cases") {
  Rng rng(74);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor ests = random_tensor({2, 64}, rng, -1, 1, false);
    Tensor refs = random_tensor({2, 64}, rng, -1, 1, false);
    const PitResult pit = pit_loss(ests, refs);

    const double id_mean = (oracle_si_sdr(row(ests, 0), row(refs, 0)) +
                            oracle_si_sdr(row(ests, 1), row(refs, 1))) /
                           2.0;
    const double sw_mean = (oracle_si_sdr(row(ests, 0), row(refs, 1)) +
                            oracle_si_sdr(row(ests, 1), row(refs, 0))) /
                           2.0;
    const double best = std::max(id_mean, sw_mean);
    CHECK(pit.mean_si_sdr == doctest::Approx(best).epsilon(1e-12));
    CHECK(pit.loss.item() == doctest::Approx(-best).epsilon(1e-12));
    const std::vector<std::int64_t> expect =
        id_mean >= sw_mean ? std::vector<std::int64_t>{0, 1}
                           : std::vector<std::int64_t>{1, 0};
    CHECK(pit.permutation == expect);
  }
}

TEST_CASE("permutation symmetry of the loss is exact") {
  Rng rng(75);
  Tensor ests = random_tensor({2, 32}, rng, -1, 1, false);
  Tensor refs = random_tensor({2, 32}, rng, -1, 1, false);
  Tensor refs_swapped =
      concat({reshape(select(refs, 1), {1, 32}), reshape(select(refs, 0), {1, 32})}, 0);
  CHECK(pit_loss(ests, refs).loss.item() ==
        pit_loss(ests, refs_swapped).loss.item());
}

TEST_CASE("improvement metrics") {
  Rng rng(76);
  std::vector<double> s1(128);
  std::vector<double> s2(128);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const double t = static_cast<double>(i) / 8000.0;
    s1[i] = std::sin(2 * 3.14159265358979323846 * 440.0 * t);
    s2[i] = 0.8 * std::sin(2 * 3.14159265358979323846 * 660.0 * t + 0.3);
  }
  std::vector<double> mixture(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) mixture[i] = s1[i] + s2[i];
  const std::vector<std::vector<double>> refs{s1, s2};

  SUBCASE("mixture as every estimate improves nothing") {
    const std::vector<std::vector<double>> ests{mixture, mixture};
    CHECK(si_sdri(ests, refs, mixture) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sdri(ests, refs, mixture) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("perfect estimates hit ceiling minus baseline") {
    const std::vector<std::vector<double>> ests{s1, s2};
    const double baseline =
        (oracle_si_sdr(mixture, s1) + oracle_si_sdr(mixture, s2)) / 2.0;
    CHECK(si_sdri(ests, refs, mixture) ==
          doctest::Approx(60.0 - baseline).epsilon(1e-9));
  }
  SUBCASE("oracle projection scaling beats the mixture, cross-checked") {
    // Wiener-like oracle: project the mixture onto each reference.
    std::vector<std::vector<double>> ests;
    for (const auto& s : refs) {
      double dot = 0.0;
      double ss = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        dot += mixture[i] * s[i];
        ss += s[i] * s[i];
      }
      std::vector<double> est(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) est[i] = dot / ss * s[i];
      ests.push_back(std::move(est));
    }
    const double got = si_sdri(ests, refs, mixture);
    CHECK(got > 0.0);

    // independent full recomputation (best permutation by enumeration)
    const double id_mean =
        (oracle_si_sdr(ests[0], s1) + oracle_si_sdr(ests[1], s2)) / 2.0;
    const double sw_mean =
        (oracle_si_sdr(ests[0], s2) + oracle_si_sdr(ests[1], s1)) / 2.0;
    const double baseline =
        (oracle_si_sdr(mixture, s1) + oracle_si_sdr(mixture, s2)) / 2.0;
    CHECK(got ==
          doctest::Approx(std::max(id_mean, sw_mean) - baseline).epsilon(1e-12));
  }
}
