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

#include "arfdcn/synth.h"

#include <cmath>

#include "arfdcn/error.h"
#include "arfdcn/rng.h"

namespace arfdcn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rms(const std::vector<double>& x) {
  double acc = 0.0;
  for (const double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

std::vector<double> gen_source(const SourceSpec& spec, std::int64_t n,
                               std::int64_t rate, Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double nyquist = static_cast<double>(rate) / 2.0;
  switch (spec.kind) {
    case SourceKind::kSine: {
      const double freq =
          spec.param0 ? *spec.param0 : rng.uniform(100.0, nyquist * 0.5);
      const double phase = rng.uniform(0.0, 2.0 * kPi);
      for (std::int64_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            std::sin(2.0 * kPi * freq * static_cast<double>(i) /
                         static_cast<double>(rate) +
                     phase);
      }
      break;
    }
    case SourceKind::kChirp: {
      const double f0 =
          spec.param0 ? *spec.param0 : rng.uniform(100.0, nyquist * 0.25);
      const double f1 =
          spec.param1 ? *spec.param1 : rng.uniform(f0, nyquist * 0.9);
      const double phase = rng.uniform(0.0, 2.0 * kPi);
      const double dur = static_cast<double>(n) / static_cast<double>(rate);
      for (std::int64_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(rate);
        // linear sweep; instantaneous frequency f0 + (f1-f0)*t/dur
        out[static_cast<std::size_t>(i)] = std::sin(
            phase + 2.0 * kPi * (f0 * t + 0.5 * (f1 - f0) * t * t / dur));
      }
      break;
    }
    case SourceKind::kFilteredNoise: {
      const double cutoff =
          spec.param0 ? *spec.param0 : rng.uniform(500.0, nyquist * 0.8);
      // one-pole lowpass on white noise
      const double alpha =
          std::exp(-2.0 * kPi * cutoff / static_cast<double>(rate));
      double state = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        state = alpha * state + (1.0 - alpha) * rng.uniform(-1.0, 1.0);
        out[static_cast<std::size_t>(i)] = state;
      }
      break;
    }
  }
  return out;
}

}  // namespace

SourceSpec SourceSpec::parse(const std::string& text) {
  SourceSpec spec;
  std::string body = text;
  const auto at = body.find('@');
  if (at != std::string::npos) {
    try {
      spec.level_db = std::stod(body.substr(at + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::kInvalidArgument,
           "source spec '" + text + "': bad level suffix");
    }
    body = body.substr(0, at);
  }
  std::string kind = body;
  std::string arg;
  const auto colon = body.find(':');
  if (colon != std::string::npos) {
    kind = body.substr(0, colon);
    arg = body.substr(colon + 1);
  }
  try {
    if (kind == "sine") {
      spec.kind = SourceKind::kSine;
      if (!arg.empty()) spec.param0 = std::stod(arg);
    } else if (kind == "chirp") {
      spec.kind = SourceKind::kChirp;
      if (!arg.empty()) {
        const auto dash = arg.find('-');
        if (dash == std::string::npos) {
          fail(ErrorKind::kInvalidArgument,
               "source spec '" + text + "': chirp expects f0-f1");
        }
        spec.param0 = std::stod(arg.substr(0, dash));
        spec.param1 = std::stod(arg.substr(dash + 1));
      }
    } else if (kind == "noise") {
      spec.kind = SourceKind::kFilteredNoise;
      if (!arg.empty()) spec.param0 = std::stod(arg);
    } else {
      fail(ErrorKind::kInvalidArgument,
           "source spec '" + text + "': unknown kind '" + kind + "'");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::kInvalidArgument,
         "source spec '" + text + "': bad numeric argument");
  }
  return spec;
}

void MixtureSpec::validate() const {
  if (duration_s <= 0.0 || sample_rate < 1) {
    fail(ErrorKind::kInvalidArgument,
         "mixture spec: duration and sample rate must be positive");
  }
  if (sources.size() < 2) {
    fail(ErrorKind::kInvalidArgument, "mixture spec: need at least 2 sources");
  }
}

MixtureSample synth_mixture(std::uint64_t seed, const MixtureSpec& spec) {
  spec.validate();
  const std::int64_t n = static_cast<std::int64_t>(
      std::llround(spec.duration_s * static_cast<double>(spec.sample_rate)));
  if (n < 2) {
    fail(ErrorKind::kInvalidArgument, "mixture spec: too few samples");
  }

  Rng root(seed);
  MixtureSample sample;
  sample.sample_rate = spec.sample_rate;
  sample.seed = seed;

  for (std::size_t s = 0; s < spec.sources.size(); ++s) {
    Rng rng = root.split(static_cast<std::uint64_t>(s));
    std::vector<double> wave =
        gen_source(spec.sources[s], n, spec.sample_rate, rng);
    const double r = rms(wave);
    if (r == 0.0) {
      fail(ErrorKind::kInvalidArgument, "synth: degenerate zero-energy source");
    }
    const double gain = std::pow(10.0, spec.sources[s].level_db / 20.0) / r;
    for (double& v : wave) v *= gain;
    sample.gains.push_back(gain);
    sample.sources.push_back(std::move(wave));
  }

  if (spec.noise_level_db) {
    Rng rng = root.split(0xA0B1C2D3ull);
    SourceSpec noise_spec;
    noise_spec.kind = SourceKind::kFilteredNoise;
    std::vector<double> wave = gen_source(noise_spec, n, spec.sample_rate, rng);
    const double r = rms(wave);
    const double gain = r == 0.0 ? 0.0 : std::pow(10.0, *spec.noise_level_db / 20.0) / r;
    for (double& v : wave) v *= gain;
    sample.noise = std::move(wave);
  }

  // The mixture identity (mixture == sum of parts, bit-exact) is the
  // generation contract; downstream checks rely on it.
  sample.mixture.assign(static_cast<std::size_t>(n), 0.0);
  for (const std::vector<double>& src : sample.sources) {
    for (std::size_t i = 0; i < src.size(); ++i) sample.mixture[i] += src[i];
  }
  if (!sample.noise.empty()) {
    for (std::size_t i = 0; i < sample.noise.size(); ++i) {
      sample.mixture[i] += sample.noise[i];
    }
  }
  return sample;
}

}  // namespace arfdcn
